#include <algorithm>
#include <set>

#include "sigsearch/tree.hpp"

namespace sigsearch {

namespace {

struct Branch {
  std::string endpoint;
  NodeId source;  // node in the input tree the branch ends at
  double length;
  bool inserted;
};

}  // namespace

RootedTree normalize(const RootedTree& tree) {
  std::set<std::string, std::less<>> used;
  for (std::size_t i = 0; i < tree.node_count(); ++i) used.insert(tree.name(node_id(i)));

  auto fresh_name = [&used](const std::string& base, std::size_t k) {
    std::string name = base + "#" + std::to_string(k);
    while (used.contains(name)) name += "#";
    used.insert(name);
    return name;
  };

  std::vector<EdgeSpec> out;
  out.reserve(tree.arc_count() * 2);

  std::vector<NodeId> work{tree.root()};
  while (!work.empty()) {
    const NodeId v = work.back();
    work.pop_back();
    const std::string& vname = tree.name(v);

    // Contract single-child chains below each child.
    std::vector<Branch> kids;
    for (NodeId c : tree.children(v)) {
      double len = tree.arc_length(c);
      bool all_inserted = tree.arc_inserted(c);
      NodeId cur = c;
      while (tree.children(cur).size() == 1) {
        cur = tree.children(cur).front();
        len += tree.arc_length(cur);
        all_inserted = all_inserted && tree.arc_inserted(cur);
      }
      kids.push_back({tree.name(cur), cur, len, all_inserted && len == 0.0});
      work.push_back(cur);
    }
    std::sort(kids.begin(), kids.end(),
              [](const Branch& x, const Branch& y) { return x.endpoint < y.endpoint; });

    if (kids.size() <= 2) {
      for (const auto& k : kids) out.push_back({vname, k.endpoint, k.length, k.inserted});
      continue;
    }

    // Left fold: ((k0, k1), k2), ... ; v keeps the last fold node and the last child.
    std::string acc_name = kids[0].endpoint;
    double acc_len = kids[0].length;
    bool acc_inserted = kids[0].inserted;
    for (std::size_t i = 1; i + 1 < kids.size(); ++i) {
      std::string joint = fresh_name(vname, i);
      out.push_back({joint, acc_name, acc_len, acc_inserted});
      out.push_back({joint, kids[i].endpoint, kids[i].length, kids[i].inserted});
      acc_name = std::move(joint);
      acc_len = 0.0;
      acc_inserted = true;
    }
    out.push_back({vname, acc_name, acc_len, acc_inserted});
    const auto& last = kids.back();
    out.push_back({vname, last.endpoint, last.length, last.inserted});
  }

  return RootedTree::build(tree.name(tree.root()), out);
}

}  // namespace sigsearch

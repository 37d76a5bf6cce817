#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sigsearch/tree.hpp"

namespace sigsearch {

using nlohmann::json;

namespace {

[[noreturn]] void syntax_error(const std::string& what) {
  throw TreeError(TreeErrorKind::Syntax, what);
}

}  // namespace

RootedTree parse_tree(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    syntax_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) syntax_error("tree file must be a JSON object");

  auto root_it = doc.find("root");
  if (root_it == doc.end() || !root_it->is_string()) syntax_error("missing string field \"root\"");
  auto edges_it = doc.find("edges");
  if (edges_it == doc.end() || !edges_it->is_array()) syntax_error("missing array field \"edges\"");

  std::vector<EdgeSpec> edges;
  edges.reserve(edges_it->size());
  for (std::size_t i = 0; i < edges_it->size(); ++i) {
    const auto& e = (*edges_it)[i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!e.is_array() || (e.size() != 3 && e.size() != 4)) {
      syntax_error(where + " must be [parent, child, length]");
    }
    if (!e[0].is_string() || !e[1].is_string()) syntax_error(where + " endpoints must be strings");
    if (!e[2].is_number()) syntax_error(where + " length must be a number");
    // Optional 4th element flags a binarization arc, as written by to_json().
    bool inserted = false;
    if (e.size() == 4) {
      if (!e[3].is_boolean()) syntax_error(where + " inserted flag must be a boolean");
      inserted = e[3].get<bool>();
    }
    edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<double>(), inserted});
  }
  return RootedTree::build(root_it->get<std::string>(), edges);
}

RootedTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tree file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tree(buf.str());
}

std::string to_json(const RootedTree& tree) {
  json edges = json::array();
  for (const auto& e : tree.edges()) {
    if (e.inserted) {
      edges.push_back(json::array({e.a, e.b, e.length, true}));
    } else {
      edges.push_back(json::array({e.a, e.b, e.length}));
    }
  }
  json doc{{"root", tree.name(tree.root())}, {"edges", std::move(edges)}};
  return doc.dump();
}

}  // namespace sigsearch

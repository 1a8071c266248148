#pragma once

// JSON form of an attributed graph:
//   {"attrs":[int,...],"edges":[[i,j],...]}
// with 0-based vertex indices.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sepx/error.hpp"
#include "sepx/graph.hpp"

namespace sepx {

using json = nlohmann::json;

inline json graph_to_json(const AttributedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.from, e.to});
  return json{{"attrs", g.attrs()}, {"edges", std::move(edges)}};
}

inline AttributedGraph graph_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("graph document must be a JSON object");
  if (!doc.contains("attrs")) throw InputError("missing field 'attrs'");
  if (!doc.contains("edges")) throw InputError("missing field 'edges'");
  const json& attrs_doc = doc.at("attrs");
  const json& edges_doc = doc.at("edges");
  if (!attrs_doc.is_array()) throw InputError("field 'attrs' must be an array");
  if (!edges_doc.is_array()) throw InputError("field 'edges' must be an array");

  std::vector<Attr> attrs;
  for (std::size_t i = 0; i < attrs_doc.size(); ++i) {
    if (!attrs_doc[i].is_number_integer()) {
      throw InputError("attrs[" + std::to_string(i) + "]: expected an integer");
    }
    attrs.push_back(attrs_doc[i].get<Attr>());
  }
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < edges_doc.size(); ++k) {
    const json& e = edges_doc[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw InputError("edges[" + std::to_string(k) + "]: expected a pair [i,j] of integers");
    }
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return AttributedGraph(std::move(attrs), std::move(edges));
}

inline AttributedGraph parse_graph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return graph_from_json(doc);
}

inline AttributedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_graph(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace sepx

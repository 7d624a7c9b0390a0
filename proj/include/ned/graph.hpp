#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ned/error.hpp"

namespace ned {

// Shortest round-trip decimal form, stable across runs and platforms.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Per-document term shares: score(t) = tf(t) / sum of tf over the
// document's terms. Scores are strictly positive and sum to 1.
struct SignificanceVector {
  std::string doc_id;
  std::map<std::string, double> scores;
};

inline SignificanceVector significance(
    const std::string& doc_id, const std::map<std::string, int>& term_counts) {
  if (term_counts.empty()) {
    throw Error(Errc::no_entities, "document " + doc_id + " has no terms");
  }
  long long total = 0;
  for (const auto& [term, count] : term_counts) {
    if (count <= 0) {
      throw Error(Errc::invalid_argument,
                  "non-positive count for term " + term);
    }
    total += count;
  }
  SignificanceVector sig;
  sig.doc_id = doc_id;
  double sum = 0.0;
  for (const auto& [term, count] : term_counts) {
    double s = static_cast<double>(count) / static_cast<double>(total);
    sig.scores[term] = s;
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::logic_error("significance scores do not sum to 1");
  }
  return sig;
}

// Unordered term pair with lexicographic key order, so symmetry is
// structural.
using EdgeKey = std::pair<std::string, std::string>;

inline EdgeKey make_edge_key(const std::string& a, const std::string& b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

// Weight contributed by one document to each unordered pair of its terms:
// the sum of the two significance scores. Pairs that do not co-occur in the
// document get nothing.
inline std::map<EdgeKey, double> doc_edge_contribution(
    const SignificanceVector& sig) {
  std::map<EdgeKey, double> edges;
  for (auto i = sig.scores.begin(); i != sig.scores.end(); ++i) {
    auto j = i;
    for (++j; j != sig.scores.end(); ++j) {
      edges[EdgeKey{i->first, j->first}] = i->second + j->second;
    }
  }
  return edges;
}

// Weighted undirected co-occurrence graph over string terms for one time
// block. Serves both the entity graph and the entity+phrase graph.
struct TermGraph {
  std::size_t block_index = 0;
  std::set<std::string> nodes;
  std::map<EdgeKey, double> edge_weights;
  std::map<std::string, double> degrees;  // maintained during aggregation
  std::size_t doc_count = 0;

  double weighted_degree(const std::string& node) const {
    auto it = degrees.find(node);
    return it == degrees.end() ? 0.0 : it->second;
  }

  double total_edge_weight() const {
    double total = 0.0;
    for (const auto& [key, w] : edge_weights) total += w;
    return total;
  }
};

// Per-document term counts for the documents of one block, in block order.
using DocTerms = std::vector<std::pair<std::string, std::map<std::string, int>>>;

// Sums per-document edge contributions. Documents with no terms contribute
// nothing; single-term documents contribute an isolated node.
inline TermGraph aggregate_block(std::size_t block_index,
                                 const DocTerms& doc_terms) {
  TermGraph g;
  g.block_index = block_index;
  g.doc_count = doc_terms.size();
  for (const auto& [doc_id, counts] : doc_terms) {
    if (counts.empty()) continue;
    for (const auto& [term, count] : counts) g.nodes.insert(term);
    if (counts.size() < 2) continue;
    SignificanceVector sig = significance(doc_id, counts);
    for (const auto& [key, w] : doc_edge_contribution(sig)) {
      g.edge_weights[key] += w;
      g.degrees[key.first] += w;
      g.degrees[key.second] += w;
    }
  }
  return g;
}

inline double weighted_degree(const TermGraph& g, const std::string& node) {
  return g.weighted_degree(node);
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

inline std::string to_graphml(const TermGraph& g) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  out +=
      "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" "
      "attr.type=\"double\"/>\n";
  out += "  <graph id=\"block_" + std::to_string(g.block_index) +
         "\" edgedefault=\"undirected\">\n";
  for (const std::string& node : g.nodes) {
    out += "    <node id=\"" + detail::xml_escape(node) + "\"/>\n";
  }
  for (const auto& [key, w] : g.edge_weights) {
    out += "    <edge source=\"" + detail::xml_escape(key.first) +
           "\" target=\"" + detail::xml_escape(key.second) +
           "\"><data key=\"w\">" + format_double(w) + "</data></edge>\n";
  }
  out += "  </graph>\n";
  out += "</graphml>\n";
  return out;
}

inline nlohmann::ordered_json to_edge_list_json(const TermGraph& g) {
  nlohmann::ordered_json j;
  j["block"] = g.block_index;
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [key, w] : g.edge_weights) {
    nlohmann::ordered_json e;
    e["a"] = key.first;
    e["b"] = key.second;
    e["w"] = w;
    j["edges"].push_back(std::move(e));
  }
  return j;
}

}  // namespace ned

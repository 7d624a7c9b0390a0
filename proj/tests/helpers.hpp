#pragma once

// Shared fixtures and independent oracles for the test suite. The oracles
// deliberately recompute results from first principles with different code
// paths than the library, so agreement is evidence rather than tautology.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ned/graph.hpp"
#include "ned/ingest.hpp"

namespace test_helpers {

inline std::mt19937 make_rng(unsigned seed) { return std::mt19937(seed); }

// Random per-document term histogram over a small shared vocabulary.
inline std::map<std::string, int> random_terms(std::mt19937& rng,
                                               int min_terms, int max_terms,
                                               int vocab = 30) {
  std::uniform_int_distribution<int> n_dist(min_terms, max_terms);
  std::uniform_int_distribution<int> word_dist(0, vocab - 1);
  std::uniform_int_distribution<int> count_dist(1, 5);
  int n = n_dist(rng);
  std::map<std::string, int> terms;
  while (static_cast<int>(terms.size()) < n) {
    terms["term" + std::to_string(word_dist(rng))] = count_dist(rng);
  }
  return terms;
}

// Pair weights for one document computed directly from the definition:
// normalize counts, then add s_i + s_j for every unordered pair.
inline std::map<std::pair<std::string, std::string>, double> oracle_doc_pairs(
    const std::map<std::string, int>& counts) {
  double total = 0.0;
  for (const auto& [term, c] : counts) total += c;
  std::vector<std::pair<std::string, double>> sig;
  for (const auto& [term, c] : counts) sig.emplace_back(term, c / total);
  std::map<std::pair<std::string, std::string>, double> pairs;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    for (std::size_t j = i + 1; j < sig.size(); ++j) {
      auto key = sig[i].first < sig[j].first
                     ? std::make_pair(sig[i].first, sig[j].first)
                     : std::make_pair(sig[j].first, sig[i].first);
      pairs[key] = sig[i].second + sig[j].second;
    }
  }
  return pairs;
}

// Peaking block indices recomputed from scratch, block-centric: block b
// fires when the entry step into b exceeds the mean of the x prior steps
// by y sample standard deviations.
inline std::set<std::size_t> oracle_peaks(const std::vector<double>& values,
                                          int x, double y) {
  std::set<std::size_t> out;
  std::vector<double> steps;
  for (std::size_t i = 1; i < values.size(); ++i) {
    steps.push_back(values[i] - values[i - 1]);
  }
  for (std::size_t b = static_cast<std::size_t>(x) + 1; b < values.size();
       ++b) {
    double sum = 0.0;
    for (std::size_t k = b - 1 - x; k <= b - 2; ++k) sum += steps[k];
    double mean = sum / x;
    double sq = 0.0;
    for (std::size_t k = b - 1 - x; k <= b - 2; ++k) {
      sq += (steps[k] - mean) * (steps[k] - mean);
    }
    double sd = std::sqrt(sq / (x - 1));
    if (steps[b - 1] > mean + y * sd) out.insert(b);
  }
  return out;
}

// All set partitions of {0..n-1} as restricted growth strings.
inline void partitions_rec(int n, int i, int max_label, std::vector<int>& a,
                           std::vector<std::vector<int>>& out) {
  if (i == n) {
    out.push_back(a);
    return;
  }
  for (int c = 0; c <= max_label + 1; ++c) {
    a[i] = c;
    partitions_rec(n, i + 1, std::max(max_label, c), a, out);
  }
}

inline std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 0);
  if (n == 0) return out;
  partitions_rec(n, 1, 0, a, out);
  return out;
}

// Modularity straight from the matrix form: sum over ordered node pairs in
// the same community of (A_ij - k_i k_j / 2m) / 2m.
inline double oracle_modularity(const ned::TermGraph& g,
                                const std::vector<int>& labels,
                                double resolution = 1.0) {
  std::vector<std::string> nodes(g.nodes.begin(), g.nodes.end());
  std::size_t n = nodes.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[nodes[i]] = i;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& [key, w] : g.edge_weights) {
    std::size_t i = idx.at(key.first);
    std::size_t j = idx.at(key.second);
    a[i][j] += w;
    a[j][i] += w;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[i] != labels[j]) continue;
      q += a[i][j] - resolution * k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

// Exhaustive best modularity over every partition of the graph's nodes.
inline double best_partition_modularity(const ned::TermGraph& g,
                                        double resolution = 1.0) {
  int n = static_cast<int>(g.nodes.size());
  double best = -2.0;
  for (const std::vector<int>& labels : all_partitions(n)) {
    best = std::max(best, oracle_modularity(g, labels, resolution));
  }
  return best;
}

// Fixture graph from an explicit weighted edge list.
inline ned::TermGraph make_graph(
    const std::vector<std::tuple<std::string, std::string, double>>& edges,
    const std::vector<std::string>& extra_nodes = {}) {
  ned::TermGraph g;
  for (const auto& [a, b, w] : edges) {
    g.nodes.insert(a);
    g.nodes.insert(b);
    g.edge_weights[ned::make_edge_key(a, b)] += w;
    g.degrees[a] += w;
    g.degrees[b] += w;
  }
  for (const std::string& node : extra_nodes) g.nodes.insert(node);
  return g;
}

// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate = base / ("ned_test_" + std::to_string(::getpid()) +
                               "_" + std::to_string(counter() + i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path = candidate;
        counter() += i + 1;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const {
    return path / name;
  }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// JSONL corpus record with pre-annotated entities. Spans are located by
// searching the text for each surface left to right.
inline nlohmann::ordered_json make_record(
    const std::string& id, std::int64_t ts_ms, const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& mentions,
    const std::string& source_kind = "article") {
  nlohmann::ordered_json rec;
  rec["id"] = id;
  rec["timestamp"] = ts_ms;
  rec["text"] = text;
  rec["source_kind"] = source_kind;
  if (!mentions.empty()) {
    rec["entities"] = nlohmann::ordered_json::array();
    std::size_t cursor = 0;
    for (const auto& [surface, kind] : mentions) {
      std::size_t at = text.find(surface, cursor);
      if (at == std::string::npos) at = text.find(surface);
      if (at == std::string::npos) {
        throw std::runtime_error("surface not in text: " + surface);
      }
      rec["entities"].push_back({{"surface", surface},
                                 {"kind", kind},
                                 {"start", at},
                                 {"end", at + surface.size()}});
      cursor = at + surface.size();
    }
  }
  return rec;
}

constexpr std::int64_t kDayMs = 86'400'000;

// Corpus for the end-to-end checks: constant background chatter in every
// block, plus two independent topics bursting in one block. Each topic
// carries three entities and two multi-word phrases per document.
inline std::string synthetic_two_topic_corpus(int blocks, int burst_block,
                                              int burst_docs_per_topic) {
  std::string out;
  for (int b = 0; b < blocks; ++b) {
    std::int64_t day = static_cast<std::int64_t>(b) * kDayMs;
    for (int k = 0; k < 2; ++k) {
      auto rec = make_record(
          "bg-" + std::to_string(b) + "-" + std::to_string(k),
          day + 3'600'000 + k * 60'000,
          "Acme Corp and Zenith Ltd were at the annual budget review.",
          {{"Acme Corp", "ORG"}, {"Zenith Ltd", "ORG"}});
      out += rec.dump();
      out += '\n';
    }
    if (b != burst_block) continue;
    for (int k = 0; k < burst_docs_per_topic; ++k) {
      auto rec = make_record(
          "ta-" + std::to_string(k), day + 7'200'000 + k * 60'000,
          "Red Lion and Green River and Blue Mountain were at the "
          "solar farm and the wind turbine.",
          {{"Red Lion", "ORG"},
           {"Green River", "LOC"},
           {"Blue Mountain", "LOC"}});
      out += rec.dump();
      out += '\n';
    }
    for (int k = 0; k < burst_docs_per_topic; ++k) {
      auto rec = make_record(
          "tb-" + std::to_string(k), day + 10'800'000 + k * 60'000,
          "Silver Fox and Golden Eagle and Purple Heron were at the "
          "coral reef and the tidal lagoon.",
          {{"Silver Fox", "ORG"},
           {"Golden Eagle", "ORG"},
           {"Purple Heron", "ORG"}});
      out += rec.dump();
      out += '\n';
    }
  }
  return out;
}

}  // namespace test_helpers

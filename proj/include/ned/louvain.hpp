#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ned/error.hpp"
#include "ned/graph.hpp"

namespace ned {

// Partition of graph nodes into communities, keyed by node name. Community
// ids are dense and numbered by first appearance in lexicographic node
// order.
using Partition = std::map<std::string, int>;

// Modularity of a partition: sum over communities of
//   in_C / (2m) - resolution * (tot_C / (2m))^2
// where in_C is twice the internal edge weight and tot_C the summed
// weighted degree of members. Edgeless graphs score 0.
inline double modularity(const TermGraph& g, const Partition& partition,
                         double resolution = 1.0) {
  double two_m = 2.0 * g.total_edge_weight();
  if (two_m <= 0.0) return 0.0;
  std::map<int, double> in2;   // 2 * internal weight per community
  std::map<int, double> tot;   // summed weighted degree per community
  for (const auto& [node, deg] : g.degrees) {
    tot[partition.at(node)] += deg;
  }
  for (const auto& [key, w] : g.edge_weights) {
    int ca = partition.at(key.first);
    int cb = partition.at(key.second);
    if (ca == cb) in2[ca] += 2.0 * w;
  }
  double q = 0.0;
  for (const auto& [c, t] : tot) {
    auto it = in2.find(c);
    double in_c = (it == in2.end()) ? 0.0 : it->second;
    q += in_c / two_m - resolution * (t / two_m) * (t / two_m);
  }
  return q;
}

namespace detail {

// Working graph for coarsened levels: integer nodes, adjacency with
// self-loops holding the internal weight of collapsed communities.
struct LevelGraph {
  int n = 0;
  std::vector<std::map<int, double>> adj;  // adj[i][i] = self-loop weight
  std::vector<double> degree;              // includes 2 * self-loop
  double two_m = 0.0;
};

// One pass of local moving. Nodes are visited in index order (which at
// level 0 is lexicographic node order) until a full sweep makes no move.
// Returns the node -> community assignment.
inline std::vector<int> local_moving(const LevelGraph& g, double resolution) {
  std::vector<int> comm(g.n);
  for (int i = 0; i < g.n; ++i) comm[i] = i;
  std::vector<double> tot(g.degree);

  bool moved = true;
  while (moved) {
    moved = false;
    for (int i = 0; i < g.n; ++i) {
      int old_c = comm[i];
      double k_i = g.degree[i];
      tot[old_c] -= k_i;

      // Weight from i to each neighboring community (self-loops excluded:
      // they move with the node and cancel out of the gain comparison).
      std::map<int, double> links;
      links[old_c];  // staying put is always a candidate
      for (const auto& [j, w] : g.adj[i]) {
        if (j == i) continue;
        links[comm[j]] += w;
      }

      // Moves require a strict gain over staying; among equally good
      // targets the map order hands us the lowest community id first.
      int best_c = old_c;
      double best_gain = links[old_c] -
                         resolution * tot[old_c] * k_i / g.two_m;
      for (const auto& [c, w_ic] : links) {
        if (c == old_c) continue;
        double gain = w_ic - resolution * tot[c] * k_i / g.two_m;
        if (gain > best_gain + 1e-12) {
          best_c = c;
          best_gain = gain;
        }
      }

      tot[best_c] += k_i;
      comm[i] = best_c;
      if (best_c != old_c) moved = true;
    }
  }
  return comm;
}

// Collapse communities into single nodes; intra-community weight becomes a
// self-loop. Community ids are renumbered by first appearance.
inline LevelGraph coarsen(const LevelGraph& g, const std::vector<int>& comm,
                          std::vector<int>& dense) {
  dense.assign(g.n, -1);
  int next = 0;
  for (int i = 0; i < g.n; ++i) {
    if (dense[comm[i]] == -1) dense[comm[i]] = next++;
  }
  LevelGraph out;
  out.n = next;
  out.adj.resize(next);
  out.degree.assign(next, 0.0);
  out.two_m = g.two_m;
  for (int i = 0; i < g.n; ++i) {
    int ci = dense[comm[i]];
    out.degree[ci] += g.degree[i];
    for (const auto& [j, w] : g.adj[i]) {
      int cj = dense[comm[j]];
      if (i == j) {
        out.adj[ci][ci] += w;  // self-loops carry over as-is
      } else if (i < j) {
        if (ci == cj) {
          out.adj[ci][ci] += w;
        } else {
          out.adj[ci][cj] += w;
          out.adj[cj][ci] += w;
        }
      }
    }
  }
  return out;
}

}  // namespace detail

// Louvain community detection over a term graph. Deterministic: nodes are
// seeded and visited in lexicographic order and ties in gain prefer the
// lowest community id. Edgeless graphs come back as singletons.
inline Partition louvain_communities(const TermGraph& g,
                                     double resolution = 1.0) {
  if (g.nodes.empty()) {
    throw Error(Errc::empty_graph, "community detection on empty graph");
  }
  std::vector<std::string> names(g.nodes.begin(), g.nodes.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    index[names[i]] = static_cast<int>(i);
  }

  detail::LevelGraph level;
  level.n = static_cast<int>(names.size());
  level.adj.resize(level.n);
  for (const auto& [key, w] : g.edge_weights) {
    int a = index.at(key.first);
    int b = index.at(key.second);
    level.adj[a][b] += w;
    level.adj[b][a] += w;
  }
  level.degree.assign(level.n, 0.0);
  for (int i = 0; i < level.n; ++i) {
    for (const auto& [j, w] : level.adj[i]) {
      level.degree[i] += (j == i) ? 2.0 * w : w;
    }
    level.two_m += level.degree[i];
  }

  // node -> community in the original graph, refined level by level
  std::vector<int> assignment(level.n);
  for (int i = 0; i < level.n; ++i) assignment[i] = i;

  if (level.two_m > 0.0) {
    while (true) {
      std::vector<int> comm = detail::local_moving(level, resolution);
      std::vector<int> dense;
      detail::LevelGraph next = detail::coarsen(level, comm, dense);
      if (next.n == level.n) break;
      for (int& a : assignment) a = dense[comm[a]];
      level = std::move(next);
    }
  }

  // Renumber by first appearance over lexicographic node order.
  std::map<int, int> renumber;
  Partition partition;
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto [it, fresh] = renumber.emplace(assignment[i],
                                        static_cast<int>(renumber.size()));
    (void)fresh;
    partition[names[i]] = it->second;
  }
  return partition;
}

}  // namespace ned

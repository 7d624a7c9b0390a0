#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ned/error.hpp"
#include "ned/graph.hpp"

namespace ned {

// Weighted-degree trajectory of one entity over the block grid. values has
// one slot per block (zero where the entity is absent); diffs[i] is
// values[i+1] - values[i].
struct DegreeSeries {
  std::string entity;
  std::vector<double> values;
  std::vector<double> diffs;
};

struct PeakDetectorConfig {
  int window_x = 5;
  double threshold_y = 2.0;
};

struct PeakEvent {
  std::string entity;
  std::size_t block_index = 0;
  double diff_value = 0.0;
  double rolling_mean = 0.0;
  double rolling_std = 0.0;
};

inline void validate(const PeakDetectorConfig& cfg) {
  if (cfg.window_x < 2) {
    throw Error(Errc::invalid_argument,
                "window_x must be >= 2, got " + std::to_string(cfg.window_x));
  }
  if (!(cfg.threshold_y > 0.0)) {
    throw Error(Errc::invalid_argument, "threshold_y must be > 0");
  }
}

inline void recompute_diffs(DegreeSeries& s) {
  s.diffs.clear();
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    s.diffs.push_back(s.values[i] - s.values[i - 1]);
  }
}

// One series per entity appearing in any block, zero-filled where absent.
// Graphs must be the gapless block sequence in index order.
inline std::map<std::string, DegreeSeries> build_series(
    const std::vector<TermGraph>& graphs) {
  if (graphs.empty()) {
    throw Error(Errc::empty_sequence, "no graphs to build series from");
  }
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i].block_index != i) {
      throw Error(Errc::invalid_argument,
                  "graph sequence has a gap at index " + std::to_string(i));
    }
  }
  std::map<std::string, DegreeSeries> series;
  for (const TermGraph& g : graphs) {
    for (const std::string& node : g.nodes) {
      auto [it, inserted] = series.emplace(node, DegreeSeries{});
      if (inserted) {
        it->second.entity = node;
        it->second.values.assign(graphs.size(), 0.0);
      }
    }
  }
  for (std::size_t b = 0; b < graphs.size(); ++b) {
    for (auto& [entity, s] : series) {
      s.values[b] = graphs[b].weighted_degree(entity);
    }
  }
  for (auto& [entity, s] : series) recompute_diffs(s);
  return series;
}

namespace detail {

struct WindowStats {
  double mean = 0.0;
  double sample_std = 0.0;
};

// Two-pass mean and sample (n-1) standard deviation of
// diffs[first..first+len).
inline WindowStats window_stats(const std::vector<double>& diffs,
                                std::size_t first, std::size_t len) {
  WindowStats ws;
  double sum = 0.0;
  for (std::size_t i = first; i < first + len; ++i) sum += diffs[i];
  ws.mean = sum / static_cast<double>(len);
  double ss = 0.0;
  for (std::size_t i = first; i < first + len; ++i) {
    double d = diffs[i] - ws.mean;
    ss += d * d;
  }
  ws.sample_std = std::sqrt(ss / static_cast<double>(len - 1));
  return ws;
}

}  // namespace detail

// A block t peaks when the first difference leading into it exceeds the
// mean of the window_x preceding differences by threshold_y sample standard
// deviations (strictly; with zero deviation the rule degenerates to
// diff > mean). Only increases fire. The first block that can fire is
// window_x + 1: earlier blocks are warm-up and never produce detections.
inline std::vector<PeakEvent> detect_peaks(const DegreeSeries& series,
                                           const PeakDetectorConfig& cfg) {
  validate(cfg);
  const auto x = static_cast<std::size_t>(cfg.window_x);
  if (series.values.size() <= x) {
    throw Error(Errc::series_too_short,
                series.entity + ": " + std::to_string(series.values.size()) +
                    " blocks with window " + std::to_string(cfg.window_x));
  }
  std::vector<PeakEvent> events;
  const std::vector<double>& d = series.diffs;
  for (std::size_t i = x; i < d.size(); ++i) {
    auto ws = detail::window_stats(d, i - x, x);
    if (d[i] > ws.mean + cfg.threshold_y * ws.sample_std) {
      events.push_back(
          PeakEvent{series.entity, i + 1, d[i], ws.mean, ws.sample_std});
    }
  }
  return events;
}

// Union of per-entity detections grouped by block. Ordered containers keep
// the output deterministic.
inline std::map<std::size_t, std::set<std::string>> peaking_entities(
    const std::map<std::string, DegreeSeries>& all_series,
    const PeakDetectorConfig& cfg) {
  std::map<std::size_t, std::set<std::string>> by_block;
  for (const auto& [entity, series] : all_series) {
    for (const PeakEvent& e : detect_peaks(series, cfg)) {
      by_block[e.block_index].insert(entity);
    }
  }
  return by_block;
}

// block_index,value,diff,rolling_mean,rolling_std,is_peak with empty cells
// where a column is undefined (block 0 has no diff; warm-up blocks have no
// window statistics).
inline std::string series_csv(const DegreeSeries& series,
                              const PeakDetectorConfig& cfg) {
  validate(cfg);
  const auto x = static_cast<std::size_t>(cfg.window_x);
  std::string out = "block_index,value,diff,rolling_mean,rolling_std,is_peak\n";
  const std::vector<double>& d = series.diffs;
  for (std::size_t b = 0; b < series.values.size(); ++b) {
    out += std::to_string(b);
    out += ',';
    out += format_double(series.values[b]);
    out += ',';
    if (b >= 1) out += format_double(d[b - 1]);
    out += ',';
    bool is_peak = false;
    if (b >= x + 1) {
      auto ws = detail::window_stats(d, b - 1 - x, x);
      out += format_double(ws.mean);
      out += ',';
      out += format_double(ws.sample_std);
      out += ',';
      is_peak = d[b - 1] > ws.mean + cfg.threshold_y * ws.sample_std;
    } else {
      out += ",,";
    }
    out += is_peak ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace ned

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ned/error.hpp"
#include "ned/text.hpp"

namespace ned {

// A mined phrase: 1..max_len normalized tokens with its occurrence count
// over the mined document set.
struct Phrase {
  std::vector<std::string> tokens;
  int support = 0;

  std::string text() const {
    std::string out;
    for (const std::string& t : tokens) {
      if (!out.empty()) out.push_back(' ');
      out += t;
    }
    return out;
  }
};

struct PhraseMinerConfig {
  int min_support = 3;
  double sig_threshold = 2.0;
  int max_len = 4;
};

// Significance of merging an adjacent unit pair: observed co-count against
// the independence expectation, scaled by sqrt of the co-count.
inline double phrase_pair_significance(long long count_ab, long long count_a,
                                       long long count_b, long long total) {
  double expected = static_cast<double>(count_a) *
                    static_cast<double>(count_b) /
                    static_cast<double>(total);
  return (static_cast<double>(count_ab) - expected) /
         std::sqrt(static_cast<double>(count_ab));
}

namespace detail {

using Unit = std::vector<std::string>;
using Segment = std::vector<Unit>;

// Stopwords split a token stream into segments; phrases never cross them.
inline std::vector<Segment> segment_docs(const std::vector<std::string>& docs,
                                         const std::set<std::string>& stopwords) {
  std::vector<Segment> segments;
  for (const std::string& text : docs) {
    Segment seg;
    for (const Token& t : tokenize(text)) {
      if (stopwords.count(t.norm)) {
        if (!seg.empty()) segments.push_back(std::move(seg));
        seg.clear();
      } else {
        seg.push_back(Unit{t.norm});
      }
    }
    if (!seg.empty()) segments.push_back(std::move(seg));
  }
  return segments;
}

struct PairCounts {
  std::map<Unit, long long> unit;
  std::map<std::pair<Unit, Unit>, long long> pair;
  long long positions = 0;  // total adjacent-pair slots
};

inline PairCounts count_units(const std::vector<Segment>& segments) {
  PairCounts c;
  for (const Segment& seg : segments) {
    for (const Unit& u : seg) ++c.unit[u];
    if (seg.size() >= 2) c.positions += static_cast<long long>(seg.size()) - 1;
    for (std::size_t i = 0; i + 1 < seg.size(); ++i) {
      ++c.pair[{seg[i], seg[i + 1]}];
    }
  }
  return c;
}

// Replace every non-overlapping left-to-right occurrence of (a,b) by the
// merged unit.
inline void merge_pair(std::vector<Segment>& segments, const Unit& a,
                       const Unit& b) {
  Unit merged = a;
  merged.insert(merged.end(), b.begin(), b.end());
  for (Segment& seg : segments) {
    Segment out;
    out.reserve(seg.size());
    std::size_t i = 0;
    while (i < seg.size()) {
      if (i + 1 < seg.size() && seg[i] == a && seg[i + 1] == b) {
        out.push_back(merged);
        i += 2;
      } else {
        out.push_back(std::move(seg[i]));
        ++i;
      }
    }
    seg = std::move(out);
  }
}

}  // namespace detail

// Bottom-up agglomerative phrase mining. Each round merges the adjacent
// unit pair with the highest significance, provided its co-count meets
// min_support, the significance meets sig_threshold, and the merged phrase
// stays within max_len tokens. Surviving units (including unigrams) with
// final count >= min_support become phrases.
inline std::vector<Phrase> mine_phrases(const std::vector<std::string>& docs,
                                        const PhraseMinerConfig& cfg,
                                        const std::set<std::string>& stopwords) {
  if (docs.empty()) {
    throw Error(Errc::empty_input, "no documents to mine phrases from");
  }
  if (cfg.min_support < 1 || cfg.max_len < 1 ||
      !(cfg.sig_threshold == cfg.sig_threshold)) {
    throw Error(Errc::invalid_argument, "bad phrase miner configuration");
  }
  std::vector<detail::Segment> segments = detail::segment_docs(docs, stopwords);

  while (true) {
    detail::PairCounts c = detail::count_units(segments);
    if (c.positions == 0) break;
    const std::pair<detail::Unit, detail::Unit>* best = nullptr;
    double best_sig = 0.0;
    for (const auto& [key, count_ab] : c.pair) {
      if (count_ab < cfg.min_support) continue;
      if (key.first.size() + key.second.size() >
          static_cast<std::size_t>(cfg.max_len)) {
        continue;
      }
      double sig = phrase_pair_significance(count_ab, c.unit.at(key.first),
                                            c.unit.at(key.second),
                                            c.positions);
      if (sig < cfg.sig_threshold) continue;
      if (!best || sig > best_sig) {
        best = &key;
        best_sig = sig;
      }
    }
    if (!best) break;
    detail::merge_pair(segments, best->first, best->second);
  }

  detail::PairCounts final_counts = detail::count_units(segments);
  std::vector<Phrase> phrases;
  for (const auto& [unit, count] : final_counts.unit) {
    if (count < cfg.min_support) continue;
    Phrase p;
    p.tokens = unit;
    p.support = static_cast<int>(count);
    phrases.push_back(std::move(p));
  }
  std::sort(phrases.begin(), phrases.end(), [](const Phrase& a,
                                               const Phrase& b) {
    if (a.support != b.support) return a.support > b.support;
    return a.tokens < b.tokens;
  });
  return phrases;
}

// Greedy longest-match, non-overlapping, left-to-right phrase occurrences
// in a text. Returns counts keyed by phrase text.
inline std::map<std::string, int> match_phrases(
    const std::string& text, const std::vector<Phrase>& phrases) {
  std::map<std::string, std::vector<const Phrase*>> by_first;
  for (const Phrase& p : phrases) {
    if (p.tokens.empty()) continue;
    by_first[p.tokens.front()].push_back(&p);
  }
  for (auto& [first, list] : by_first) {
    std::sort(list.begin(), list.end(), [](const Phrase* a, const Phrase* b) {
      if (a->tokens.size() != b->tokens.size()) {
        return a->tokens.size() > b->tokens.size();
      }
      return a->tokens < b->tokens;
    });
  }
  std::vector<Token> tokens = tokenize(text);
  std::map<std::string, int> counts;
  std::size_t i = 0;
  while (i < tokens.size()) {
    auto it = by_first.find(tokens[i].norm);
    bool matched = false;
    if (it != by_first.end()) {
      for (const Phrase* p : it->second) {
        if (i + p->tokens.size() > tokens.size()) continue;
        bool ok = true;
        for (std::size_t k = 1; k < p->tokens.size(); ++k) {
          if (tokens[i + k].norm != p->tokens[k]) {
            ok = false;
            break;
          }
        }
        if (ok) {
          ++counts[p->text()];
          i += p->tokens.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) ++i;
  }
  return counts;
}

}  // namespace ned

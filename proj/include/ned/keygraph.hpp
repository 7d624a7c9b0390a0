#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ned/error.hpp"
#include "ned/graph.hpp"
#include "ned/louvain.hpp"
#include "ned/phrases.hpp"

namespace ned {

// Indices of documents that mention at least one peaking entity, in their
// original order. Entity counts are keyed the same way as the block graph
// nodes.
inline std::vector<std::size_t> filter_document_indices(
    const std::vector<std::map<std::string, int>>& doc_entity_counts,
    const std::set<std::string>& peaking) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < doc_entity_counts.size(); ++i) {
    for (const auto& [entity, count] : doc_entity_counts[i]) {
      (void)count;
      if (peaking.count(entity)) {
        kept.push_back(i);
        break;
      }
    }
  }
  return kept;
}

template <typename T>
std::vector<T> filter_documents(const std::vector<T>& docs,
                                const std::vector<std::size_t>& indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(docs[i]);
  return out;
}

// Co-occurrence graph over entities and mined phrases for the filtered
// documents of one block. Per document, entity counts and phrase
// occurrence counts merge into a single term histogram; significance
// weighting then follows the entity graph construction.
inline TermGraph build_keygraph(
    std::size_t block_index, const std::vector<std::string>& doc_texts,
    const std::vector<std::map<std::string, int>>& doc_entity_counts,
    const std::vector<Phrase>& phrases) {
  if (doc_texts.size() != doc_entity_counts.size()) {
    throw Error(Errc::invalid_argument,
                "document texts and entity counts differ in length");
  }
  DocTerms doc_terms;
  doc_terms.reserve(doc_texts.size());
  for (std::size_t i = 0; i < doc_texts.size(); ++i) {
    std::map<std::string, int> terms = doc_entity_counts[i];
    for (const auto& [text, count] : match_phrases(doc_texts[i], phrases)) {
      terms[text] += count;
    }
    doc_terms.emplace_back("doc" + std::to_string(i), std::move(terms));
  }
  return aggregate_block(block_index, doc_terms);
}

// One detected event: a community of the keygraph, its members ranked by
// weighted degree.
struct EventSummary {
  std::size_t block_index = 0;
  int community_id = 0;
  std::vector<std::pair<std::string, double>> terms;  // top_k, degree desc
  double score = 0.0;  // summed weighted degree over all members
};

// Rank communities of a keygraph partition into event summaries. Term
// lists are truncated to top_k entries (degree descending, then name);
// the score still sums every member. Zero-score singletons are noise from
// isolated nodes and are dropped. Events come back score descending, at
// most top_events of them.
inline std::vector<EventSummary> summarize(const TermGraph& g,
                                           const Partition& partition,
                                           std::size_t top_k,
                                           std::size_t top_events) {
  std::map<int, EventSummary> by_community;
  for (const auto& [node, community] : partition) {
    EventSummary& ev = by_community[community];
    ev.block_index = g.block_index;
    ev.community_id = community;
    double deg = weighted_degree(g, node);
    ev.terms.emplace_back(node, deg);
    ev.score += deg;
  }
  std::vector<EventSummary> events;
  for (auto& [community, ev] : by_community) {
    if (ev.score <= 0.0 && ev.terms.size() == 1) continue;
    std::sort(ev.terms.begin(), ev.terms.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    if (ev.terms.size() > top_k) ev.terms.resize(top_k);
    events.push_back(std::move(ev));
  }
  std::sort(events.begin(), events.end(),
            [](const EventSummary& a, const EventSummary& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.community_id < b.community_id;
            });
  if (events.size() > top_events) events.resize(top_events);
  return events;
}

}  // namespace ned

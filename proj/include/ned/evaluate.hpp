#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ned/error.hpp"
#include "ned/text.hpp"

namespace ned {

// One labeled topic: the time slot it belongs to, a headline for display,
// and its keywords. Every mandatory keyword must be recovered for a
// detection to count; optional keywords only feed keyword recall.
struct GroundTruthTopic {
  int slot = 0;
  std::string headline;
  std::vector<std::string> mandatory;
  std::vector<std::string> optional;
};

// A detected topic: the slot it fired in, its rank within that slot
// (0 = best), and its terms.
struct DetectedTopic {
  int slot = 0;
  int rank = 0;
  std::vector<std::string> terms;
};

inline std::vector<GroundTruthTopic> load_ground_truth(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_unreadable, "cannot open ground truth: " + path);
  }
  std::vector<GroundTruthTopic> topics;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    std::string where = path + ":" + std::to_string(line_no);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(Errc::schema_mismatch, where + ": not a JSON object");
    }
    if (!j.contains("slot") || !j["slot"].is_number_integer() ||
        !j.contains("mandatory") || !j["mandatory"].is_array()) {
      throw Error(Errc::schema_mismatch,
                  where + ": needs integer slot and mandatory array");
    }
    GroundTruthTopic t;
    t.slot = j["slot"].get<int>();
    if (j.contains("headline") && j["headline"].is_string()) {
      t.headline = j["headline"].get<std::string>();
    }
    for (const auto& k : j["mandatory"]) {
      if (!k.is_string()) {
        throw Error(Errc::schema_mismatch, where + ": keyword not a string");
      }
      t.mandatory.push_back(normalize_term(k.get<std::string>()));
    }
    if (j.contains("optional")) {
      if (!j["optional"].is_array()) {
        throw Error(Errc::schema_mismatch, where + ": optional not an array");
      }
      for (const auto& k : j["optional"]) {
        if (!k.is_string()) {
          throw Error(Errc::schema_mismatch,
                      where + ": keyword not a string");
        }
        t.optional.push_back(normalize_term(k.get<std::string>()));
      }
    }
    if (t.mandatory.empty()) {
      throw Error(Errc::schema_mismatch, where + ": mandatory list empty");
    }
    std::set<std::string> mand(t.mandatory.begin(), t.mandatory.end());
    for (const std::string& k : t.optional) {
      if (mand.count(k)) {
        throw Error(Errc::schema_mismatch,
                    where + ": keyword both mandatory and optional: " + k);
      }
    }
    topics.push_back(std::move(t));
  }
  return topics;
}

// Expansion of a detected term list for keyword matching: every full term
// plus each of its word tokens. "theresa may" covers the keywords
// "theresa may", "theresa", and "may".
inline std::set<std::string> expand_terms(
    const std::vector<std::string>& terms) {
  std::set<std::string> out;
  for (const std::string& term : terms) {
    std::string norm = normalize_term(term);
    if (norm.empty()) continue;
    out.insert(norm);
    for (const std::string& w : split_words(norm)) out.insert(w);
  }
  return out;
}

// A detection matches a topic when every mandatory keyword appears in the
// expansion of its terms. Exact mode skips the expansion and requires the
// full terms themselves to cover the mandatory list.
inline bool match_topic(const DetectedTopic& det, const GroundTruthTopic& gt,
                        bool exact = false) {
  std::set<std::string> have;
  if (exact) {
    for (const std::string& t : det.terms) have.insert(normalize_term(t));
  } else {
    have = expand_terms(det.terms);
  }
  for (const std::string& k : gt.mandatory) {
    if (!have.count(k)) return false;
  }
  return true;
}

// Pairing of ground truth topics with detections. Each topic considers
// only detections in its slot ranked better than top_n (0 disables the
// cutoff) and pairs with the best-ranked one that matches. Detections may
// serve several topics; unmatched topics map to -1.
struct MatchResult {
  std::vector<int> topic_to_detection;  // index into detections, or -1
  std::size_t matched_topics = 0;
  std::set<int> matched_detections;
};

inline MatchResult match_detections(
    const std::vector<DetectedTopic>& detections,
    const std::vector<GroundTruthTopic>& topics, int top_n = 0,
    bool exact = false) {
  MatchResult r;
  r.topic_to_detection.assign(topics.size(), -1);
  for (std::size_t ti = 0; ti < topics.size(); ++ti) {
    const GroundTruthTopic& gt = topics[ti];
    int best = -1;
    int best_rank = 0;
    for (std::size_t di = 0; di < detections.size(); ++di) {
      const DetectedTopic& det = detections[di];
      if (det.slot != gt.slot) continue;
      if (top_n > 0 && det.rank >= top_n) continue;
      if (!match_topic(det, gt, exact)) continue;
      if (best == -1 || det.rank < best_rank) {
        best = static_cast<int>(di);
        best_rank = det.rank;
      }
    }
    if (best >= 0) {
      r.topic_to_detection[ti] = best;
      ++r.matched_topics;
      r.matched_detections.insert(best);
    }
  }
  return r;
}

// Fraction of ground truth topics recovered by at least one detection.
inline double topic_recall(const MatchResult& match, std::size_t topic_count) {
  if (topic_count == 0) {
    throw Error(Errc::no_ground_truth, "no ground truth topics");
  }
  return static_cast<double>(match.matched_topics) /
         static_cast<double>(topic_count);
}

// Micro-averaged keyword precision and recall over matched topic pairs.
// For each pair, the detection's distinct terms are the predictions;
// a prediction is correct when its expansion covers some ground truth
// keyword, and a keyword is covered when it lies in the union expansion.
// Precision divides correct predictions by all predictions, recall
// divides covered keywords by all keywords. Both aggregate numerators and
// denominators across pairs before dividing.
struct KeywordScore {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t correct_terms = 0;
  std::size_t total_terms = 0;
  std::size_t covered_keywords = 0;
  std::size_t total_keywords = 0;
};

inline KeywordScore keyword_precision_recall(
    const std::vector<DetectedTopic>& detections,
    const std::vector<GroundTruthTopic>& topics, const MatchResult& match,
    bool exact = false) {
  KeywordScore s;
  for (std::size_t ti = 0; ti < topics.size(); ++ti) {
    int di = match.topic_to_detection[ti];
    if (di < 0) continue;
    const GroundTruthTopic& gt = topics[ti];
    const DetectedTopic& det = detections[di];

    std::set<std::string> keywords(gt.mandatory.begin(), gt.mandatory.end());
    keywords.insert(gt.optional.begin(), gt.optional.end());

    std::set<std::string> terms;
    for (const std::string& t : det.terms) {
      std::string norm = normalize_term(t);
      if (!norm.empty()) terms.insert(norm);
    }

    std::set<std::string> covered;
    for (const std::string& term : terms) {
      std::set<std::string> expansion;
      if (exact) {
        expansion.insert(term);
      } else {
        expansion = expand_terms({term});
      }
      bool correct = false;
      for (const std::string& piece : expansion) {
        if (keywords.count(piece)) {
          covered.insert(piece);
          correct = true;
        }
      }
      if (correct) ++s.correct_terms;
    }
    s.total_terms += terms.size();
    s.covered_keywords += covered.size();
    s.total_keywords += keywords.size();
  }
  s.precision = s.total_terms == 0
                    ? 0.0
                    : static_cast<double>(s.correct_terms) /
                          static_cast<double>(s.total_terms);
  s.recall = s.total_keywords == 0
                 ? 0.0
                 : static_cast<double>(s.covered_keywords) /
                       static_cast<double>(s.total_keywords);
  return s;
}

// Matched ground truth topics over all detections the evaluation
// considered. Several detections matching one topic count once; the clamp
// covers the degenerate opposite, one detection recovering several topics.
inline double detection_precision(std::size_t total_detections,
                                  std::size_t matched_topics) {
  if (total_detections == 0) {
    throw Error(Errc::zero_detections, "no detections to evaluate");
  }
  return std::min(1.0, static_cast<double>(matched_topics) /
                           static_cast<double>(total_detections));
}

struct SlotRow {
  int slot = 0;
  std::size_t topics = 0;
  std::size_t matched = 0;
  std::size_t detections = 0;
};

struct EvalReport {
  double topic_recall = 0.0;
  KeywordScore keywords;
  double precision = 0.0;           // matched topics over detections
  double recall = 0.0;              // alias of topic_recall for the pair view
  std::size_t topic_count = 0;
  std::size_t matched_topics = 0;
  std::size_t detection_count = 0;  // detections inside the rank cutoff
  std::vector<SlotRow> slots;
};

namespace detail {

inline EvalReport evaluate(const std::vector<DetectedTopic>& detections,
                           const std::vector<GroundTruthTopic>& topics,
                           int top_n, bool exact) {
  MatchResult match = match_detections(detections, topics, top_n, exact);
  EvalReport rep;
  rep.topic_count = topics.size();
  rep.topic_recall = topic_recall(match, topics.size());
  rep.recall = rep.topic_recall;
  rep.keywords = keyword_precision_recall(detections, topics, match, exact);

  std::size_t considered = 0;
  for (const DetectedTopic& det : detections) {
    if (top_n > 0 && det.rank >= top_n) continue;
    ++considered;
  }
  rep.detection_count = considered;
  rep.matched_topics = match.matched_topics;
  rep.precision = detection_precision(considered, rep.matched_topics);

  std::map<int, SlotRow> slots;
  for (const GroundTruthTopic& t : topics) {
    SlotRow& row = slots[t.slot];
    row.slot = t.slot;
    ++row.topics;
  }
  for (std::size_t ti = 0; ti < topics.size(); ++ti) {
    if (match.topic_to_detection[ti] >= 0) ++slots[topics[ti].slot].matched;
  }
  for (const DetectedTopic& det : detections) {
    if (top_n > 0 && det.rank >= top_n) continue;
    auto it = slots.find(det.slot);
    if (it != slots.end()) ++it->second.detections;
  }
  for (const auto& [slot, row] : slots) rep.slots.push_back(row);
  return rep;
}

}  // namespace detail

// Tweet-stream evaluation: short slots, only the top_n strongest events
// per slot count (two, following the convention for high-volume streams).
inline EvalReport evaluate_tweet_slots(
    const std::vector<DetectedTopic>& detections,
    const std::vector<GroundTruthTopic>& topics, int top_n = 2,
    bool exact = false) {
  return detail::evaluate(detections, topics, top_n, exact);
}

// Article-stream evaluation: day-sized slots, every reported event counts.
inline EvalReport evaluate_article_days(
    const std::vector<DetectedTopic>& detections,
    const std::vector<GroundTruthTopic>& topics, bool exact = false) {
  return detail::evaluate(detections, topics, 0, exact);
}

// Detections from a summaries JSON document (the detect subcommand
// output). Block indices map one-to-one onto evaluation slots.
inline std::vector<DetectedTopic> detections_from_summaries(
    const nlohmann::json& summaries) {
  if (!summaries.is_array()) {
    throw Error(Errc::schema_mismatch, "summaries: expected an array");
  }
  std::vector<DetectedTopic> out;
  for (const auto& blk : summaries) {
    if (!blk.is_object() || !blk.contains("block") ||
        !blk["block"].is_number_integer() || !blk.contains("events") ||
        !blk["events"].is_array()) {
      throw Error(Errc::schema_mismatch,
                  "summaries: block entry needs block and events");
    }
    int slot = blk["block"].get<int>();
    int rank = 0;
    for (const auto& ev : blk["events"]) {
      if (!ev.is_object() || !ev.contains("terms") ||
          !ev["terms"].is_array()) {
        throw Error(Errc::schema_mismatch,
                    "summaries: event needs a terms array");
      }
      DetectedTopic det;
      det.slot = slot;
      det.rank = rank++;
      for (const auto& term : ev["terms"]) {
        if (!term.is_object() || !term.contains("t") ||
            !term["t"].is_string()) {
          throw Error(Errc::schema_mismatch,
                      "summaries: term needs a string t field");
        }
        det.terms.push_back(term["t"].get<std::string>());
      }
      out.push_back(std::move(det));
    }
  }
  return out;
}

inline std::vector<DetectedTopic> load_detections(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_unreadable, "cannot open summaries: " + path);
  }
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw Error(Errc::schema_mismatch, path + ": not valid JSON");
  }
  return detections_from_summaries(j);
}

inline std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
  return buf;
}

// Plain-text score table for terminal output.
inline std::string render_report(const EvalReport& rep) {
  std::ostringstream out;
  out << "slot  topics  matched  detections\n";
  for (const SlotRow& row : rep.slots) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-4d  %-6zu  %-7zu  %zu\n", row.slot,
                  row.topics, row.matched, row.detections);
    out << buf;
  }
  out << "\n";
  out << "topic recall      " << percent(rep.topic_recall) << "  ("
      << rep.topic_count << " topics)\n";
  out << "keyword precision " << percent(rep.keywords.precision) << "  ("
      << rep.keywords.correct_terms << "/" << rep.keywords.total_terms
      << ")\n";
  out << "keyword recall    " << percent(rep.keywords.recall) << "  ("
      << rep.keywords.covered_keywords << "/" << rep.keywords.total_keywords
      << ")\n";
  out << "precision         " << percent(rep.precision) << "  ("
      << rep.matched_topics << "/" << rep.detection_count
      << " detections)\n";
  out << "recall            " << percent(rep.recall) << "\n";
  return out.str();
}

inline nlohmann::ordered_json report_json(const EvalReport& rep) {
  nlohmann::ordered_json j;
  j["topic_recall"] = rep.topic_recall;
  j["keyword_precision"] = rep.keywords.precision;
  j["keyword_recall"] = rep.keywords.recall;
  j["precision"] = rep.precision;
  j["recall"] = rep.recall;
  j["topics"] = rep.topic_count;
  j["matched_topics"] = rep.matched_topics;
  j["detections"] = rep.detection_count;
  j["slots"] = nlohmann::ordered_json::array();
  for (const SlotRow& row : rep.slots) {
    j["slots"].push_back({{"slot", row.slot},
                          {"topics", row.topics},
                          {"matched", row.matched},
                          {"detections", row.detections}});
  }
  return j;
}

}  // namespace ned

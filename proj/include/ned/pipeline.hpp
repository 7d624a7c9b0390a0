#pragma once

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ned/config.hpp"
#include "ned/entities.hpp"
#include "ned/error.hpp"
#include "ned/graph.hpp"
#include "ned/ingest.hpp"
#include "ned/keygraph.hpp"
#include "ned/louvain.hpp"
#include "ned/peaks.hpp"
#include "ned/phrases.hpp"
#include "ned/text.hpp"
#include "ned/time.hpp"

namespace ned {

// Externally loaded inputs the pipeline reads but never writes.
struct PipelineResources {
  Gazetteer gazetteer;
  std::set<std::string> stopwords = default_stopwords();
  SidecarAnnotations sidecar;
};

inline PipelineResources load_resources(const PipelineConfig& cfg) {
  PipelineResources res;
  if (!cfg.gazetteer_path.empty()) {
    res.gazetteer = load_gazetteer(cfg.gazetteer_path);
  }
  if (!cfg.stopwords_path.empty()) {
    res.stopwords = load_stopwords(cfg.stopwords_path);
  }
  if (cfg.provider == ProviderKind::external) {
    res.sidecar = load_sidecar_annotations(cfg.annotations_path);
  }
  return res;
}

// Everything a detection run produces, kept around so callers can export
// series, graphs, or summaries without re-running.
struct DetectionResult {
  std::vector<std::int64_t> block_starts;
  std::vector<std::vector<std::string>> block_doc_texts;
  std::vector<std::vector<std::map<std::string, int>>> block_doc_entities;
  std::vector<TermGraph> entity_graphs;
  std::map<std::string, DegreeSeries> series;
  std::vector<PeakEvent> peak_events;
  std::map<std::size_t, std::set<std::string>> peaks_by_block;
  std::map<std::size_t, std::size_t> filtered_docs_by_block;
  std::vector<EventSummary> events;  // block order, strongest first within
  EntityRegistry registry;
  std::size_t document_count = 0;
  std::size_t skipped_records = 0;
};

inline std::int64_t default_origin(const Corpus& corpus,
                                   std::int64_t block_duration_ms) {
  if (corpus.documents.empty()) return 0;
  std::int64_t first = corpus.documents.front().timestamp_ms;
  return floor_div(first, block_duration_ms) * block_duration_ms;
}

// Full detection pass: entity extraction per block, co-occurrence graphs,
// weighted-degree peak scan, then phrase mining, keygraph clustering and
// event summaries for every block that peaked.
inline DetectionResult run_detection(Corpus corpus, const PipelineConfig& cfg,
                                     const PipelineResources& res) {
  validate(cfg);
  DetectionResult out;
  out.document_count = corpus.documents.size();
  out.skipped_records = corpus.skipped;

  std::int64_t origin =
      cfg.origin_ms ? *cfg.origin_ms
                    : default_origin(corpus, cfg.block_duration_ms);
  std::vector<TimeBlock> blocks =
      discretize(std::move(corpus.documents), cfg.block_duration_ms, origin);

  AnnotationProvider provider;
  provider.kind = cfg.provider;
  provider.sidecar = &res.sidecar;

  PersonMemory memory;
  for (const TimeBlock& block : blocks) {
    memory.reset();
    std::vector<std::string> texts;
    std::vector<std::map<std::string, int>> entities;
    DocTerms doc_terms;
    for (const Document& doc : block.documents) {
      std::vector<EntityMention> mentions =
          annotate(doc, provider, res.gazetteer);
      if (doc.source_kind == SourceKind::article) {
        mentions = disambiguate_persons(std::move(mentions), memory);
      }
      bool expand = doc.source_kind == SourceKind::article;
      std::map<std::string, int> counts;
      for (const EntityMention& m : mentions) {
        CanonicalEntity entity = canonicalize(m, res.gazetteer, expand);
        ++counts[out.registry.key(entity)];
      }
      texts.push_back(doc.text);
      entities.push_back(counts);
      doc_terms.emplace_back(doc.id, std::move(counts));
    }
    out.block_starts.push_back(block.start_ms);
    out.block_doc_texts.push_back(std::move(texts));
    out.block_doc_entities.push_back(std::move(entities));
    out.entity_graphs.push_back(aggregate_block(block.index, doc_terms));
  }

  out.series = build_series(out.entity_graphs);
  for (const auto& [entity, s] : out.series) {
    for (const PeakEvent& p : detect_peaks(s, cfg.peaks)) {
      out.peak_events.push_back(p);
      out.peaks_by_block[p.block_index].insert(p.entity);
    }
  }

  for (const auto& [b, peaking] : out.peaks_by_block) {
    std::vector<std::size_t> kept =
        filter_document_indices(out.block_doc_entities[b], peaking);
    out.filtered_docs_by_block[b] = kept.size();
    if (kept.empty()) continue;
    std::vector<std::string> texts =
        filter_documents(out.block_doc_texts[b], kept);
    std::vector<std::map<std::string, int>> entities =
        filter_documents(out.block_doc_entities[b], kept);
    std::vector<Phrase> phrases = mine_phrases(texts, cfg.phrases,
                                               res.stopwords);
    TermGraph keygraph = build_keygraph(b, texts, entities, phrases);
    Partition partition = louvain_communities(keygraph, cfg.resolution);
    for (EventSummary& ev :
         summarize(keygraph, partition, cfg.top_k, cfg.top_events)) {
      out.events.push_back(std::move(ev));
    }
  }
  return out;
}

// [{"block": i, "events": [{"community", "score", "terms": [{"t","deg"}]}]}]
// with one entry per block that peaked, in block order.
inline nlohmann::ordered_json summaries_json(const DetectionResult& result) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [b, peaking] : result.peaks_by_block) {
    (void)peaking;
    nlohmann::ordered_json blk;
    blk["block"] = b;
    blk["events"] = nlohmann::ordered_json::array();
    for (const EventSummary& ev : result.events) {
      if (ev.block_index != b) continue;
      nlohmann::ordered_json e;
      e["community"] = ev.community_id;
      e["score"] = ev.score;
      e["terms"] = nlohmann::ordered_json::array();
      for (const auto& [term, deg] : ev.terms) {
        e["terms"].push_back({{"t", term}, {"deg", deg}});
      }
      blk["events"].push_back(std::move(e));
    }
    arr.push_back(std::move(blk));
  }
  return arr;
}

// Run parameters and headline counts for reproducibility checks.
inline nlohmann::ordered_json manifest_json(const PipelineConfig& cfg,
                                            const DetectionResult& result) {
  std::size_t filtered = 0;
  for (const auto& [b, n] : result.filtered_docs_by_block) filtered += n;
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash(cfg);
  j["documents"] = result.document_count;
  j["skipped_records"] = result.skipped_records;
  j["blocks"] = result.entity_graphs.size();
  j["entities"] = result.registry.size();
  j["peak_events"] = result.peak_events.size();
  j["blocks_with_peaks"] = result.peaks_by_block.size();
  j["filtered_documents"] = filtered;
  j["events"] = result.events.size();
  return j;
}

// Human-readable run digest: one section per peaking block, events ranked
// strongest first with their top terms.
inline std::string render_detection_report(const DetectionResult& result) {
  std::ostringstream out;
  out << result.document_count << " documents in "
      << result.entity_graphs.size() << " blocks, "
      << result.registry.size() << " entities, "
      << result.peak_events.size() << " peak events\n";
  for (const auto& [b, peaking] : result.peaks_by_block) {
    out << "\nblock " << b;
    if (b < result.block_starts.size()) {
      out << "  " << format_iso8601_ms(result.block_starts[b]);
    }
    out << "  (" << result.filtered_docs_by_block.at(b) << " of "
        << result.block_doc_texts[b].size() << " documents kept)\n";
    out << "  peaking:";
    for (const std::string& e : peaking) out << " " << e;
    out << "\n";
    int rank = 0;
    for (const EventSummary& ev : result.events) {
      if (ev.block_index != b) continue;
      char head[64];
      std::snprintf(head, sizeof(head), "  %d. [score %.3f]", ++rank,
                    ev.score);
      out << head;
      bool first = true;
      for (const auto& [term, deg] : ev.terms) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " (%.3f)", deg);
        out << (first ? " " : ", ") << term << buf;
        first = false;
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace ned

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ned/error.hpp"
#include "ned/text.hpp"
#include "ned/time.hpp"

namespace ned {

enum class SourceKind { article, tweet };
enum class EntityKind { person, location, organization };

inline const char* entity_kind_tag(EntityKind k) {
  switch (k) {
    case EntityKind::person: return "PER";
    case EntityKind::location: return "LOC";
    case EntityKind::organization: return "ORG";
  }
  return "?";
}

inline std::optional<EntityKind> parse_entity_kind(std::string_view s) {
  std::string t = lower_ascii(s);
  if (t == "per" || t == "person") return EntityKind::person;
  if (t == "loc" || t == "location") return EntityKind::location;
  if (t == "org" || t == "organization" || t == "organisation")
    return EntityKind::organization;
  return std::nullopt;
}

// One typed entity occurrence; span is a character range into the document
// text, surface the text it covers.
struct EntityMention {
  std::string surface;
  EntityKind kind = EntityKind::person;
  std::size_t start = 0;
  std::size_t end = 0;
};

struct Document {
  std::string id;
  std::int64_t timestamp_ms = 0;
  std::string text;
  SourceKind source_kind = SourceKind::article;
  std::optional<std::vector<EntityMention>> pre_annotations;
};

struct TimeBlock {
  std::size_t index = 0;
  std::int64_t start_ms = 0;
  std::int64_t duration_ms = 0;
  std::vector<Document> documents;
};

enum class CorpusFormat { json_lines, csv };

struct Corpus {
  std::vector<Document> documents;  // sorted by timestamp ascending
  std::size_t skipped = 0;          // malformed records dropped
};

namespace detail {

inline std::optional<std::int64_t> timestamp_from_json(
    const nlohmann::json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
      std::int64_t ms = 0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), ms);
      if (res.ec == std::errc()) return ms;
    }
    return parse_iso8601_ms(s);
  }
  return std::nullopt;
}

inline std::optional<std::vector<EntityMention>> entities_from_json(
    const nlohmann::json& arr) {
  if (!arr.is_array()) return std::nullopt;
  std::vector<EntityMention> out;
  for (const auto& e : arr) {
    if (!e.is_object() || !e.contains("surface") || !e.contains("kind") ||
        !e.contains("start") || !e.contains("end")) {
      return std::nullopt;
    }
    if (!e["surface"].is_string() || !e["kind"].is_string() ||
        !e["start"].is_number_integer() || !e["end"].is_number_integer()) {
      return std::nullopt;
    }
    auto kind = parse_entity_kind(e["kind"].get_ref<const std::string&>());
    if (!kind) return std::nullopt;
    std::int64_t start = e["start"].get<std::int64_t>();
    std::int64_t end = e["end"].get<std::int64_t>();
    if (start < 0 || end < start) return std::nullopt;
    out.push_back(EntityMention{e["surface"].get<std::string>(), *kind,
                                static_cast<std::size_t>(start),
                                static_cast<std::size_t>(end)});
  }
  return out;
}

// Collapse whitespace in the document text, remapping any pre-annotation
// spans onto the collapsed text.
inline void normalize_document(Document& doc) {
  NormalizedText nt = normalize_text(doc.text);
  if (doc.pre_annotations) {
    for (EntityMention& m : *doc.pre_annotations) {
      std::size_t s = std::min(m.start, nt.start_map.size() - 1);
      std::size_t e = std::min(m.end, nt.end_map.size() - 1);
      m.start = nt.span_start(s);
      m.end = nt.span_end(e);
    }
  }
  doc.text = std::move(nt.text);
}

inline std::optional<Document> document_from_json(const nlohmann::json& rec) {
  if (!rec.is_object()) return std::nullopt;
  if (!rec.contains("id") || !rec.contains("timestamp") ||
      !rec.contains("text")) {
    return std::nullopt;
  }
  if (!rec["id"].is_string() || !rec["text"].is_string()) return std::nullopt;

  Document doc;
  doc.id = rec["id"].get<std::string>();
  if (doc.id.empty()) return std::nullopt;
  auto ts = timestamp_from_json(rec["timestamp"]);
  if (!ts) return std::nullopt;
  doc.timestamp_ms = *ts;
  doc.text = rec["text"].get<std::string>();

  if (rec.contains("source_kind")) {
    if (!rec["source_kind"].is_string()) return std::nullopt;
    std::string sk = lower_ascii(rec["source_kind"].get_ref<const std::string&>());
    if (sk == "article") {
      doc.source_kind = SourceKind::article;
    } else if (sk == "tweet") {
      doc.source_kind = SourceKind::tweet;
    } else {
      return std::nullopt;
    }
  }
  if (rec.contains("entities")) {
    auto ents = entities_from_json(rec["entities"]);
    if (!ents) return std::nullopt;
    doc.pre_annotations = std::move(*ents);
  }
  normalize_document(doc);
  if (doc.text.empty()) return std::nullopt;
  return doc;
}

// RFC 4180 style: quoted fields may contain commas, quotes ("") and
// newlines. Returns rows of raw cells.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& data) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool had_any = false;
  std::size_t i = 0;
  auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
  };
  auto end_row = [&] {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
    had_any = false;
  };
  while (i < data.size()) {
    char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
      had_any = true;
    } else if (c == ',') {
      end_cell();
      had_any = true;
    } else if (c == '\n') {
      if (!cell.empty() || !row.empty() || had_any) end_row();
    } else if (c == '\r') {
      // swallowed; \r\n handled by the \n branch
    } else {
      cell.push_back(c);
      had_any = true;
    }
    ++i;
  }
  if (!cell.empty() || !row.empty() || had_any) end_row();
  return rows;
}

inline std::optional<Document> document_from_csv_row(
    const std::vector<std::string>& row,
    const std::vector<std::string>& header) {
  nlohmann::json rec = nlohmann::json::object();
  for (std::size_t c = 0; c < header.size() && c < row.size(); ++c) {
    const std::string& key = header[c];
    const std::string& val = row[c];
    if (key == "entities") {
      if (val.empty()) continue;
      nlohmann::json ents = nlohmann::json::parse(val, nullptr, false);
      if (ents.is_discarded()) return std::nullopt;
      rec["entities"] = std::move(ents);
    } else if (!key.empty()) {
      rec[key] = val;
    }
  }
  return document_from_json(rec);
}

}  // namespace detail

// Reads a corpus file, skipping malformed records. Documents come back
// sorted by timestamp (stable, so equal timestamps keep file order).
inline Corpus parse_corpus(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::file_unreadable, "cannot open " + path);
  Corpus corpus;

  if (format == CorpusFormat::json_lines) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
      std::optional<Document> doc;
      if (!rec.is_discarded()) doc = detail::document_from_json(rec);
      if (doc) {
        corpus.documents.push_back(std::move(*doc));
      } else {
        ++corpus.skipped;
      }
    }
  } else {
    std::stringstream buf;
    buf << in.rdbuf();
    auto rows = detail::parse_csv(buf.str());
    if (rows.empty()) throw Error(Errc::no_valid_records, path);
    std::vector<std::string> header;
    for (const std::string& h : rows.front()) header.push_back(lower_ascii(h));
    for (std::size_t r = 1; r < rows.size(); ++r) {
      auto doc = detail::document_from_csv_row(rows[r], header);
      if (doc) {
        corpus.documents.push_back(std::move(*doc));
      } else {
        ++corpus.skipped;
      }
    }
  }

  if (corpus.documents.empty()) {
    throw Error(Errc::no_valid_records, path);
  }
  std::set<std::string> ids;
  for (const Document& d : corpus.documents) {
    if (!ids.insert(d.id).second) {
      throw Error(Errc::duplicate_id, d.id);
    }
  }
  std::stable_sort(corpus.documents.begin(), corpus.documents.end(),
                   [](const Document& a, const Document& b) {
                     return a.timestamp_ms < b.timestamp_ms;
                   });
  return corpus;
}

// Assigns each document to block floor((ts - origin) / duration). Blocks
// between occupied ones are materialized empty so indices form a gapless
// sequence starting at 0.
inline std::vector<TimeBlock> discretize(std::vector<Document> docs,
                                         std::int64_t block_duration_ms,
                                         std::int64_t origin_ms) {
  if (block_duration_ms <= 0) {
    throw Error(Errc::non_positive_duration,
                std::to_string(block_duration_ms));
  }
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (docs[i].timestamp_ms < docs[i - 1].timestamp_ms) {
      throw Error(Errc::unsorted_input,
                  "document " + docs[i].id + " out of order");
    }
  }
  std::vector<TimeBlock> blocks;
  if (docs.empty()) return blocks;
  if (origin_ms > docs.front().timestamp_ms) {
    throw Error(Errc::invalid_argument, "origin after earliest timestamp");
  }
  std::int64_t last_index = floor_div(
      docs.back().timestamp_ms - origin_ms, block_duration_ms);
  blocks.reserve(static_cast<std::size_t>(last_index) + 1);
  for (std::int64_t b = 0; b <= last_index; ++b) {
    TimeBlock blk;
    blk.index = static_cast<std::size_t>(b);
    blk.start_ms = origin_ms + b * block_duration_ms;
    blk.duration_ms = block_duration_ms;
    blocks.push_back(std::move(blk));
  }
  for (Document& d : docs) {
    auto idx = static_cast<std::size_t>(
        floor_div(d.timestamp_ms - origin_ms, block_duration_ms));
    blocks[idx].documents.push_back(std::move(d));
  }
  return blocks;
}

}  // namespace ned

#pragma once

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ned/error.hpp"
#include "ned/ingest.hpp"
#include "ned/text.hpp"

namespace ned {

// A disambiguated identity: case-folded canonical name plus the surfaces
// that mapped to it.
struct CanonicalEntity {
  std::string canonical_name;
  EntityKind kind = EntityKind::person;
  std::set<std::string> aliases;
};

struct GazetteerEntry {
  std::string name;
  EntityKind kind = EntityKind::person;
};

// Exact-match dictionaries keyed on normalized token strings. add() keeps a
// first-token index so multi-token surfaces can be matched longest-first.
class Gazetteer {
 public:
  void add(const std::string& surface, const std::string& name,
           EntityKind kind) {
    std::string key = normalize_term(surface);
    if (key.empty() || name.empty()) {
      throw Error(Errc::schema_mismatch, "empty gazetteer entry");
    }
    entries_[key] = GazetteerEntry{name, kind};
    std::vector<std::string> tokens = split_words(key);
    auto& bucket = index_[tokens.front()];
    bucket.push_back(std::move(tokens));
    std::sort(bucket.begin(), bucket.end(),
              [](const std::vector<std::string>& a,
                 const std::vector<std::string>& b) {
                if (a.size() != b.size()) return a.size() > b.size();
                return a < b;
              });
  }

  void add_abbreviation(const std::string& short_form,
                        const std::string& long_form) {
    abbreviations_[normalize_term(short_form)] = long_form;
  }

  void add_exception(const std::string& surface,
                     const std::string& canonical) {
    exceptions_[normalize_term(surface)] = canonical;
  }

  const std::map<std::string, GazetteerEntry>& entries() const {
    return entries_;
  }

  std::optional<GazetteerEntry> lookup(const std::string& normalized) const {
    auto it = entries_.find(normalized);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::string> expand_abbreviation(
      const std::string& normalized) const {
    auto it = abbreviations_.find(normalized);
    if (it == abbreviations_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::string> exception_for(
      const std::string& normalized) const {
    auto it = exceptions_.find(normalized);
    if (it == exceptions_.end()) return std::nullopt;
    return it->second;
  }

  // Candidate token sequences starting with `first`, longest first.
  const std::vector<std::vector<std::string>>* candidates(
      const std::string& first) const {
    auto it = index_.find(first);
    if (it == index_.end()) return nullptr;
    return &it->second;
  }

 private:
  std::map<std::string, GazetteerEntry> entries_;
  std::map<std::string, std::string> abbreviations_;
  std::map<std::string, std::string> exceptions_;
  std::map<std::string, std::vector<std::vector<std::string>>> index_;
};

inline Gazetteer load_gazetteer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_unreadable, "cannot open " + path);
  nlohmann::json root = nlohmann::json::parse(in, nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    throw Error(Errc::schema_mismatch, path + " is not a JSON object");
  }
  Gazetteer g;
  if (root.contains("entries")) {
    for (auto& [surface, entry] : root["entries"].items()) {
      if (!entry.is_object() || !entry.contains("name") ||
          !entry.contains("kind")) {
        throw Error(Errc::schema_mismatch, "bad entry for " + surface);
      }
      auto kind = parse_entity_kind(entry["kind"].get<std::string>());
      if (!kind) {
        throw Error(Errc::schema_mismatch,
                    "unknown kind for " + surface);
      }
      g.add(surface, entry["name"].get<std::string>(), *kind);
    }
  }
  if (root.contains("abbreviations")) {
    for (auto& [s, l] : root["abbreviations"].items()) {
      g.add_abbreviation(s, l.get<std::string>());
    }
  }
  if (root.contains("exceptions")) {
    for (auto& [s, c] : root["exceptions"].items()) {
      g.add_exception(s, c.get<std::string>());
    }
  }
  return g;
}

enum class ProviderKind { pre_annotated, gazetteer_tagger, external };

// Sidecar annotations: document id -> mentions, loaded from JSONL records
// {"id": ..., "entities": [...]}.
using SidecarAnnotations = std::map<std::string, std::vector<EntityMention>>;

inline SidecarAnnotations load_sidecar_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_unreadable, "cannot open " + path);
  SidecarAnnotations out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("id") ||
        !rec.contains("entities")) {
      throw Error(Errc::schema_mismatch, "bad annotation record: " + line);
    }
    auto ents = detail::entities_from_json(rec["entities"]);
    if (!ents) {
      throw Error(Errc::schema_mismatch, "bad entities for record: " + line);
    }
    out[rec["id"].get<std::string>()] = std::move(*ents);
  }
  return out;
}

struct AnnotationProvider {
  ProviderKind kind = ProviderKind::gazetteer_tagger;
  const SidecarAnnotations* sidecar = nullptr;
};

namespace detail {

inline void validate_mentions(const Document& doc,
                              std::vector<EntityMention>& mentions) {
  for (const EntityMention& m : mentions) {
    if (m.start >= m.end || m.end > doc.text.size()) {
      throw Error(Errc::annotation_span_invalid,
                  doc.id + ": [" + std::to_string(m.start) + "," +
                      std::to_string(m.end) + ") in text of length " +
                      std::to_string(doc.text.size()));
    }
    std::string slice = doc.text.substr(m.start, m.end - m.start);
    if (normalize_term(slice) != normalize_term(m.surface)) {
      throw Error(Errc::annotation_span_invalid,
                  doc.id + ": surface '" + m.surface +
                      "' does not match text '" + slice + "'");
    }
  }
  std::stable_sort(mentions.begin(), mentions.end(),
                   [](const EntityMention& a, const EntityMention& b) {
                     return a.start < b.start;
                   });
}

inline std::vector<EntityMention> gazetteer_tag(const Document& doc,
                                                const Gazetteer& gazetteer) {
  std::vector<EntityMention> mentions;
  std::vector<Token> tokens = tokenize(doc.text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto* cands = gazetteer.candidates(tokens[i].norm);
    bool matched = false;
    if (cands) {
      for (const std::vector<std::string>& cand : *cands) {
        if (i + cand.size() > tokens.size()) continue;
        bool ok = true;
        for (std::size_t k = 1; k < cand.size(); ++k) {
          if (tokens[i + k].norm != cand[k]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        std::string key;
        for (std::size_t k = 0; k < cand.size(); ++k) {
          if (k) key.push_back(' ');
          key += cand[k];
        }
        auto entry = gazetteer.lookup(key);
        if (!entry) continue;
        std::size_t start = tokens[i].start;
        std::size_t end = tokens[i + cand.size() - 1].end;
        mentions.push_back(EntityMention{
            doc.text.substr(start, end - start), entry->kind, start, end});
        i += cand.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return mentions;
}

}  // namespace detail

// Produces the document's mentions from the configured source. Spans are
// validated against the document text; results come back in document order.
inline std::vector<EntityMention> annotate(const Document& doc,
                                           const AnnotationProvider& provider,
                                           const Gazetteer& gazetteer) {
  std::vector<EntityMention> mentions;
  switch (provider.kind) {
    case ProviderKind::pre_annotated:
      if (!doc.pre_annotations) {
        throw Error(Errc::missing_annotations, doc.id);
      }
      mentions = *doc.pre_annotations;
      detail::validate_mentions(doc, mentions);
      break;
    case ProviderKind::external: {
      if (provider.sidecar) {
        auto it = provider.sidecar->find(doc.id);
        if (it != provider.sidecar->end()) mentions = it->second;
      }
      detail::validate_mentions(doc, mentions);
      break;
    }
    case ProviderKind::gazetteer_tagger:
      mentions = detail::gazetteer_tag(doc, gazetteer);
      break;
  }
  return mentions;
}

// Multi-word Person names seen so far in the current time block, most
// recent first.
class PersonMemory {
 public:
  void reset() { names_.clear(); }

  void remember(const std::string& full_name) {
    auto it = std::find(names_.begin(), names_.end(), full_name);
    if (it != names_.end()) names_.erase(it);
    names_.push_front(full_name);
  }

  // Most recent remembered name having `word` among its tokens.
  std::optional<std::string> match(const std::string& word) const {
    std::string w = normalize_term(word);
    for (const std::string& name : names_) {
      for (const std::string& tok : split_words(normalize_term(name))) {
        if (tok == w) return name;
      }
    }
    return std::nullopt;
  }

  std::size_t size() const { return names_.size(); }

 private:
  std::deque<std::string> names_;
};

// Rewrites single-word Person mentions to the most recent matching
// multi-word name; retains them unchanged when nothing matches. Multi-word
// Person mentions are pushed to memory as they are encountered. Kinds and
// mention count never change.
inline std::vector<EntityMention> disambiguate_persons(
    std::vector<EntityMention> mentions, PersonMemory& memory) {
  for (EntityMention& m : mentions) {
    if (m.kind != EntityKind::person) continue;
    std::string norm = normalize_term(m.surface);
    std::vector<std::string> words = split_words(norm);
    if (words.size() >= 2) {
      memory.remember(normalize_ws(m.surface));
    } else if (words.size() == 1) {
      if (auto full = memory.match(words.front())) {
        m.surface = *full;
      }
    }
  }
  return mentions;
}

// Exceptions first, then abbreviation expansion (Locations and
// Organizations only), then case-folding.
inline CanonicalEntity canonicalize(const EntityMention& mention,
                                    const Gazetteer& gazetteer,
                                    bool expand_abbreviations = true) {
  std::string current = normalize_ws(mention.surface);
  std::string key = normalize_term(current);
  if (auto exc = gazetteer.exception_for(key)) {
    current = *exc;
    key = normalize_term(current);
  }
  if (expand_abbreviations && mention.kind != EntityKind::person) {
    if (auto full = gazetteer.expand_abbreviation(key)) {
      current = *full;
      key = normalize_term(current);
    }
  }
  CanonicalEntity entity;
  entity.canonical_name = key;
  entity.kind = mention.kind;
  entity.aliases.insert(normalize_ws(mention.surface));
  return entity;
}

// Corpus-wide canonical-name table. One kind owns each plain name; a second
// kind arriving at the same name is keyed with a kind suffix.
class EntityRegistry {
 public:
  const std::string& key(const CanonicalEntity& entity) {
    auto it = kind_of_.find(entity.canonical_name);
    std::string k;
    if (it == kind_of_.end() || it->second == entity.kind) {
      if (it == kind_of_.end()) kind_of_[entity.canonical_name] = entity.kind;
      k = entity.canonical_name;
    } else {
      k = entity.canonical_name + "#" +
          lower_ascii(entity_kind_tag(entity.kind));
    }
    auto slot = keys_.emplace(k, KeyInfo{entity.kind, {}}).first;
    slot->second.aliases.insert(entity.aliases.begin(), entity.aliases.end());
    return slot->first;
  }

  bool contains(const std::string& key) const { return keys_.count(key) > 0; }
  std::size_t size() const { return keys_.size(); }

  EntityKind kind(const std::string& key) const { return keys_.at(key).kind; }

  const std::set<std::string>& aliases(const std::string& key) const {
    return keys_.at(key).aliases;
  }

 private:
  struct KeyInfo {
    EntityKind kind;
    std::set<std::string> aliases;
  };
  std::map<std::string, EntityKind> kind_of_;  // plain-name owner
  std::map<std::string, KeyInfo> keys_;
};

}  // namespace ned

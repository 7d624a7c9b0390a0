#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "ned/entities.hpp"
#include "ned/error.hpp"
#include "ned/graph.hpp"
#include "ned/peaks.hpp"
#include "ned/phrases.hpp"
#include "ned/time.hpp"

namespace ned {

// Everything the detection pipeline needs beyond the corpus itself. The
// file format is one key=value per line with '#' comments; unknown keys
// are rejected rather than ignored so typos fail loudly.
struct PipelineConfig {
  std::int64_t block_duration_ms = 86'400'000;  // one day
  std::optional<std::int64_t> origin_ms;  // default: first block boundary
                                          // at or before the earliest doc
  PeakDetectorConfig peaks;
  PhraseMinerConfig phrases;
  double resolution = 1.0;
  std::size_t top_k = 20;
  std::size_t top_events = 5;
  ProviderKind provider = ProviderKind::pre_annotated;
  std::string gazetteer_path;
  std::string stopwords_path;
  std::string annotations_path;
};

inline const char* provider_name(ProviderKind k) {
  switch (k) {
    case ProviderKind::pre_annotated: return "pre_annotated";
    case ProviderKind::gazetteer_tagger: return "gazetteer";
    case ProviderKind::external: return "external";
  }
  return "unknown";
}

inline std::optional<ProviderKind> parse_provider(const std::string& s) {
  if (s == "pre_annotated") return ProviderKind::pre_annotated;
  if (s == "gazetteer") return ProviderKind::gazetteer_tagger;
  if (s == "external") return ProviderKind::external;
  return std::nullopt;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space_ascii(s[b])) ++b;
  while (e > b && is_space_ascii(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline long long config_int(const std::string& key, const std::string& val) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(val, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != val.size() || val.empty()) {
    throw Error(Errc::schema_mismatch, key + ": not an integer: " + val);
  }
  return out;
}

inline double config_double(const std::string& key, const std::string& val) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(val, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != val.size() || val.empty()) {
    throw Error(Errc::schema_mismatch, key + ": not a number: " + val);
  }
  return out;
}

inline void apply_config_line(PipelineConfig& cfg, const std::string& key,
                              const std::string& val,
                              const std::string& where) {
  if (key == "block_duration") {
    auto ms = parse_duration_ms(val);
    if (!ms) {
      throw Error(Errc::schema_mismatch, where + ": bad duration: " + val);
    }
    cfg.block_duration_ms = *ms;
  } else if (key == "origin") {
    auto ts = parse_iso8601_ms(val);
    if (!ts) {
      bool digits = !val.empty();
      for (std::size_t i = 0; i < val.size(); ++i) {
        char c = val[i];
        if (c >= '0' && c <= '9') continue;
        if (c == '-' && i == 0 && val.size() > 1) continue;
        digits = false;
        break;
      }
      if (digits) ts = config_int(key, val);
    }
    if (!ts) {
      throw Error(Errc::schema_mismatch, where + ": bad timestamp: " + val);
    }
    cfg.origin_ms = *ts;
  } else if (key == "window_x") {
    cfg.peaks.window_x = static_cast<int>(config_int(key, val));
  } else if (key == "threshold_y") {
    cfg.peaks.threshold_y = config_double(key, val);
  } else if (key == "min_support") {
    cfg.phrases.min_support = static_cast<int>(config_int(key, val));
  } else if (key == "sig_threshold") {
    cfg.phrases.sig_threshold = config_double(key, val);
  } else if (key == "max_len") {
    cfg.phrases.max_len = static_cast<int>(config_int(key, val));
  } else if (key == "resolution") {
    cfg.resolution = config_double(key, val);
  } else if (key == "top_k") {
    cfg.top_k = static_cast<std::size_t>(config_int(key, val));
  } else if (key == "top_events") {
    cfg.top_events = static_cast<std::size_t>(config_int(key, val));
  } else if (key == "provider") {
    auto p = parse_provider(val);
    if (!p) {
      throw Error(Errc::schema_mismatch, where + ": unknown provider: " + val);
    }
    cfg.provider = *p;
  } else if (key == "gazetteer") {
    cfg.gazetteer_path = val;
  } else if (key == "stopwords") {
    cfg.stopwords_path = val;
  } else if (key == "annotations") {
    cfg.annotations_path = val;
  } else {
    throw Error(Errc::schema_mismatch, where + ": unknown key: " + key);
  }
}

}  // namespace detail

inline void validate(const PipelineConfig& cfg) {
  if (cfg.block_duration_ms <= 0) {
    throw Error(Errc::non_positive_duration,
                std::to_string(cfg.block_duration_ms));
  }
  validate(cfg.peaks);
  if (cfg.phrases.min_support < 1) {
    throw Error(Errc::invalid_argument, "min_support must be >= 1");
  }
  if (cfg.phrases.max_len < 1) {
    throw Error(Errc::invalid_argument, "max_len must be >= 1");
  }
  if (!(cfg.phrases.sig_threshold == cfg.phrases.sig_threshold)) {
    throw Error(Errc::invalid_argument, "sig_threshold must be a number");
  }
  if (!(cfg.resolution > 0.0)) {
    throw Error(Errc::invalid_argument, "resolution must be > 0");
  }
  if (cfg.top_k < 1 || cfg.top_events < 1) {
    throw Error(Errc::invalid_argument, "top_k and top_events must be >= 1");
  }
  if (cfg.provider == ProviderKind::external && cfg.annotations_path.empty()) {
    throw Error(Errc::invalid_argument,
                "external provider needs an annotations path");
  }
  if (cfg.provider == ProviderKind::gazetteer_tagger &&
      cfg.gazetteer_path.empty()) {
    throw Error(Errc::invalid_argument,
                "gazetteer provider needs a gazetteer path");
  }
}

inline PipelineConfig parse_config(std::istream& in,
                                   const std::string& source) {
  PipelineConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string where = source + ":" + std::to_string(line_no);
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::schema_mismatch, where + ": expected key=value");
    }
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(Errc::schema_mismatch, where + ": empty key");
    }
    detail::apply_config_line(cfg, key, val, where);
  }
  validate(cfg);
  return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_unreadable, "cannot open config: " + path);
  }
  return parse_config(in, path);
}

// Canonical form: every key on its own line in a fixed order, numeric
// values in shortest round-trip notation. Equal configurations serialize
// identically, so the hash below identifies a run's parameters.
inline std::string serialize_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "block_duration=" << cfg.block_duration_ms << "ms\n";
  if (cfg.origin_ms) out << "origin=" << *cfg.origin_ms << "\n";
  out << "window_x=" << cfg.peaks.window_x << "\n";
  out << "threshold_y=" << format_double(cfg.peaks.threshold_y) << "\n";
  out << "min_support=" << cfg.phrases.min_support << "\n";
  out << "sig_threshold=" << format_double(cfg.phrases.sig_threshold) << "\n";
  out << "max_len=" << cfg.phrases.max_len << "\n";
  out << "resolution=" << format_double(cfg.resolution) << "\n";
  out << "top_k=" << cfg.top_k << "\n";
  out << "top_events=" << cfg.top_events << "\n";
  out << "provider=" << provider_name(cfg.provider) << "\n";
  if (!cfg.gazetteer_path.empty()) {
    out << "gazetteer=" << cfg.gazetteer_path << "\n";
  }
  if (!cfg.stopwords_path.empty()) {
    out << "stopwords=" << cfg.stopwords_path << "\n";
  }
  if (!cfg.annotations_path.empty()) {
    out << "annotations=" << cfg.annotations_path << "\n";
  }
  return out.str();
}

// FNV-1a over the canonical serialization.
inline std::string config_hash(const PipelineConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ned

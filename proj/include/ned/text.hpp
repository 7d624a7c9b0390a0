#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ned/error.hpp"

namespace ned {

inline bool is_space_ascii(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_punct_ascii(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

inline char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string lower_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(to_lower_ascii(c));
  return out;
}

// Text with whitespace runs collapsed to single spaces, plus offset maps so
// character spans into the raw text can be carried over.
//   span_start(i): new index of the first kept character at or after raw i
//   span_end(i):   one past the new index of the last kept character before raw i
struct NormalizedText {
  std::string text;
  std::vector<std::size_t> start_map;  // size raw_len + 1
  std::vector<std::size_t> end_map;    // size raw_len + 1

  std::size_t span_start(std::size_t raw_i) const {
    return start_map.at(raw_i);
  }
  std::size_t span_end(std::size_t raw_i) const { return end_map.at(raw_i); }
};

inline NormalizedText normalize_text(std::string_view raw) {
  NormalizedText nt;
  const std::size_t n = raw.size();
  std::vector<std::size_t> newpos(n, std::string::npos);
  std::size_t i = 0;
  while (i < n) {
    if (is_space_ascii(raw[i])) {
      std::size_t j = i;
      while (j < n && is_space_ascii(raw[j])) ++j;
      if (!nt.text.empty() && j < n) nt.text.push_back(' ');
      i = j;
    } else {
      newpos[i] = nt.text.size();
      nt.text.push_back(raw[i]);
      ++i;
    }
  }
  nt.start_map.assign(n + 1, nt.text.size());
  std::size_t cur = nt.text.size();
  for (std::size_t k = n; k-- > 0;) {
    if (newpos[k] != std::string::npos) cur = newpos[k];
    nt.start_map[k] = cur;
  }
  nt.end_map.assign(n + 1, 0);
  cur = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (newpos[k - 1] != std::string::npos) cur = newpos[k - 1] + 1;
    nt.end_map[k] = cur;
  }
  return nt;
}

inline std::string normalize_ws(std::string_view raw) {
  return normalize_text(raw).text;
}

// A word token: normalized form plus the character span it was cut from.
// The span covers the token after surrounding punctuation is stripped;
// the normalized form is additionally lowercased (ASCII) and loses a
// trailing possessive 's.
struct Token {
  std::string norm;
  std::size_t start = 0;
  std::size_t end = 0;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    if (is_space_ascii(text[i])) {
      ++i;
      continue;
    }
    std::size_t b = i;
    while (i < n && !is_space_ascii(text[i])) ++i;
    std::size_t e = i;
    while (b < e && is_punct_ascii(text[b])) ++b;
    while (e > b && is_punct_ascii(text[e - 1])) --e;
    if (b >= e) continue;
    std::string norm = lower_ascii(text.substr(b, e - b));
    if (norm.size() > 2 && norm.compare(norm.size() - 2, 2, "'s") == 0) {
      norm.erase(norm.size() - 2);
    }
    tokens.push_back(Token{std::move(norm), b, e});
  }
  return tokens;
}

// Canonical form of a free-form term: tokenize and rejoin with single
// spaces. Used for gazetteer keys, canonical entity names and evaluation
// keywords so they all normalize the same way.
inline std::string normalize_term(std::string_view s) {
  std::string out;
  for (const Token& t : tokenize(s)) {
    if (!out.empty()) out.push_back(' ');
    out += t.norm;
  }
  return out;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b) words.emplace_back(s.substr(b, i - b));
  }
  return words;
}

inline const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "can't", "cannot", "could", "couldn't", "did", "didn't", "do", "does",
      "doesn't", "doing", "don't", "down", "during", "each", "few", "for",
      "from", "further", "had", "hadn't", "has", "hasn't", "have", "haven't",
      "having", "he", "he'd", "he'll", "her", "here", "here's", "hers",
      "herself", "him", "himself", "his", "how", "how's", "i", "i'd", "i'll",
      "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's", "its",
      "itself", "let's", "me", "more", "most", "mustn't", "my", "myself",
      "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other",
      "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
      "shan't", "she", "she'd", "she'll", "should", "shouldn't", "so",
      "some", "such", "than", "that", "that's", "the", "their", "theirs",
      "them", "themselves", "then", "there", "there's", "these", "they",
      "they'd", "they'll", "they're", "they've", "this", "those", "through",
      "to", "too", "under", "until", "up", "very", "was", "wasn't", "we",
      "we'd", "we'll", "we're", "we've", "were", "weren't", "what", "what's",
      "when", "when's", "where", "where's", "which", "while", "who", "who's",
      "whom", "why", "why's", "with", "won't", "would", "wouldn't", "you",
      "you'd", "you'll", "you're", "you've", "your", "yours", "yourself",
      "yourselves",
  };
  return words;
}

inline std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_unreadable, "cannot open " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = normalize_term(line);
    if (!w.empty()) words.insert(w);
  }
  return words;
}

}  // namespace ned

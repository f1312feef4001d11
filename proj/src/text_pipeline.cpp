#include "ats/text_pipeline.hpp"

#include <array>
#include <cctype>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "ats/contractions_data.hpp"

namespace ats {
namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

bool is_kept_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' ';
}

const std::unordered_map<std::string, std::string>& contraction_map() {
  static const std::unordered_map<std::string, std::string> map = [] {
    std::unordered_map<std::string, std::string> m;
    for (const auto& [key, value] : contraction_table()) m.emplace(key, value);
    return m;
  }();
  return map;
}

// Words the suffix rules must leave alone.
const std::unordered_set<std::string>& lemma_exceptions() {
  static const std::unordered_set<std::string> set = {
      "is",   "was",  "has",   "does",  "goes",  "its",     "his",    "hers",
      "ours", "yours", "theirs", "as",   "us",    "this",    "thus",   "news",
      "gas",  "bus",  "buses", "plus",  "series", "species", "always", "perhaps",
  };
  return set;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& contraction_table() {
  static const std::vector<std::pair<std::string, std::string>> table = [] {
    std::vector<std::pair<std::string, std::string>> t;
    std::string_view tsv(detail::kContractionsTsv);
    std::size_t pos = 0;
    while (pos < tsv.size()) {
      std::size_t eol = tsv.find('\n', pos);
      if (eol == std::string_view::npos) eol = tsv.size();
      std::string_view line = tsv.substr(pos, eol - pos);
      pos = eol + 1;
      if (line.empty()) continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) continue;
      t.emplace_back(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    }
    return t;
  }();
  return table;
}

std::string strip_markup(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '<') {
      const std::size_t close = text.find('>', i + 1);
      if (close != std::string::npos) {
        i = close + 1;
        continue;
      }
    }
    if (c != '(' && c != ')') out.push_back(c);
    ++i;
  }
  return out;
}

std::string expand_contractions(const std::string& text) {
  const auto& map = contraction_map();
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    const std::string word = text.substr(i, j - i);
    const auto it = map.find(word);
    out += (it == map.end()) ? word : it->second;
    i = j;
  }
  return out;
}

std::string lemmatize_basic(const std::string& token) {
  if (token.size() <= 2 || lemma_exceptions().count(token)) return token;
  if (ends_with(token, "ss")) return token;
  if (ends_with(token, "ies") && token.size() > 4) {
    return token.substr(0, token.size() - 3) + "y";
  }
  if (ends_with(token, "es")) {
    if (ends_with(token, "sses") || ends_with(token, "ches") ||
        ends_with(token, "shes") || ends_with(token, "xes") ||
        ends_with(token, "zes")) {
      return token.substr(0, token.size() - 2);
    }
    return token.substr(0, token.size() - 1);
  }
  if (ends_with(token, "s") && token.size() > 3 && !ends_with(token, "us") &&
      !ends_with(token, "is")) {
    return token.substr(0, token.size() - 1);
  }
  return token;
}

std::vector<std::string> clean_text(const std::string& text, bool is_summary) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }

  const std::string expanded = expand_contractions(strip_markup(lowered));

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(lemmatize_basic(current));
      current.clear();
    }
  };
  for (char c : expanded) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (is_kept_char(c)) {
      current.push_back(c);
    }  // anything else is a special character and is dropped outright
  }
  flush();

  if (tokens.empty()) return {};
  if (is_summary) {
    std::vector<std::string> wrapped;
    wrapped.reserve(tokens.size() + 2);
    wrapped.emplace_back(kStartToken);
    wrapped.insert(wrapped.end(), tokens.begin(), tokens.end());
    wrapped.emplace_back(kEndToken);
    return wrapped;
  }
  return tokens;
}

}  // namespace ats

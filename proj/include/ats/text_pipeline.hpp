#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ats {

/// One raw dataset row. Rows whose fields are empty after trimming are
/// rejected at ingestion.
struct RawExample {
  std::string article;
  std::string summary;
};

/// Cleaned token sequences; summary tokens carry the boundary markers.
struct CleanExample {
  std::vector<std::string> article_tokens;
  std::vector<std::string> summary_tokens;  // "<start>" ... "<end>"
};

inline constexpr const char* kStartToken = "<start>";
inline constexpr const char* kEndToken = "<end>";
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";

/// Shipped contraction table (loaded from the embedded copy of
/// data/contractions.tsv), in file order.
const std::vector<std::pair<std::string, std::string>>& contraction_table();

/// Drops <...> tag spans and removes parenthesis characters, keeping the
/// text inside parentheses. No other characters change.
std::string strip_markup(const std::string& text);

/// Replaces every standalone occurrence of a contraction-table key in
/// lowercase text by its expansion.
std::string expand_contractions(const std::string& text);

/// Suffix-rule lemmatizer: -ies/-es/-s handling guarded by an exception
/// list; anything else passes through unchanged.
std::string lemmatize_basic(const std::string& token);

/// Full cleaning pipeline: lowercase, strip_markup, expand_contractions,
/// drop special characters, tokenize, lemmatize, and (for summaries) wrap
/// with <start>/<end>. Returns an empty sequence when nothing survives.
std::vector<std::string> clean_text(const std::string& text, bool is_summary);

}  // namespace ats

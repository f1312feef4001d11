#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "ats/text_pipeline.hpp"

namespace ats {

/// Bidirectional token<->id mapping. Ids 0..3 are always <pad>, <start>,
/// <end>, <unk>, in that order; the mapping is immutable once built.
class Vocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kStartId = 1;
  static constexpr int kEndId = 2;
  static constexpr int kUnkId = 3;

  Vocabulary();

  /// Counts token frequencies over both sides of the corpus (boundary
  /// markers excluded), keeps tokens with frequency >= min_freq by
  /// descending frequency (ties broken lexicographically) until max_size.
  static Vocabulary build(const std::vector<CleanExample>& corpus,
                          std::size_t max_size, std::size_t min_freq);

  std::size_t size() const noexcept { return id_to_token_.size(); }

  /// Id for a token; unknown tokens map to kUnkId.
  int id_of(const std::string& token) const;
  bool contains(const std::string& token) const;

  /// Token for an id; throws IdOutOfRange.
  const std::string& token_of(int id) const;

  /// Training-corpus frequency recorded for an id (0 for the specials).
  std::uint64_t frequency_of(int id) const;

  // Line-oriented text format: id<TAB>token<TAB>frequency.
  void write(std::ostream& os) const;
  static Vocabulary read(std::istream& is);
  void write_file(const std::string& path) const;
  static Vocabulary read_file(const std::string& path);

 private:
  void append(const std::string& token, std::uint64_t freq);

  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
  std::vector<std::uint64_t> frequencies_;
};

/// One integer-encoded sequence plus its pre-padding length.
struct EncodedSeq {
  std::vector<int> ids;
  std::size_t len = 0;
};

/// Integer-encoded article/summary pair, padded to fixed lengths.
struct TokenizedExample {
  std::vector<int> input_ids;
  std::vector<int> target_ids;
  std::size_t input_len = 0;
  std::size_t target_len = 0;
};

/// Maps tokens to ids (<unk> for out-of-vocabulary), truncates to max_len,
/// right-pads with <pad>. A trailing <end> marker survives truncation as
/// the last non-pad id.
EncodedSeq encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                  std::size_t max_len);

/// Inverse of encode on in-vocabulary, untruncated input: strips pad and
/// boundary ids and maps the rest back to tokens. Throws IdOutOfRange.
std::vector<std::string> decode_ids(const std::vector<int>& ids,
                                    const Vocabulary& vocab);

TokenizedExample tokenize_example(const CleanExample& clean, const Vocabulary& vocab,
                                  std::size_t max_in_len, std::size_t max_out_len);

}  // namespace ats

#include "ats/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "ats/errors.hpp"

namespace ats {

Vocabulary::Vocabulary() {
  append(kPadToken, 0);
  append(kStartToken, 0);
  append(kEndToken, 0);
  append(kUnkToken, 0);
}

void Vocabulary::append(const std::string& token, std::uint64_t freq) {
  token_to_id_.emplace(token, static_cast<int>(id_to_token_.size()));
  id_to_token_.push_back(token);
  frequencies_.push_back(freq);
}

Vocabulary Vocabulary::build(const std::vector<CleanExample>& corpus,
                             std::size_t max_size, std::size_t min_freq) {
  if (max_size < 5) throw ConfigError("vocabulary max_size must be at least 5");

  // std::map keeps candidates in lexicographic order, which settles ties.
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  auto tally = [&](const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) {
      if (t == kStartToken || t == kEndToken) continue;
      ++counts[t];
      ++total;
    }
  };
  for (const auto& ex : corpus) {
    tally(ex.article_tokens);
    tally(ex.summary_tokens);
  }
  if (total == 0) throw EmptyCorpus("vocabulary build: corpus has no tokens");

  std::vector<std::pair<std::string, std::uint64_t>> candidates;
  candidates.reserve(counts.size());
  for (const auto& [token, freq] : counts) {
    if (freq >= min_freq) candidates.emplace_back(token, freq);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  Vocabulary vocab;
  for (const auto& [token, freq] : candidates) {
    if (vocab.size() >= max_size) break;
    vocab.append(token, freq);
  }
  return vocab;
}

int Vocabulary::id_of(const std::string& token) const {
  const auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return token_to_id_.count(token) != 0;
}

const std::string& Vocabulary::token_of(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw IdOutOfRange("token id " + std::to_string(id) + " out of range for vocabulary of size " +
                       std::to_string(id_to_token_.size()));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::frequency_of(int id) const {
  token_of(id);  // bounds check
  return frequencies_[static_cast<std::size_t>(id)];
}

void Vocabulary::write(std::ostream& os) const {
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    os << i << '\t' << id_to_token_[i] << '\t' << frequencies_[i] << '\n';
  }
}

Vocabulary Vocabulary::read(std::istream& is) {
  Vocabulary vocab;
  std::string line;
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string id_field, token, freq_field;
    if (!std::getline(ls, id_field, '\t') || !std::getline(ls, token, '\t') ||
        !std::getline(ls, freq_field)) {
      throw CorruptSection("vocabulary line is not id<TAB>token<TAB>frequency: " + line);
    }
    const std::size_t id = std::stoull(id_field);
    if (id != expected) {
      throw CorruptSection("vocabulary ids must be dense and ascending");
    }
    if (expected < 4) {
      if (token != vocab.id_to_token_[expected]) {
        throw CorruptSection("vocabulary reserved token mismatch at id " + id_field);
      }
      vocab.frequencies_[expected] = std::stoull(freq_field);
    } else {
      vocab.append(token, std::stoull(freq_field));
    }
    ++expected;
  }
  if (expected < 4) throw CorruptSection("vocabulary is missing reserved tokens");
  return vocab;
}

void Vocabulary::write_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open vocabulary file for writing: " + path);
  write(os);
}

Vocabulary Vocabulary::read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open vocabulary file: " + path);
  return read(is);
}

EncodedSeq encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                  std::size_t max_len) {
  EncodedSeq out;
  out.ids.reserve(max_len);
  const bool ends_marked = !tokens.empty() && tokens.back() == kEndToken;
  if (tokens.size() <= max_len) {
    for (const auto& t : tokens) out.ids.push_back(vocab.id_of(t));
  } else {
    // Truncate inside the sequence; a trailing end marker stays terminal.
    const std::size_t body = ends_marked ? max_len - 1 : max_len;
    for (std::size_t i = 0; i < body; ++i) out.ids.push_back(vocab.id_of(tokens[i]));
    if (ends_marked) out.ids.push_back(Vocabulary::kEndId);
  }
  out.len = out.ids.size();
  out.ids.resize(max_len, Vocabulary::kPadId);
  return out;
}

std::vector<std::string> decode_ids(const std::vector<int>& ids, const Vocabulary& vocab) {
  std::vector<std::string> tokens;
  tokens.reserve(ids.size());
  for (int id : ids) {
    const std::string& token = vocab.token_of(id);  // throws on out-of-range
    if (id == Vocabulary::kPadId || id == Vocabulary::kStartId ||
        id == Vocabulary::kEndId) {
      continue;
    }
    tokens.push_back(token);
  }
  return tokens;
}

TokenizedExample tokenize_example(const CleanExample& clean, const Vocabulary& vocab,
                                  std::size_t max_in_len, std::size_t max_out_len) {
  TokenizedExample ex;
  EncodedSeq in = encode(clean.article_tokens, vocab, max_in_len);
  EncodedSeq out = encode(clean.summary_tokens, vocab, max_out_len);
  ex.input_ids = std::move(in.ids);
  ex.input_len = in.len;
  ex.target_ids = std::move(out.ids);
  ex.target_len = out.len;
  return ex;
}

}  // namespace ats

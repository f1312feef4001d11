#include "ats/csv.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "ats/errors.hpp"

namespace ats {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  char c;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  while (is.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (is.peek() == '"') {
          field.push_back('"');
          is.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_started || !field.empty() || !row.empty()) end_row();
        break;
      default:
        field.push_back(c);
        row_started = true;
        break;
    }
  }
  if (in_quotes) throw DataError("csv: unterminated quoted field");
  if (row_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<RawExample> load_csv_dataset(const std::string& path,
                                         const std::string& text_column,
                                         const std::string& summary_column) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DatasetNotFound("dataset not found: " + path);

  const auto rows = read_csv(is);
  if (rows.empty()) throw DataError("dataset has no header row: " + path);

  const auto& header = rows.front();
  const auto find_col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw DataError("dataset is missing column '" + name + "': " + path);
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t text_idx = find_col(text_column);
  const std::size_t summary_idx = find_col(summary_column);

  std::vector<RawExample> examples;
  examples.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= std::max(text_idx, summary_idx)) continue;
    RawExample ex{trim(row[text_idx]), trim(row[summary_idx])};
    if (ex.article.empty() || ex.summary.empty()) continue;
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace ats

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ats/text_pipeline.hpp"

namespace ats {

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, embedded
/// newlines, CRLF line ends. Returns one row per record.
std::vector<std::vector<std::string>> read_csv(std::istream& is);

/// Loads article/summary pairs from a headered CSV file. Rows whose chosen
/// columns are empty after whitespace trimming are skipped.
std::vector<RawExample> load_csv_dataset(const std::string& path,
                                         const std::string& text_column,
                                         const std::string& summary_column);

}  // namespace ats

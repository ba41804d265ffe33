#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace eventpulse {
namespace csv {

struct Row {
  std::size_t line = 0; // 1-based line number in the source
  std::vector<std::string> fields;
};

// Splits one CSV line. Double-quoted fields may contain commas and doubled
// quotes ("" -> ").
std::vector<std::string> split(const std::string& line);

// Reads all rows, skipping blank lines and lines starting with '#'.
// The first returned row is the header.
std::vector<Row> read_rows(std::istream& in);

// Leading '#' comment lines that precede the header (metadata carriers).
std::vector<std::string> read_leading_comments(std::istream& in);

} // namespace csv
} // namespace eventpulse

#include "eventpulse/csv.hpp"

namespace eventpulse {
namespace csv {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

namespace {

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

} // namespace

std::vector<Row> read_rows(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(Row{lineno, split(line)});
  }
  return rows;
}

std::vector<std::string> read_leading_comments(std::istream& in) {
  std::vector<std::string> comments;
  std::string line;
  while (in.peek() == '#') {
    if (!std::getline(in, line)) break;
    comments.push_back(strip_cr(line));
  }
  return comments;
}

} // namespace csv
} // namespace eventpulse

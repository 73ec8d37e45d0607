#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace rcf::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line of the row's first character
  std::vector<std::string> fields;
};

// RFC-4180-ish: double-quoted fields, "" escapes a quote, CRLF tolerated,
// newlines allowed inside quoted fields. Throws ParseError on stray quotes.
std::vector<Row> read(std::istream& in);
std::vector<Row> read_file(const std::string& path);

// Quotes a field only when it needs it.
std::string escape(const std::string& field);
std::string join(const std::vector<std::string>& fields);

}  // namespace rcf::csv

#include "core/csv.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "core/errors.hpp"

namespace rcf::csv {

std::vector<Row> read(std::istream& in) {
  std::vector<Row> rows;
  Row cur;
  std::string field;
  std::size_t line = 1;
  cur.line = 1;
  bool in_quotes = false;
  bool row_started = false;

  auto end_field = [&] {
    cur.fields.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    if (row_started || !cur.fields.empty()) {
      end_field();
      rows.push_back(std::move(cur));
      cur = Row{};
    }
    cur.line = line;
    row_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') { in.get(c); field += '"'; }
        else in_quotes = false;
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw ParseError("line " + std::to_string(line) + ": unexpected quote inside unquoted field");
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        break;  // tolerate CRLF
      case '\n':
        ++line;
        end_row();
        break;
      default:
        field += c;
        row_started = true;
        break;
    }
  }
  if (in_quotes)
    throw ParseError("line " + std::to_string(line) + ": unterminated quoted field");
  end_row();  // last line without trailing newline
  return rows;
}

std::vector<Row> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  return read(in);
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace rcf::csv

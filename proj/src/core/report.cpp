#include "core/report.hpp"

#include <cmath>
#include <cstdio>

#include "core/csv.hpp"

namespace rcf {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void TextReport::field(std::string_view name, std::string_view value) {
  out_.append(name);
  out_.append(": ");
  out_.append(value);
  out_.push_back('\n');
}

void TextReport::field(std::string_view name, double value) { field(name, format_double(value)); }
void TextReport::field(std::string_view name, std::size_t value) { field(name, std::to_string(value)); }
void TextReport::field(std::string_view name, int value) { field(name, std::to_string(value)); }
void TextReport::blank() { out_.push_back('\n'); }

void CsvReport::comment(std::string_view key, std::string_view value) {
  std::string c = "# ";
  c.append(key);
  c.append(": ");
  c.append(value);
  comments_.push_back(std::move(c));
}

void CsvReport::row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

std::string CsvReport::str() const {
  std::string out;
  for (const auto& c : comments_) { out += c; out += '\n'; }
  out += csv::join(header_);
  out += '\n';
  for (const auto& r : rows_) { out += csv::join(r); out += '\n'; }
  return out;
}

}  // namespace rcf

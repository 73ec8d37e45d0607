#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rcf {

// Canonical numeric formatting for all reports: %.10g round-trips anything we
// print back to well past 6 significant digits and never emits locale commas.
std::string format_double(double v);

enum class ReportFormat { text, csv };

// "key: value" structured-text document builder.
class TextReport {
 public:
  void field(std::string_view name, std::string_view value);
  void field(std::string_view name, const char* value) { field(name, std::string_view(value)); }
  void field(std::string_view name, double value);
  void field(std::string_view name, std::size_t value);
  void field(std::string_view name, int value);
  void blank();
  std::string str() const { return out_; }

 private:
  std::string out_;
};

// CSV table with a fixed header; optional leading "# key: value" comments.
class CsvReport {
 public:
  explicit CsvReport(std::vector<std::string> header) : header_(std::move(header)) {}
  void comment(std::string_view key, std::string_view value);
  void row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace rcf

#include "core/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/report.hpp"

namespace rcf {

double cost_overrun(const ProjectRecord& r) {
  if (!r.actual_cost)
    throw DomainError("project '" + r.id + "' has no outturn cost");
  return 100.0 * (*r.actual_cost - r.estimated_cost) / r.estimated_cost;
}

double traffic_inaccuracy(const ProjectRecord& r) {
  if (!r.estimated_traffic || !r.actual_traffic)
    throw DomainError("project '" + r.id + "' has no traffic forecast/outturn pair");
  return 100.0 * (*r.actual_traffic - *r.estimated_traffic) / *r.estimated_traffic;
}

double overestimate_from_shortfall(double inaccuracy_pct) {
  if (inaccuracy_pct <= -100.0)
    throw DomainError("total shortfall: inaccuracy must be > -100 percent");
  const double i = inaccuracy_pct / 100.0;
  return 100.0 * (-i / (1.0 + i));
}

std::vector<InaccuracyObservation> observations(std::span<const ProjectRecord> records,
                                                InaccuracyKind kind) {
  std::vector<InaccuracyObservation> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (kind == InaccuracyKind::cost_overrun) {
      if (!r.actual_cost) continue;
      out.push_back({r.id, kind, cost_overrun(r)});
    } else {
      if (!r.estimated_traffic || !r.actual_traffic) continue;
      out.push_back({r.id, kind, traffic_inaccuracy(r)});
    }
  }
  return out;
}

void validate(const ProjectRecord& r) {
  auto fail = [&](const std::string& why) {
    throw ValidationError("project '" + r.id + "': " + why);
  };
  if (r.id.empty()) throw ValidationError("record has empty id");
  if (!(r.estimated_cost > 0.0)) fail("estimated_cost must be > 0");
  if (r.actual_cost && !(*r.actual_cost > 0.0)) fail("actual_cost must be > 0");
  if (r.completion_year && *r.completion_year < r.decision_year)
    fail("completion_year precedes decision_year");
  if (r.estimated_traffic && !(*r.estimated_traffic > 0.0))
    fail("estimated_traffic must be > 0");
  if (r.actual_traffic && !(*r.actual_traffic > 0.0)) fail("actual_traffic must be > 0");
  if (r.actual_traffic && !r.estimated_traffic)
    fail("actual_traffic present without estimated_traffic");
}

namespace {

const char* const kHeader[] = {"id", "name", "project_type", "region",
                               "decision_year", "completion_year", "estimated_cost",
                               "actual_cost", "estimated_traffic", "actual_traffic"};
constexpr std::size_t kNumCols = 10;

[[noreturn]] void row_fail(std::size_t line, const std::string& field, const std::string& why) {
  throw ParseError("line " + std::to_string(line) + ", field '" + field + "': " + why);
}

double parse_double(const std::string& s, std::size_t line, const char* field) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    row_fail(line, field, "not a finite number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s, std::size_t line, const char* field) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    row_fail(line, field, "not an integer: '" + s + "'");
  return v;
}

}  // namespace

std::vector<ProjectRecord> parse_dataset(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) throw ParseError("empty dataset: missing header row");

  const auto& header = rows.front().fields;
  if (header.size() != kNumCols)
    throw ParseError("header has " + std::to_string(header.size()) + " columns, expected " +
                     std::to_string(kNumCols));
  for (std::size_t i = 0; i < kNumCols; ++i)
    if (header[i] != kHeader[i])
      throw ParseError("header column " + std::to_string(i + 1) + " is '" + header[i] +
                       "', expected '" + kHeader[i] + "'");

  std::vector<ProjectRecord> records;
  records.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen;

  for (std::size_t ri = 1; ri < rows.size(); ++ri) {
    const auto& row = rows[ri];
    const auto line = row.line;
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;  // blank line
    if (row.fields.size() != kNumCols)
      throw ParseError("line " + std::to_string(line) + ": expected " +
                       std::to_string(kNumCols) + " fields, got " +
                       std::to_string(row.fields.size()));

    ProjectRecord r;
    r.id = row.fields[0];
    if (r.id.empty()) row_fail(line, "id", "must not be empty");
    if (!seen.insert(r.id).second)
      throw ValidationError("line " + std::to_string(line) + ": duplicate project id '" + r.id + "'");
    r.name = row.fields[1];

    if (auto t = project_type_from_string(row.fields[2])) r.type = *t;
    else row_fail(line, "project_type", "unknown value '" + row.fields[2] + "'");
    if (auto g = region_from_string(row.fields[3])) r.region = *g;
    else row_fail(line, "region", "unknown value '" + row.fields[3] + "'");

    r.decision_year = parse_int(row.fields[4], line, "decision_year");
    if (!row.fields[5].empty())
      r.completion_year = parse_int(row.fields[5], line, "completion_year");
    r.estimated_cost = parse_double(row.fields[6], line, "estimated_cost");
    if (!row.fields[7].empty()) r.actual_cost = parse_double(row.fields[7], line, "actual_cost");
    if (!row.fields[8].empty())
      r.estimated_traffic = parse_double(row.fields[8], line, "estimated_traffic");
    if (!row.fields[9].empty())
      r.actual_traffic = parse_double(row.fields[9], line, "actual_traffic");

    try {
      validate(r);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line) + ": " + e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ProjectRecord> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset: " + path);
  return parse_dataset(in);
}

void write_dataset(std::ostream& out, std::span<const ProjectRecord> records) {
  std::vector<std::string> cells(kHeader, kHeader + kNumCols);
  out << csv::join(cells) << '\n';
  for (const auto& r : records) {
    cells.clear();
    cells.push_back(r.id);
    cells.push_back(r.name);
    cells.emplace_back(to_string(r.type));
    cells.emplace_back(to_string(r.region));
    cells.push_back(std::to_string(r.decision_year));
    cells.push_back(r.completion_year ? std::to_string(*r.completion_year) : "");
    cells.push_back(format_double(r.estimated_cost));
    cells.push_back(r.actual_cost ? format_double(*r.actual_cost) : "");
    cells.push_back(r.estimated_traffic ? format_double(*r.estimated_traffic) : "");
    cells.push_back(r.actual_traffic ? format_double(*r.actual_traffic) : "");
    out << csv::join(cells) << '\n';
  }
}

}  // namespace rcf

#include "core/refclass.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/report.hpp"

namespace rcf {

bool matches(const ClassFilter& f, const ProjectRecord& r) {
  if (!f.types.empty() && !f.types.contains(r.type)) return false;
  if (!f.regions.empty() && !f.regions.contains(r.region)) return false;
  if (f.year_range &&
      (r.decision_year < f.year_range->first || r.decision_year > f.year_range->second))
    return false;
  return true;
}

ReferenceClass build_reference_class(std::span<const ProjectRecord> records,
                                     const ClassFilter& filter, InaccuracyKind kind,
                                     std::string provenance) {
  if (filter.year_range && filter.year_range->first > filter.year_range->second)
    throw DomainError("year range is empty (min > max)");

  std::vector<InaccuracyObservation> obs;
  for (const auto& r : records) {
    if (!matches(filter, r)) continue;
    if (kind == InaccuracyKind::cost_overrun) {
      if (!r.actual_cost) continue;  // candidate project, not history
      obs.push_back({r.id, kind, cost_overrun(r)});
    } else {
      if (!r.estimated_traffic || !r.actual_traffic) continue;
      obs.push_back({r.id, kind, traffic_inaccuracy(r)});
    }
  }
  const std::size_t floor = std::max<std::size_t>(filter.min_size, 2);
  if (obs.size() < floor) throw ClassTooSmallError(obs.size(), floor);

  std::vector<double> values;
  values.reserve(obs.size());
  for (const auto& o : obs) values.push_back(o.value);
  return ReferenceClass{filter, kind, std::move(obs), EmpiricalDistribution(std::move(values)),
                        std::move(provenance)};
}

ReferenceClass load_class_csv(const std::string& path, InaccuracyKind kind,
                              std::size_t min_size) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw ParseError(path + ": empty class file");
  const auto& header = rows.front().fields;
  if (header.size() != 2 || header[0] != "project_id" || header[1] != "value")
    throw ParseError(path + ": expected header 'project_id,value'");

  std::vector<InaccuracyObservation> obs;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;
    if (row.fields.size() != 2)
      throw ParseError(path + ": line " + std::to_string(row.line) + ": expected 2 fields");
    double v = 0.0;
    const auto& s = row.fields[1];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      throw ParseError(path + ": line " + std::to_string(row.line) +
                       ": value is not a finite number: '" + s + "'");
    obs.push_back({row.fields[0], kind, v});
  }
  const std::size_t floor = std::max<std::size_t>(min_size, 2);
  if (obs.size() < floor) throw ClassTooSmallError(obs.size(), floor);

  std::vector<double> values;
  values.reserve(obs.size());
  for (const auto& o : obs) values.push_back(o.value);
  ClassFilter f;
  f.min_size = floor;
  return ReferenceClass{std::move(f), kind, std::move(obs),
                        EmpiricalDistribution(std::move(values)), path};
}

void save_class_csv(const ReferenceClass& cls, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write class file: " + path);
  out << "project_id,value\n";
  for (const auto& o : cls.observations)
    out << csv::escape(o.project_id) << ',' << format_double(o.value) << '\n';
  if (!out) throw Error("write failed: " + path);
}

std::string filter_description(const ClassFilter& f) {
  std::string out;
  auto add = [&](const std::string& part) {
    if (!out.empty()) out += "; ";
    out += part;
  };
  if (!f.types.empty()) {
    std::string t;
    for (auto ty : f.types) {
      if (!t.empty()) t += ",";
      t += to_string(ty);
    }
    add("types=" + t);
  }
  if (!f.regions.empty()) {
    std::string g;
    for (auto rg : f.regions) {
      if (!g.empty()) g += ",";
      g += to_string(rg);
    }
    add("regions=" + g);
  }
  if (f.year_range)
    add("years=" + std::to_string(f.year_range->first) + ".." +
        std::to_string(f.year_range->second));
  if (out.empty()) out = "all projects";
  return out;
}

}  // namespace rcf

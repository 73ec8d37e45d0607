#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace rcf {

// One historical (or candidate) project. Costs are in constant-price money
// units, traffic in physical units per year; both measures below are
// denominator-scale-free so the units only need to be consistent per record.
struct ProjectRecord {
  std::string id;
  std::string name;
  ProjectType type = ProjectType::other;
  Region region = Region::other;
  int decision_year = 0;
  std::optional<int> completion_year;
  double estimated_cost = 0.0;            // at decision to build; > 0
  std::optional<double> actual_cost;      // outturn, same price level; > 0
  std::optional<double> estimated_traffic;  // first-year forecast; > 0
  std::optional<double> actual_traffic;     // first-year outturn; > 0
};

// Percent cost overrun: 100 * (actual - estimated) / estimated.
// Throws DomainError when the record has no outturn cost.
double cost_overrun(const ProjectRecord& r);

// Percent traffic inaccuracy: 100 * (actual - estimated) / estimated.
// Negative values are shortfalls. Throws DomainError when traffic is absent.
double traffic_inaccuracy(const ProjectRecord& r);

// Converts "actual traffic fell short of the forecast by i percent"
// (i = inaccuracy, negative for shortfalls) into "the forecast overstated
// actual traffic by p percent": p = 100 * (-i/100) / (1 + i/100).
// The map is an involution, so it is its own inverse.
// Throws DomainError at i <= -100 (total shortfall).
double overestimate_from_shortfall(double inaccuracy_pct);

struct InaccuracyObservation {
  std::string project_id;
  InaccuracyKind kind;
  double value = 0.0;  // percent
};

// Observations of `kind` for every record that has the needed outturn fields;
// records without them are skipped (they are candidates, not history).
std::vector<InaccuracyObservation> observations(std::span<const ProjectRecord> records,
                                                InaccuracyKind kind);

// Throws ValidationError naming the violated invariant.
void validate(const ProjectRecord& r);

// Parses the dataset CSV (schema: id,name,project_type,region,decision_year,
// completion_year,estimated_cost,actual_cost,estimated_traffic,actual_traffic;
// empty string = absent optional field). Validates every record and rejects
// duplicate ids. Errors carry the file line number and field name.
std::vector<ProjectRecord> parse_dataset(std::istream& in);
std::vector<ProjectRecord> load_dataset(const std::string& path);

void write_dataset(std::ostream& out, std::span<const ProjectRecord> records);

}  // namespace rcf

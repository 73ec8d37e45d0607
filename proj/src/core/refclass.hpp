#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core/empirical.hpp"
#include "core/records.hpp"
#include "core/types.hpp"

namespace rcf {

// Which historical projects qualify as comparable. Empty sets mean "any".
struct ClassFilter {
  std::set<ProjectType> types;
  std::set<Region> regions;
  std::optional<std::pair<int, int>> year_range;  // decision_year, inclusive
  std::size_t min_size = 10;  // classes below 30 still deserve a warning
};

bool matches(const ClassFilter& f, const ProjectRecord& r);

// A reference class: the observations that made it through the filter plus
// their empirical distribution, with provenance for the report trail.
struct ReferenceClass {
  ClassFilter filter;
  InaccuracyKind kind = InaccuracyKind::cost_overrun;
  std::vector<InaccuracyObservation> observations;
  EmpiricalDistribution distribution;
  std::string provenance;  // source dataset identifier or file path

  std::size_t size() const { return observations.size(); }
};

// Filters `records`, drops those without the outturn fields `kind` needs, and
// builds the class. Throws ClassTooSmallError (with the count) when fewer than
// filter.min_size observations survive.
ReferenceClass build_reference_class(std::span<const ProjectRecord> records,
                                     const ClassFilter& filter, InaccuracyKind kind,
                                     std::string provenance);

// Class CSV round-trip, schema: project_id,value (percent).
ReferenceClass load_class_csv(const std::string& path, InaccuracyKind kind,
                              std::size_t min_size = 2);
void save_class_csv(const ReferenceClass& cls, const std::string& path);

std::string filter_description(const ClassFilter& f);

}  // namespace rcf

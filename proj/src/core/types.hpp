#pragma once

#include <optional>
#include <string_view>

namespace rcf {

enum class ProjectType { rail, road, bridge_tunnel, ict, other };
enum class Region { europe, north_america, emerging, other };
enum class InaccuracyKind { cost_overrun, traffic_inaccuracy };

std::string_view to_string(ProjectType t);
std::string_view to_string(Region r);
std::string_view to_string(InaccuracyKind k);

std::optional<ProjectType> project_type_from_string(std::string_view s);
std::optional<Region> region_from_string(std::string_view s);
std::optional<InaccuracyKind> kind_from_string(std::string_view s);

inline constexpr int kNumProjectTypes = 5;
inline constexpr int kNumRegions = 4;

}  // namespace rcf

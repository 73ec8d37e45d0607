#include "core/types.hpp"

namespace rcf {

std::string_view to_string(ProjectType t) {
  switch (t) {
    case ProjectType::rail: return "rail";
    case ProjectType::road: return "road";
    case ProjectType::bridge_tunnel: return "bridge_tunnel";
    case ProjectType::ict: return "ict";
    case ProjectType::other: return "other";
  }
  return "other";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::europe: return "europe";
    case Region::north_america: return "north_america";
    case Region::emerging: return "emerging";
    case Region::other: return "other";
  }
  return "other";
}

std::string_view to_string(InaccuracyKind k) {
  return k == InaccuracyKind::cost_overrun ? "cost_overrun" : "traffic_inaccuracy";
}

std::optional<ProjectType> project_type_from_string(std::string_view s) {
  if (s == "rail") return ProjectType::rail;
  if (s == "road") return ProjectType::road;
  if (s == "bridge_tunnel") return ProjectType::bridge_tunnel;
  if (s == "ict") return ProjectType::ict;
  if (s == "other") return ProjectType::other;
  return std::nullopt;
}

std::optional<Region> region_from_string(std::string_view s) {
  if (s == "europe") return Region::europe;
  if (s == "north_america") return Region::north_america;
  if (s == "emerging") return Region::emerging;
  if (s == "other") return Region::other;
  return std::nullopt;
}

std::optional<InaccuracyKind> kind_from_string(std::string_view s) {
  if (s == "cost" || s == "cost_overrun") return InaccuracyKind::cost_overrun;
  if (s == "traffic" || s == "traffic_inaccuracy") return InaccuracyKind::traffic_inaccuracy;
  return std::nullopt;
}

}  // namespace rcf

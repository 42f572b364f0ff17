#pragma once

#include <array>
#include <string_view>

namespace coevo::classify {

// Declaration order is the vote tie-break order.
enum class MaintenanceActivity { Corrective, Perfective, Adaptive };

inline constexpr std::array<MaintenanceActivity, 3> kActivities{
    MaintenanceActivity::Corrective, MaintenanceActivity::Perfective, MaintenanceActivity::Adaptive};

std::string_view to_string(MaintenanceActivity activity);
// Accepts CORRECTIVE / PERFECTIVE / ADAPTIVE in any letter case.
MaintenanceActivity activity_from_string(std::string_view name);

inline std::size_t index_of(MaintenanceActivity a) { return static_cast<std::size_t>(a); }

}  // namespace coevo::classify

#include "coevo/classify/activity.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "coevo/error.hpp"

namespace coevo::classify {

std::string_view to_string(MaintenanceActivity activity) {
    switch (activity) {
        case MaintenanceActivity::Corrective: return "CORRECTIVE";
        case MaintenanceActivity::Perfective: return "PERFECTIVE";
        case MaintenanceActivity::Adaptive: return "ADAPTIVE";
    }
    return "CORRECTIVE";
}

MaintenanceActivity activity_from_string(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (auto a : kActivities) {
        if (to_string(a) == upper) return a;
    }
    throw InvalidInput("unknown maintenance activity '" + std::string(name) + "'");
}

}  // namespace coevo::classify

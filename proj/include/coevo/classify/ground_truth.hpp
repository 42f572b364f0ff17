#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "coevo/classify/activity.hpp"

namespace coevo::classify {

struct GroundTruthEntry {
    std::string commit_id;
    MaintenanceActivity label = MaintenanceActivity::Corrective;

    bool operator==(const GroundTruthEntry&) const = default;
};

// Reads `commit_id,label` rows; an optional header row starting with
// "commit_id" is skipped, as are blank lines. Throws InvalidInput on malformed
// rows, unknown labels or duplicate commit ids.
std::vector<GroundTruthEntry> read_ground_truth(const std::filesystem::path& path);

}  // namespace coevo::classify

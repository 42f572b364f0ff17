#include "coevo/classify/ground_truth.hpp"

#include <fstream>
#include <set>

#include "coevo/error.hpp"

namespace coevo::classify {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<GroundTruthEntry> read_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read ground truth " + path.string());
    std::vector<GroundTruthEntry> out;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": expected commit_id,label");
        }
        std::string id = trim(line.substr(0, comma));
        std::string label = trim(line.substr(comma + 1));
        if (out.empty() && seen.empty() && id == "commit_id") {
            seen.insert("");
            continue;
        }
        if (id.empty()) throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": empty commit id");
        GroundTruthEntry entry;
        entry.commit_id = id;
        try {
            entry.label = activity_from_string(label);
        } catch (const InvalidInput& e) {
            throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(id).second) {
            throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": duplicate commit " + id);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace coevo::classify

#include "coevo/pipeline/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "coevo/error.hpp"
#include "coevo/stats/robust.hpp"

namespace coevo::pipeline {

namespace {

using classify::MaintenanceActivity;

long parse_long(const std::string& s, const char* what) {
    long v = 0;
    auto [ptr, err] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (err != std::errc{} || ptr != s.data() + s.size()) {
        throw InvalidInput(std::string("csv: bad integer in ") + what + ": '" + s + "'");
    }
    return v;
}

int parse_int(const std::string& s, const char* what) { return static_cast<int>(parse_long(s, what)); }

bool parse_bool(const std::string& s, const char* what) {
    if (s == "1" || s == "TRUE" || s == "true") return true;
    if (s == "0" || s == "FALSE" || s == "false") return false;
    throw InvalidInput(std::string("csv: bad flag in ") + what + ": '" + s + "'");
}

const std::array<const char*, 6> kProfileColumns{"method_added",  "method_removed", "method_updated",
                                                 "class_added",   "class_removed",  "class_updated"};

std::array<int, 6> counters(const testdetect::TestMaintenanceProfile& p) {
    return {p.method_added, p.method_removed, p.method_updated, p.class_added, p.class_removed, p.class_updated};
}

testdetect::TestMaintenanceProfile profile_from(const CsvTable& t, const std::vector<std::string>& row) {
    testdetect::TestMaintenanceProfile p;
    std::array<int*, 6> fields{&p.method_added, &p.method_removed, &p.method_updated,
                               &p.class_added,  &p.class_removed,  &p.class_updated};
    for (std::size_t k = 0; k < 6; ++k) *fields[k] = parse_int(row[t.column(kProfileColumns[k])], kProfileColumns[k]);
    p.total = parse_int(row[t.column("total")], "total");
    return p;
}

void apply_fence(std::vector<const CommitObservation*>& group, const std::string& scope, std::set<const void*>& drop,
                 std::vector<FenceSummary>& fences) {
    std::vector<double> positive;
    std::vector<const CommitObservation*> owners;
    for (const auto* o : group) {
        if (o->profile.total > 0) {
            positive.push_back(o->profile.total);
            owners.push_back(o);
        }
    }
    FenceSummary summary;
    summary.scope = scope;
    summary.positive = positive.size();
    if (!positive.empty()) {
        auto fence = stats::adjusted_boxplot_filter(positive);
        summary.medcouple = fence.medcouple;
        summary.q1 = fence.q1;
        summary.q3 = fence.q3;
        summary.upper_fence = fence.upper_fence;
        summary.dropped = fence.dropped;
        for (std::size_t i = 0; i < owners.size(); ++i) {
            if (!fence.keep[i]) drop.insert(owners[i]);
        }
    }
    fences.push_back(summary);
}

}  // namespace

bool is_test_only(const CommitAnalysis& analysis) {
    if (analysis.files.empty()) return false;
    return std::all_of(analysis.files.begin(), analysis.files.end(), [](const FileOutcome& f) { return f.test_file; });
}

ChangeCounts count_change_types(std::span<const distill::SourceChange> changes) {
    ChangeCounts counts{};
    for (const auto& c : changes) {
        auto k = static_cast<std::size_t>(c.change_type);
        if (k < counts.size()) ++counts[k];
    }
    return counts;
}

CommitObservation observe(const CommitInput& input) {
    CommitObservation o;
    o.project = input.project;
    o.commit_id = input.commit_id;
    o.author_id = input.author_id;
    o.activity = input.activity;
    o.profile = testdetect::derive_profile(input.analysis.changes);
    o.change_type_counts = count_change_types(production_changes(input.analysis));
    o.is_test_only = is_test_only(input.analysis);
    return o;
}

CommitDataset build_commit_dataset(std::span<const CommitInput> commits, const DatasetOptions& options) {
    CommitDataset out;
    out.input_commits = commits.size();
    std::vector<CommitObservation> kept;
    for (const auto& c : commits) {
        auto o = observe(c);
        if (o.is_test_only) {
            ++out.test_only_excluded;
            continue;
        }
        kept.push_back(std::move(o));
    }

    std::set<const void*> drop;
    if (options.per_project_fence) {
        std::map<std::string, std::vector<const CommitObservation*>> by_project;
        for (const auto& o : kept) by_project[o.project].push_back(&o);
        for (auto& [project, group] : by_project) apply_fence(group, project, drop, out.fences);
    } else {
        std::vector<const CommitObservation*> all;
        for (const auto& o : kept) all.push_back(&o);
        apply_fence(all, "pooled", drop, out.fences);
    }
    for (auto& o : kept) {
        if (drop.count(&o)) {
            ++out.outlier_excluded;
        } else {
            out.observations.push_back(std::move(o));
        }
    }
    return out;
}

std::vector<ProjectObservation> build_project_dataset(std::span<const ProjectInput> projects) {
    std::vector<ProjectObservation> out;
    for (const auto& p : projects) {
        if (static_cast<std::int64_t>(p.activities.size()) != p.stats.java_commit_count) {
            throw InvalidInput("project " + p.project_id + ": " + std::to_string(p.activities.size()) +
                               " classified commits for " + std::to_string(p.stats.java_commit_count) +
                               " Java commits");
        }
        ProjectObservation o;
        o.project_id = p.project_id;
        o.stats = p.stats;
        for (auto a : p.activities) {
            switch (a) {
                case MaintenanceActivity::Corrective: ++o.corrective; break;
                case MaintenanceActivity::Perfective: ++o.perfective; break;
                case MaintenanceActivity::Adaptive: ++o.adaptive; break;
            }
        }
        o.test_methods = p.head.test_methods;
        o.test_classes = p.head.test_classes;
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<ProportionRow> proportions_by_activity(std::span<const CommitObservation> observations, GroupBy group_by) {
    std::map<std::pair<std::string, MaintenanceActivity>, std::pair<int, int>> tally;
    for (const auto& o : observations) {
        const std::string& group = group_by == GroupBy::Project ? o.project : o.author_id;
        auto& t = tally[{group, o.activity}];
        ++t.first;
        if (testdetect::has_test_maintenance(o.profile)) ++t.second;
    }
    std::vector<ProportionRow> out;
    for (const auto& [key, t] : tally) {
        out.push_back(ProportionRow{key.first, key.second, t.first, t.second,
                                    static_cast<double>(t.second) / static_cast<double>(t.first)});
    }
    return out;
}

CsvTable commits_table(std::span<const CommitObservation> observations) {
    CsvTable t;
    t.header = {"project", "commit_id", "author", "activity"};
    for (const auto* c : kProfileColumns) t.header.emplace_back(c);
    t.header.insert(t.header.end(), {"total", "has_test_maintenance", "is_test_only"});
    for (auto type : distill::modeled_change_types()) t.header.emplace_back(distill::to_string(type));
    for (const auto& o : observations) {
        std::vector<std::string> row{o.project, o.commit_id, o.author_id, std::string(classify::to_string(o.activity))};
        for (int v : counters(o.profile)) row.push_back(std::to_string(v));
        row.push_back(std::to_string(o.profile.total));
        row.push_back(testdetect::has_test_maintenance(o.profile) ? "1" : "0");
        row.push_back(o.is_test_only ? "1" : "0");
        for (int v : o.change_type_counts) row.push_back(std::to_string(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<CommitObservation> commits_from_table(const CsvTable& t) {
    std::vector<CommitObservation> out;
    for (const auto& row : t.rows) {
        CommitObservation o;
        o.project = row[t.column("project")];
        o.commit_id = row[t.column("commit_id")];
        o.author_id = row[t.column("author")];
        o.activity = classify::activity_from_string(row[t.column("activity")]);
        o.profile = profile_from(t, row);
        o.is_test_only = parse_bool(row[t.column("is_test_only")], "is_test_only");
        std::size_t k = 0;
        for (auto type : distill::modeled_change_types()) {
            auto name = std::string(distill::to_string(type));
            o.change_type_counts[k++] = parse_int(row[t.column(name)], name.c_str());
        }
        out.push_back(std::move(o));
    }
    return out;
}

CsvTable projects_table(std::span<const ProjectObservation> projects) {
    CsvTable t;
    t.header = {"project",    "loc",        "developers", "age_days",     "java_commit_count",
                "corrective", "perfective", "adaptive",   "test_methods", "test_classes"};
    for (const auto& p : projects) {
        t.rows.push_back({p.project_id, std::to_string(p.stats.loc), std::to_string(p.stats.developers),
                          std::to_string(p.stats.age_days), std::to_string(p.stats.java_commit_count),
                          std::to_string(p.corrective), std::to_string(p.perfective), std::to_string(p.adaptive),
                          std::to_string(p.test_methods), std::to_string(p.test_classes)});
    }
    return t;
}

std::vector<ProjectObservation> projects_from_table(const CsvTable& t) {
    std::vector<ProjectObservation> out;
    for (const auto& row : t.rows) {
        ProjectObservation p;
        p.project_id = row[t.column("project")];
        p.stats.loc = parse_long(row[t.column("loc")], "loc");
        p.stats.developers = parse_long(row[t.column("developers")], "developers");
        p.stats.age_days = parse_long(row[t.column("age_days")], "age_days");
        p.stats.java_commit_count = parse_long(row[t.column("java_commit_count")], "java_commit_count");
        p.corrective = parse_int(row[t.column("corrective")], "corrective");
        p.perfective = parse_int(row[t.column("perfective")], "perfective");
        p.adaptive = parse_int(row[t.column("adaptive")], "adaptive");
        p.test_methods = parse_int(row[t.column("test_methods")], "test_methods");
        p.test_classes = parse_int(row[t.column("test_classes")], "test_classes");
        out.push_back(std::move(p));
    }
    return out;
}

CsvTable profiles_table(std::span<const ProfileRow> rows) {
    CsvTable t;
    t.header = {"commit_id"};
    for (const auto* c : kProfileColumns) t.header.emplace_back(c);
    t.header.insert(t.header.end(), {"total", "hasTestMaintenance"});
    for (const auto& r : rows) {
        std::vector<std::string> row{r.commit_id};
        for (int v : counters(r.profile)) row.push_back(std::to_string(v));
        row.push_back(std::to_string(r.profile.total));
        row.push_back(testdetect::has_test_maintenance(r.profile) ? "TRUE" : "FALSE");
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<ProfileRow> profiles_from_table(const CsvTable& t) {
    std::vector<ProfileRow> out;
    for (const auto& row : t.rows) out.push_back(ProfileRow{row[t.column("commit_id")], profile_from(t, row)});
    return out;
}

}  // namespace coevo::pipeline

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coevo/classify/ground_truth.hpp"
#include "coevo/error.hpp"
#include "coevo/pipeline/stages.hpp"
#include "coevo/report/models.hpp"

namespace fs = std::filesystem;
using namespace coevo;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Config {
    std::string repos;
    std::string ground_truth;
    std::uint64_t seed = 42;
    std::optional<std::size_t> holdout;
    std::string out = "coevo-out";
    std::string stage = "all";
    std::string group_by = "project";
    std::string model = "all";
    bool per_project_fence = false;
    int trees = 101;
    stats::FitOptions fit;
};

class UsageError : public Error {
public:
    using Error::Error;
};

bool runs(const Config& c, const std::string& stage) { return c.stage == "all" || c.stage == stage; }

std::vector<pipeline::Project> projects_of(const Config& c) {
    if (c.repos.empty()) throw UsageError("--repos is required for stage " + c.stage);
    return pipeline::name_projects(pipeline::read_repo_list(c.repos));
}

std::vector<std::string> ids_of(const std::vector<pipeline::Project>& projects) {
    std::vector<std::string> ids;
    for (const auto& p : projects) ids.push_back(p.id);
    return ids;
}

void run_models(const Config& c, const pipeline::Workspace& ws, bool strict) {
    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            if (strict) throw pipeline::StageError(name, e.what());
            std::cerr << "coevo: warning: " << name << " skipped: " << e.what() << '\n';
        }
    };
    auto models_dir = ws.root / "models";
    if (c.stage == "all" || c.stage == "proportions") {
        guarded("proportions", [&] {
            auto obs = pipeline::commits_from_table(pipeline::read_csv(ws.commits_csv()));
            auto group = c.group_by == "developer" ? pipeline::GroupBy::Developer : pipeline::GroupBy::Project;
            report::run_proportions(obs, group, ws.root / ("proportions-" + c.group_by));
        });
    }
    if (c.stage != "all" && c.stage != "model") return;
    if (c.model == "all" || c.model == "test-counts") {
        guarded("test-counts", [&] {
            auto projects = pipeline::projects_from_table(pipeline::read_csv(ws.projects_csv()));
            report::TestCountsOptions opts;
            opts.seed = c.seed;
            opts.holdout = c.holdout;
            opts.fit = c.fit;
            report::run_test_counts(projects, opts, models_dir / "test-counts");
        });
    }
    for (auto [name, kind] : {std::pair{"has-maintenance", report::LogisticKind::HasMaintenance},
                              std::pair{"activity-odds", report::LogisticKind::ActivityOdds}}) {
        if (c.model != "all" && c.model != name) continue;
        guarded(name, [&] {
            auto obs = pipeline::commits_from_table(pipeline::read_csv(ws.commits_csv()));
            report::run_logistic_models(obs, kind, c.fit, models_dir);
        });
    }
}

int run(const Config& c) {
    pipeline::Workspace ws{c.out};
    std::vector<classify::GroundTruthEntry> truth;
    std::vector<pipeline::Project> projects;
    bool pipeline_stage = c.stage != "model" && c.stage != "proportions";
    if (pipeline_stage) projects = projects_of(c);
    if (runs(c, "classify")) {
        if (c.ground_truth.empty()) throw UsageError("classify needs --ground-truth");
        if (!fs::exists(c.ground_truth)) throw UsageError("ground truth not found: " + c.ground_truth);
        try {
            truth = classify::read_ground_truth(c.ground_truth);
        } catch (const InvalidInput& e) {
            throw UsageError(e.what());
        }
    }
    fs::create_directories(ws.root);
    auto ids = ids_of(projects);

    if (runs(c, "mine")) {
        for (const auto& p : projects) {
            try {
                pipeline::run_mine(ws, p);
            } catch (const pipeline::StageError&) {
                throw;
            } catch (const Error& e) {
                throw pipeline::StageError("mine", e.what());
            }
        }
    }
    if (runs(c, "distill")) {
        for (const auto& id : ids) pipeline::run_distill(ws, id);
    }
    if (runs(c, "detect")) {
        for (const auto& id : ids) pipeline::run_detect(ws, id);
    }
    if (runs(c, "classify")) {
        classify::ForestOptions options;
        options.seed = c.seed;
        options.trees = c.trees;
        pipeline::run_classify(ws, ids, truth, options);
    }
    if (runs(c, "dataset")) {
        pipeline::DatasetOptions options;
        options.per_project_fence = c.per_project_fence;
        auto d = pipeline::run_dataset(ws, ids, options);
        std::cerr << "coevo: dataset: " << d.input_commits << " commits, " << d.test_only_excluded
                  << " test-only excluded, " << d.outlier_excluded << " outliers excluded, "
                  << d.observations.size() << " retained\n";
    }
    if (c.stage == "all" || c.stage == "model" || c.stage == "proportions") {
        if (!fs::exists(ws.commits_csv()) || !fs::exists(ws.projects_csv())) {
            throw pipeline::StageError(c.stage == "all" ? "model" : c.stage,
                                       "missing dataset CSVs under " + ws.dataset_dir().string() +
                                           " (run the dataset stage first)");
        }
        run_models(c, ws, c.stage != "all");
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    Config c;
    CLI::App app{"Mine Java histories, distill semantic changes and model test co-evolution"};
    app.add_option("--repos", c.repos, "File listing one repository path per line");
    app.add_option("--ground-truth", c.ground_truth, "CSV of commit_id,label used to train the classifier");
    app.add_option("--seed", c.seed, "Seed for the classifier and the train/validation split")->capture_default_str();
    app.add_option("--holdout", c.holdout, "Projects held out for validation (default: about 13%)");
    app.add_option("--out", c.out, "Output directory")->capture_default_str();
    app.add_option("--stage", c.stage, "Stage to run")
        ->check(CLI::IsMember({"all", "mine", "distill", "detect", "classify", "dataset", "model", "proportions"}))
        ->capture_default_str();
    app.add_option("--group-by", c.group_by, "Grouping for proportions")
        ->check(CLI::IsMember({"project", "developer"}))
        ->capture_default_str();
    app.add_option("--model", c.model, "Model kind for the model stage")
        ->check(CLI::IsMember({"all", "test-counts", "has-maintenance", "activity-odds"}))
        ->capture_default_str();
    app.add_flag("--per-project-fence", c.per_project_fence, "Apply the outlier fence per project instead of pooled");
    app.add_option("--trees", c.trees, "Classifier tree count")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tolerance", c.fit.tolerance, "Relative deviance convergence tolerance")->capture_default_str();
    app.add_option("--max-iterations", c.fit.max_iterations, "IRLS iteration limit")->capture_default_str();
    app.add_option("--max-outer-iterations", c.fit.max_outer_iterations, "Theta/beta alternation limit")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        return run(c);
    } catch (const UsageError& e) {
        std::cerr << "coevo: " << e.what() << '\n';
        return kUsage;
    } catch (const pipeline::StageError& e) {
        std::cerr << "coevo: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "coevo: " << c.stage << ": " << e.what() << '\n';
        return kFailure;
    }
}

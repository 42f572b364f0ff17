#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coevo/pipeline/csv.hpp"
#include "coevo/pipeline/dataset.hpp"
#include "coevo/report/svg.hpp"
#include "coevo/stats/glm.hpp"
#include "coevo/stats/tests.hpp"

namespace coevo::report {

// log(corrective), log(perfective), log(adaptive), log(developers), log(LOC), log(age)
const std::vector<std::string>& project_predictors();
// log(corrective), log(perfective), log(LOC), log(age)
const std::vector<std::string>& predictive_predictors();

// Every project predictor, log(x + 1) transformed.
stats::DesignMatrix project_design(std::span<const pipeline::ProjectObservation> projects);
// "test_methods" or "test_classes".
Eigen::VectorXd project_outcome(std::span<const pipeline::ProjectObservation> projects, const std::string& outcome);

// "***" below 0.01, "**" below 0.05, "*" below 0.1.
std::string significance_stars(double p);

// term, estimate, std_error, z, p
pipeline::CsvTable fit_summary_table(const stats::ModelFit& fit);

// Terms as rows, models as columns: estimate with stars over (std error),
// then observations, theta, deviances and convergence.
std::string format_coefficient_table(const std::vector<std::pair<std::string, stats::ModelFit>>& models,
                                     const std::vector<std::size_t>& observations);

pipeline::CsvTable anova_csv(const stats::AnovaTable& table);
std::string format_anova(const std::string& title, const stats::AnovaTable& table);

// Top `per_side` odds ratios above 1 and below 1, among those with
// |OR - 1| > min_strength, strongest first on each side.
std::vector<stats::OddsRatio> select_odds_ratios(const std::vector<stats::OddsRatio>& ratios,
                                                 std::size_t per_side = 5, double min_strength = 0.15);

struct TestCountsOptions {
    std::uint64_t seed = 42;
    std::optional<std::size_t> holdout;  // default: round(n * 8 / 61)
    stats::FitOptions fit;
};

struct OutcomeReport {
    std::string outcome;
    stats::ModelFit full;
    stats::ModelFit predictive;
    stats::AnovaTable anova;
    std::vector<double> actual;
    std::vector<double> predicted;
    std::optional<double> goodness_of_fit_p;
};

struct TestCountsReport {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<OutcomeReport> outcomes;
};

// Negative-binomial models of the head test counts. Throws InvalidInput when
// there are not more projects than model parameters.
TestCountsReport run_test_counts(std::span<const pipeline::ProjectObservation> projects,
                                 const TestCountsOptions& options, const std::filesystem::path& out_dir);

enum class LogisticKind { HasMaintenance, ActivityOdds };

struct LogisticOutcome {
    std::string outcome;
    std::optional<stats::ModelFit> fit;
    std::vector<std::string> dropped_predictors;
    std::vector<stats::OddsRatio> odds_ratios;
    std::string diagnostic;
};

// HasTestMaintenance, or the six binarized counters, regressed on the
// production change-type counts. Outcomes that cannot be fitted carry a
// diagnostic; throws InvalidInput when none can be fitted.
std::vector<LogisticOutcome> run_logistic_models(std::span<const pipeline::CommitObservation> observations,
                                                 LogisticKind kind, const stats::FitOptions& fit,
                                                 const std::filesystem::path& out_dir);

struct RankComparison {
    std::string other;  // activity compared against corrective
    std::size_t corrective_groups = 0;
    std::size_t other_groups = 0;
    std::optional<stats::RankSumResult> result;  // absent when a side is empty
};

struct ProportionsReport {
    std::vector<pipeline::ProportionRow> rows;
    BoxPlot box;
    std::vector<RankComparison> comparisons;
};

// Per-group test-maintenance fractions, their box plot per activity and
// rank-sum tests of corrective against each other activity.
ProportionsReport run_proportions(std::span<const pipeline::CommitObservation> observations,
                                  pipeline::GroupBy group_by, const std::filesystem::path& out_dir);

}  // namespace coevo::report

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <random>

#include "coevo/error.hpp"
#include "coevo/report/models.hpp"
#include "coevo/report/svg.hpp"
#include "temp_dir.hpp"

using namespace coevo;
using namespace coevo::report;
namespace ct = coevo::testing;
using classify::MaintenanceActivity;
using distill::ChangeType;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

stats::OddsRatio ratio(std::string name, double est) { return {std::move(name), est, est * 0.8, est * 1.2}; }

pipeline::CommitObservation commit(std::string project, MaintenanceActivity a, bool maintained) {
    pipeline::CommitObservation o;
    o.project = std::move(project);
    o.author_id = o.project + "-dev";
    o.activity = a;
    if (maintained) {
        o.profile.method_updated = 1;
        o.profile.total = 1;
    }
    return o;
}

}  // namespace

TEST_CASE("significance stars", "[report]") {
    CHECK(significance_stars(0.001) == "***");
    CHECK(significance_stars(0.0099) == "***");
    CHECK(significance_stars(0.01) == "**");
    CHECK(significance_stars(0.049) == "**");
    CHECK(significance_stars(0.05) == "*");
    CHECK(significance_stars(0.099) == "*");
    CHECK(significance_stars(0.1).empty());
    CHECK(significance_stars(0.7).empty());
}

TEST_CASE("odds ratio selection", "[report]") {
    std::vector<stats::OddsRatio> in{ratio("weak_up", 1.1),  ratio("weak_down", 0.9), ratio("edge", 0.86),
                                     ratio("u1", 1.2),       ratio("u2", 3.0),        ratio("u3", 1.5),
                                     ratio("u4", 2.0),       ratio("u5", 1.3),        ratio("u6", 2.5),
                                     ratio("u7", 1.16),      ratio("d1", 0.5),        ratio("d2", 0.2),
                                     ratio("d3", 0.8)};
    auto out = select_odds_ratios(in);
    std::vector<std::string> names;
    for (const auto& r : out) names.push_back(r.name);
    CHECK(names == std::vector<std::string>{"u2", "u6", "u4", "u3", "u5", "d2", "d1", "d3"});

    auto one = select_odds_ratios(in, 1);
    REQUIRE(one.size() == 2);
    CHECK(one[0].name == "u2");
    CHECK(one[1].name == "d2");
}

TEST_CASE("charts are written with their data", "[report]") {
    ct::TempDir tmp;
    BarChart bars;
    bars.title = "Odds";
    bars.value_label = "odds ratio";
    bars.bars = {{"A", 2.0, 1.5, 2.5}, {"B", 0.5, 0.3, 0.8}};
    emit_chart(tmp.path(), "bars", bars);
    auto svg = slurp(tmp.path() / "bars.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("Odds") != std::string::npos);
    auto data = pipeline::read_csv(tmp.path() / "bars.csv");
    REQUIRE(data.rows.size() == 2);
    CHECK(data.rows[0][data.column("label")] == "A");

    LineChart line;
    line.title = "Validation";
    line.x = {1, 2, 3};
    line.series = {{"actual", {1, 4, 9}, "#000000"}, {"predicted", {1, 3, 8}, "#cc0000"}};
    emit_chart(tmp.path(), "line", line);
    CHECK(std::filesystem::exists(tmp.path() / "line.svg"));
    CHECK(pipeline::read_csv(tmp.path() / "line.csv").rows.size() == 3);

    BoxPlot box;
    box.title = "Box";
    box.groups = {{"CORRECTIVE", 4, {0, 0.1, 0.2, 0.3, 0.4}}};
    emit_chart(tmp.path(), "box", box);
    CHECK(pipeline::read_csv(tmp.path() / "box.csv").rows.size() == 1);
}

TEST_CASE("logistic models report constant outcomes", "[report]") {
    ct::TempDir tmp;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<pipeline::CommitObservation> obs;
    const auto ins = static_cast<std::size_t>(ChangeType::StatementInsert);
    const auto upd = static_cast<std::size_t>(ChangeType::StatementUpdate);
    for (int i = 0; i < 160; ++i) {
        pipeline::CommitObservation o;
        o.project = "p";
        o.commit_id = "c" + std::to_string(i);
        o.change_type_counts[ins] = i % 4;
        o.change_type_counts[upd] = (i * 7) % 5;
        double eta = -1.0 + 0.8 * o.change_type_counts[ins] - 0.3 * o.change_type_counts[upd];
        if (u(rng) < 1.0 / (1.0 + std::exp(-eta))) {
            o.profile.method_updated = 1;
            o.profile.total = 1;
        }
        obs.push_back(o);
    }
    auto results = run_logistic_models(obs, LogisticKind::ActivityOdds, {}, tmp.path());
    REQUIRE(results.size() == 6);
    for (const auto& r : results) {
        INFO(r.outcome);
        if (r.outcome == "HasTestMethodUpdated") {
            REQUIRE(r.fit.has_value());
            CHECK(r.fit->converged);
            CHECK(r.diagnostic.empty());
            CHECK(r.odds_ratios.size() == 2);
            CHECK(r.fit->coefficient("STATEMENT_INSERT") > 0);
            CHECK(r.dropped_predictors.size() == 17);
        } else {
            CHECK_FALSE(r.fit.has_value());
            CHECK(r.diagnostic.find("constant") != std::string::npos);
        }
    }
    auto dir = tmp.path() / "activity-odds";
    CHECK(std::filesystem::exists(dir / "odds_ratio_HasTestMethodUpdated.svg"));
    CHECK(std::filesystem::exists(dir / "odds_ratio_HasTestMethodUpdated.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "odds_ratio_HasTestClassAdded.svg"));
    CHECK(slurp(dir / "diagnostics.txt").find("HasTestClassAdded") != std::string::npos);

    for (auto& o : obs) o.profile = {};
    CHECK_THROWS_AS(run_logistic_models(obs, LogisticKind::HasMaintenance, {}, tmp.path()), InvalidInput);
}

TEST_CASE("test-count models need more projects than parameters", "[report]") {
    ct::TempDir tmp;
    std::vector<pipeline::ProjectObservation> projects(7);
    for (std::size_t i = 0; i < projects.size(); ++i) {
        projects[i].project_id = "p" + std::to_string(i);
        projects[i].stats = {1000 + 100 * static_cast<std::int64_t>(i), 3, 200, 50};
        projects[i].corrective = 5;
        projects[i].perfective = 10;
        projects[i].adaptive = 6;
        projects[i].test_methods = 10;
        projects[i].test_classes = 2;
    }
    CHECK_THROWS_AS(run_test_counts(projects, {}, tmp.path()), InvalidInput);
}

TEST_CASE("proportions report with corrective lowest", "[report]") {
    ct::TempDir tmp;
    std::vector<pipeline::CommitObservation> obs;
    for (int k = 0; k < 10; ++k) {
        std::string p = "proj" + std::to_string(k);
        for (int i = 0; i < 10; ++i) obs.push_back(commit(p, MaintenanceActivity::Corrective, i < k % 3));
        for (int i = 0; i < 10; ++i) obs.push_back(commit(p, MaintenanceActivity::Perfective, i < 6 + k % 3));
        for (int i = 0; i < 5; ++i) obs.push_back(commit(p, MaintenanceActivity::Adaptive, i < 2 + k % 2));
    }
    auto rep = run_proportions(obs, pipeline::GroupBy::Project, tmp.path());
    CHECK(rep.rows.size() == 30);
    REQUIRE(rep.box.groups.size() == 3);
    CHECK(rep.box.groups[0].label == "CORRECTIVE");
    CHECK(rep.box.groups[0].summary.max == Catch::Approx(0.2));
    REQUIRE(rep.comparisons.size() == 2);
    for (const auto& c : rep.comparisons) {
        INFO(c.other);
        REQUIRE(c.result.has_value());
        CHECK(c.corrective_groups == 10);
        CHECK(c.result->p_value < 0.05);
        CHECK(c.result->u == 0.0);
    }
    CHECK(std::filesystem::exists(tmp.path() / "boxplot.svg"));
    CHECK(std::filesystem::exists(tmp.path() / "boxplot.csv"));
    auto wmw = pipeline::read_csv(tmp.path() / "wmw.csv");
    CHECK(wmw.rows.size() == 2);

    // only corrective commits: comparisons have no result
    std::vector<pipeline::CommitObservation> only{commit("a", MaintenanceActivity::Corrective, true)};
    auto lone = run_proportions(only, pipeline::GroupBy::Developer, tmp.path() / "lone");
    for (const auto& c : lone.comparisons) CHECK_FALSE(c.result.has_value());
    CHECK(pipeline::read_csv(tmp.path() / "lone" / "wmw.csv").rows[0].back() == "NA");
}

#include "coevo/report/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "coevo/error.hpp"
#include "coevo/stats/robust.hpp"

namespace coevo::report {

namespace {

using pipeline::CsvTable;
using pipeline::format_number;

std::string fixed(double v, int digits = 3) {
    if (!std::isfinite(v)) return format_number(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

double project_value(const pipeline::ProjectObservation& p, const std::string& name) {
    if (name == "log(corrective)") return stats::log_transform(p.corrective);
    if (name == "log(perfective)") return stats::log_transform(p.perfective);
    if (name == "log(adaptive)") return stats::log_transform(p.adaptive);
    if (name == "log(developers)") return stats::log_transform(static_cast<double>(p.stats.developers));
    if (name == "log(LOC)") return stats::log_transform(static_cast<double>(p.stats.loc));
    if (name == "log(age)") return stats::log_transform(static_cast<double>(p.stats.age_days));
    throw InvalidInput("unknown project predictor " + name);
}

const std::array<std::pair<const char*, int testdetect::TestMaintenanceProfile::*>, 6> kActivityOutcomes{{
    {"HasTestMethodAdded", &testdetect::TestMaintenanceProfile::method_added},
    {"HasTestMethodRemoved", &testdetect::TestMaintenanceProfile::method_removed},
    {"HasTestMethodUpdated", &testdetect::TestMaintenanceProfile::method_updated},
    {"HasTestClassAdded", &testdetect::TestMaintenanceProfile::class_added},
    {"HasTestClassRemoved", &testdetect::TestMaintenanceProfile::class_removed},
    {"HasTestClassUpdated", &testdetect::TestMaintenanceProfile::class_updated},
}};

std::string kind_dir(LogisticKind kind) {
    return kind == LogisticKind::HasMaintenance ? "has-maintenance" : "activity-odds";
}

}  // namespace

const std::vector<std::string>& project_predictors() {
    static const std::vector<std::string> names{"log(corrective)", "log(perfective)", "log(adaptive)",
                                                "log(developers)", "log(LOC)",        "log(age)"};
    return names;
}

const std::vector<std::string>& predictive_predictors() {
    static const std::vector<std::string> names{"log(corrective)", "log(perfective)", "log(LOC)", "log(age)"};
    return names;
}

stats::DesignMatrix project_design(std::span<const pipeline::ProjectObservation> projects) {
    const auto& names = project_predictors();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(projects.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < projects.size(); ++i) {
        for (std::size_t j = 0; j < names.size(); ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = project_value(projects[i], names[j]);
        }
    }
    return stats::DesignMatrix(names, std::move(x));
}

Eigen::VectorXd project_outcome(std::span<const pipeline::ProjectObservation> projects, const std::string& outcome) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(projects.size()));
    for (std::size_t i = 0; i < projects.size(); ++i) {
        if (outcome == "test_methods") {
            y[static_cast<Eigen::Index>(i)] = projects[i].test_methods;
        } else if (outcome == "test_classes") {
            y[static_cast<Eigen::Index>(i)] = projects[i].test_classes;
        } else {
            throw InvalidInput("unknown project outcome " + outcome);
        }
    }
    return y;
}

std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

CsvTable fit_summary_table(const stats::ModelFit& fit) {
    CsvTable t{{"term", "estimate", "std_error", "z", "p"}, {}};
    for (const auto& term : fit.terms) {
        t.rows.push_back({term.name, format_number(term.estimate), format_number(term.std_error),
                          format_number(term.z_value), format_number(term.p_value)});
    }
    return t;
}

std::string format_coefficient_table(const std::vector<std::pair<std::string, stats::ModelFit>>& models,
                                     const std::vector<std::size_t>& observations) {
    std::vector<std::string> terms;
    for (const auto& [name, fit] : models) {
        for (const auto& t : fit.terms) {
            if (t.name != stats::kInterceptName && std::find(terms.begin(), terms.end(), t.name) == terms.end()) {
                terms.push_back(t.name);
            }
        }
    }
    terms.emplace_back(stats::kInterceptName);
    const std::size_t label_w = 22;
    const std::size_t col_w = 18;
    std::ostringstream out;
    std::string rule(label_w + col_w * models.size(), '-');
    out << rule << '\n' << pad_right("", label_w);
    for (const auto& m : models) out << pad_left(m.first, col_w);
    out << '\n' << rule << '\n';
    for (const auto& name : terms) {
        std::string label = name == stats::kInterceptName ? "Constant" : name;
        out << pad_right(label, label_w);
        std::string se_line = pad_right("", label_w);
        for (const auto& [model_name, fit] : models) {
            auto it = std::find_if(fit.terms.begin(), fit.terms.end(), [&](const auto& t) { return t.name == name; });
            if (it == fit.terms.end()) {
                out << pad_left("", col_w);
                se_line += pad_left("", col_w);
            } else {
                out << pad_left(fixed(it->estimate) + pad_right(significance_stars(it->p_value), 3), col_w);
                se_line += pad_left("(" + fixed(it->std_error) + ")   ", col_w);
            }
        }
        out << '\n' << se_line << "\n\n";
    }
    out << rule << '\n';
    auto footer = [&](const std::string& label, auto value) {
        out << pad_right(label, label_w);
        for (std::size_t k = 0; k < models.size(); ++k) out << pad_left(value(k), col_w);
        out << '\n';
    };
    footer("Observations", [&](std::size_t k) { return std::to_string(k < observations.size() ? observations[k] : 0); });
    footer("theta", [&](std::size_t k) {
        const auto& f = models[k].second;
        return f.family == stats::Family::NegativeBinomial ? fixed(f.theta) + "   " : std::string("-   ");
    });
    footer("Residual deviance", [&](std::size_t k) { return fixed(models[k].second.residual_deviance) + "   "; });
    footer("Null deviance", [&](std::size_t k) { return fixed(models[k].second.null_deviance) + "   "; });
    footer("Converged", [&](std::size_t k) { return std::string(models[k].second.converged ? "yes" : "no") + "   "; });
    out << rule << '\n' << "Note: *p<0.1; **p<0.05; ***p<0.01\n";
    for (const auto& [name, fit] : models) {
        if (!fit.diagnostic.empty()) out << name << ": " << fit.diagnostic << '\n';
    }
    return out.str();
}

CsvTable anova_csv(const stats::AnovaTable& table) {
    CsvTable t{{"term", "df", "deviance", "residual_df", "residual_deviance", "p"}, {}};
    t.rows.push_back({"NULL", "", "", std::to_string(table.null_df), format_number(table.null_deviance), ""});
    for (const auto& r : table.rows) {
        t.rows.push_back({r.term, std::to_string(r.df), format_number(r.deviance_reduction),
                          std::to_string(r.residual_df), format_number(r.residual_deviance),
                          format_number(r.p_value)});
    }
    return t;
}

std::string format_anova(const std::string& title, const stats::AnovaTable& table) {
    std::ostringstream out;
    out << title << '\n';
    out << pad_right("", 18) << pad_left("Df", 5) << pad_left("Deviance", 11) << pad_left("Resid. Df", 11)
        << pad_left("Resid. Dev", 12) << pad_left("Pr(>Chi)", 10) << '\n';
    out << pad_right("NULL", 18) << pad_left("", 5) << pad_left("", 11) << pad_left(std::to_string(table.null_df), 11)
        << pad_left(fixed(table.null_deviance, 2), 12) << '\n';
    for (const auto& r : table.rows) {
        out << pad_right(r.term, 18) << pad_left(std::to_string(r.df), 5) << pad_left(fixed(r.deviance_reduction, 2), 11)
            << pad_left(std::to_string(r.residual_df), 11) << pad_left(fixed(r.residual_deviance, 2), 12)
            << pad_left(fixed(r.p_value, 4), 10) << '\n';
    }
    if (table.theta) out << "theta held at " << fixed(*table.theta) << '\n';
    return out.str();
}

std::vector<stats::OddsRatio> select_odds_ratios(const std::vector<stats::OddsRatio>& ratios, std::size_t per_side,
                                                 double min_strength) {
    std::vector<stats::OddsRatio> positive;
    std::vector<stats::OddsRatio> negative;
    for (const auto& r : ratios) {
        if (!(std::abs(r.estimate - 1.0) > min_strength)) continue;
        (r.estimate > 1.0 ? positive : negative).push_back(r);
    }
    std::stable_sort(positive.begin(), positive.end(),
                     [](const auto& a, const auto& b) { return a.estimate > b.estimate; });
    std::stable_sort(negative.begin(), negative.end(),
                     [](const auto& a, const auto& b) { return a.estimate < b.estimate; });
    if (positive.size() > per_side) positive.resize(per_side);
    if (negative.size() > per_side) negative.resize(per_side);
    positive.insert(positive.end(), negative.begin(), negative.end());
    return positive;
}

TestCountsReport run_test_counts(std::span<const pipeline::ProjectObservation> projects,
                                 const TestCountsOptions& options, const std::filesystem::path& out_dir) {
    const std::size_t n = projects.size();
    const std::size_t full_params = project_predictors().size() + 1;
    const std::size_t predictive_params = predictive_predictors().size() + 1;
    if (n <= full_params) {
        throw InvalidInput("test-counts: " + std::to_string(n) + " projects for " + std::to_string(full_params) +
                           " model parameters; more observations than predictors are required");
    }
    std::size_t holdout = options.holdout ? *options.holdout
                                          : static_cast<std::size_t>(std::lround(static_cast<double>(n) * 8.0 / 61.0));
    if (!options.holdout) holdout = std::min(holdout, n - predictive_params - 1);
    if (n - std::min(holdout, n) <= predictive_params) {
        throw InvalidInput("test-counts: holdout " + std::to_string(holdout) + " leaves too few training projects");
    }
    auto split = stats::split_train_validation(n, holdout, options.seed);

    TestCountsReport report;
    report.train = split.train;
    report.validation = split.validation;
    std::filesystem::create_directories(out_dir);

    auto design = project_design(projects);
    auto predictive_design = design.select(predictive_predictors());
    auto train_x = predictive_design.select_rows(split.train);
    auto valid_x = predictive_design.select_rows(split.validation);

    CsvTable split_csv{{"project", "set"}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        bool valid = std::binary_search(split.validation.begin(), split.validation.end(), i);
        split_csv.rows.push_back({projects[i].project_id, valid ? "validation" : "train"});
    }
    pipeline::write_csv(out_dir / "split.csv", split_csv);

    CsvTable summary{{"model", "term", "estimate", "std_error", "z", "p"}, {}};
    CsvTable gof{{"outcome", "statistic", "df", "p"}, {}};
    std::vector<std::pair<std::string, stats::ModelFit>> full_models;
    std::vector<std::pair<std::string, stats::ModelFit>> predictive_models;

    for (const std::string outcome : {"test_methods", "test_classes"}) {
        OutcomeReport r;
        r.outcome = outcome;
        Eigen::VectorXd y = project_outcome(projects, outcome);
        r.full = stats::fit_negbin(design, y, options.fit);

        Eigen::VectorXd y_train(static_cast<Eigen::Index>(split.train.size()));
        for (std::size_t k = 0; k < split.train.size(); ++k) {
            y_train[static_cast<Eigen::Index>(k)] = y[static_cast<Eigen::Index>(split.train[k])];
        }
        r.predictive = stats::fit_negbin(train_x, y_train, options.fit);
        r.anova = stats::anova_sequential(train_x, y_train, stats::Family::NegativeBinomial, predictive_predictors(),
                                          options.fit);

        for (const auto& [label, fit] : {std::pair<std::string, const stats::ModelFit*>{outcome + " full", &r.full},
                                         {outcome + " predictive", &r.predictive}}) {
            for (const auto& row : fit_summary_table(*fit).rows) {
                std::vector<std::string> out{label};
                out.insert(out.end(), row.begin(), row.end());
                summary.rows.push_back(std::move(out));
            }
        }
        pipeline::write_csv(out_dir / ("anova_" + outcome + ".csv"), anova_csv(r.anova));
        write_text_file(out_dir / ("anova_" + outcome + ".txt"), format_anova("ANOVA for " + outcome, r.anova));

        if (!split.validation.empty()) {
            Eigen::VectorXd pred = r.predictive.predict(valid_x);
            LineChart chart;
            chart.title = outcome + ": predicted vs. actual";
            chart.x_label = "validation index";
            chart.y_label = outcome;
            Series actual{"actual", {}, "#d62728"};
            Series predicted{"predicted", {}, "#17becf"};
            for (std::size_t k = 0; k < split.validation.size(); ++k) {
                chart.x.push_back(static_cast<double>(k + 1));
                r.actual.push_back(y[static_cast<Eigen::Index>(split.validation[k])]);
                r.predicted.push_back(pred[static_cast<Eigen::Index>(k)]);
            }
            actual.values = r.actual;
            predicted.values = r.predicted;
            chart.series = {actual, predicted};
            emit_chart(out_dir, "validation_" + outcome, chart);
            if (r.predicted.size() >= 2) {
                auto g = stats::chisq_goodness_of_fit(r.predicted, r.actual);
                r.goodness_of_fit_p = g.p_value;
                gof.rows.push_back({outcome, format_number(g.statistic), format_number(g.df), format_number(g.p_value)});
            }
        }
        full_models.emplace_back(outcome, r.full);
        predictive_models.emplace_back(outcome, r.predictive);
        report.outcomes.push_back(std::move(r));
    }
    pipeline::write_csv(out_dir / "summary.csv", summary);
    pipeline::write_csv(out_dir / "goodness_of_fit.csv", gof);
    std::string text = "Negative binomial models, all projects\n" +
                       format_coefficient_table(full_models, {n, n}) + "\nPredictive models, training projects\n" +
                       format_coefficient_table(predictive_models, {split.train.size(), split.train.size()});
    write_text_file(out_dir / "table.txt", text);
    return report;
}

std::vector<LogisticOutcome> run_logistic_models(std::span<const pipeline::CommitObservation> observations,
                                                 LogisticKind kind, const stats::FitOptions& fit_options,
                                                 const std::filesystem::path& root) {
    auto out_dir = root / kind_dir(kind);
    std::filesystem::create_directories(out_dir);
    const auto& types = distill::modeled_change_types();
    const auto n = static_cast<Eigen::Index>(observations.size());

    std::vector<std::pair<std::string, std::vector<double>>> outcomes;
    if (kind == LogisticKind::HasMaintenance) {
        std::vector<double> y;
        for (const auto& o : observations) y.push_back(testdetect::has_test_maintenance(o.profile) ? 1.0 : 0.0);
        outcomes.emplace_back("HasTestMaintenance", std::move(y));
    } else {
        for (const auto& [name, member] : kActivityOutcomes) {
            std::vector<double> y;
            for (const auto& o : observations) y.push_back(o.profile.*member > 0 ? 1.0 : 0.0);
            outcomes.emplace_back(name, std::move(y));
        }
    }

    // Change types that never vary carry no information and would make the design singular.
    std::vector<std::string> base_names;
    std::vector<std::size_t> base_cols;
    std::vector<std::string> constant;
    for (std::size_t k = 0; k < types.size(); ++k) {
        bool varies = false;
        for (const auto& o : observations) varies |= o.change_type_counts[k] != observations.front().change_type_counts[k];
        if (varies) {
            base_names.emplace_back(distill::to_string(types[k]));
            base_cols.push_back(k);
        } else {
            constant.emplace_back(distill::to_string(types[k]));
        }
    }

    std::vector<LogisticOutcome> results;
    CsvTable summary{{"outcome", "term", "estimate", "std_error", "z", "p"}, {}};
    CsvTable ors{{"outcome", "predictor", "odds_ratio", "ci_low", "ci_high", "plotted"}, {}};
    std::vector<std::pair<std::string, stats::ModelFit>> fitted;
    std::vector<std::size_t> counts;
    std::string diagnostics;

    for (const auto& [name, yv] : outcomes) {
        LogisticOutcome result;
        result.outcome = name;
        result.dropped_predictors = constant;
        std::vector<std::string> names = base_names;
        std::vector<std::size_t> cols = base_cols;
        Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), n);
        try {
            double positives = y.sum();
            if (n == 0 || positives == 0 || positives == static_cast<double>(n)) {
                throw InvalidInput("outcome is constant (" + format_number(positives) + " of " + std::to_string(n) +
                                   " commits positive); refusing logistic fit");
            }
            while (true) {
                if (static_cast<std::size_t>(n) <= names.size() + 1) {
                    throw InvalidInput(std::to_string(n) + " commits for " + std::to_string(names.size() + 1) +
                                       " model parameters; more observations than predictors are required");
                }
                Eigen::MatrixXd x(n, static_cast<Eigen::Index>(names.size()));
                for (Eigen::Index i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < cols.size(); ++j) {
                        x(i, static_cast<Eigen::Index>(j)) = observations[static_cast<std::size_t>(i)].change_type_counts[cols[j]];
                    }
                }
                try {
                    result.fit = stats::fit_logistic(stats::DesignMatrix(names, std::move(x)), y, fit_options);
                    break;
                } catch (const stats::SingularDesign& e) {
                    bool removed = false;
                    for (const auto& c : e.columns()) {
                        auto it = std::find(names.begin(), names.end(), c);
                        if (it == names.end()) continue;
                        cols.erase(cols.begin() + (it - names.begin()));
                        names.erase(it);
                        result.dropped_predictors.push_back(c);
                        removed = true;
                    }
                    if (!removed) throw;
                }
            }
        } catch (const Error& e) {
            result.diagnostic = e.what();
        }
        if (result.fit) {
            for (const auto& row : fit_summary_table(*result.fit).rows) {
                std::vector<std::string> out{name};
                out.insert(out.end(), row.begin(), row.end());
                summary.rows.push_back(std::move(out));
            }
            fitted.emplace_back(name, *result.fit);
            counts.push_back(static_cast<std::size_t>(n));
            if (result.fit->converged) {
                result.odds_ratios = stats::odds_ratios(*result.fit);
                auto shown = select_odds_ratios(result.odds_ratios);
                std::set<std::string> shown_names;
                BarChart chart;
                chart.title = "Odds ratio for " + name;
                chart.value_label = "odds ratio (95% CI)";
                for (const auto& r : shown) {
                    shown_names.insert(r.name);
                    chart.bars.push_back(Bar{r.name, r.estimate, r.ci_low, r.ci_high});
                }
                for (const auto& r : result.odds_ratios) {
                    ors.rows.push_back({name, r.name, format_number(r.estimate), format_number(r.ci_low),
                                        format_number(r.ci_high), shown_names.count(r.name) ? "1" : "0"});
                }
                emit_chart(out_dir, "odds_ratio_" + name, chart);
            } else {
                result.diagnostic = result.fit->diagnostic.empty() ? "fit did not converge" : result.fit->diagnostic;
            }
        }
        if (!result.diagnostic.empty()) diagnostics += name + ": " + result.diagnostic + "\n";
        if (!result.dropped_predictors.empty()) {
            diagnostics += name + ": predictors left out:";
            for (const auto& d : result.dropped_predictors) diagnostics += " " + d;
            diagnostics += "\n";
        }
        results.push_back(std::move(result));
    }
    pipeline::write_csv(out_dir / "summary.csv", summary);
    pipeline::write_csv(out_dir / "odds_ratios.csv", ors);
    write_text_file(out_dir / "diagnostics.txt", diagnostics);
    write_text_file(out_dir / "table.txt", fitted.empty() ? std::string("no model could be fitted\n")
                                                          : format_coefficient_table(fitted, counts));
    if (fitted.empty()) throw InvalidInput(kind_dir(kind) + ": no outcome could be fitted\n" + diagnostics);
    return results;
}

ProportionsReport run_proportions(std::span<const pipeline::CommitObservation> observations,
                                  pipeline::GroupBy group_by, const std::filesystem::path& out_dir) {
    ProportionsReport report;
    report.rows = pipeline::proportions_by_activity(observations, group_by);
    std::filesystem::create_directories(out_dir);

    CsvTable rows{{"group", "activity", "commits", "with_test_maintenance", "fraction"}, {}};
    std::map<classify::MaintenanceActivity, std::vector<double>> fractions;
    for (const auto& r : report.rows) {
        rows.rows.push_back({r.group, std::string(classify::to_string(r.activity)), std::to_string(r.commits),
                             std::to_string(r.with_test_maintenance), format_number(r.fraction)});
        fractions[r.activity].push_back(r.fraction);
    }
    pipeline::write_csv(out_dir / "proportions.csv", rows);

    report.box.title = std::string("Share of commits with test maintenance, per ") +
                       (group_by == pipeline::GroupBy::Project ? "project" : "developer");
    report.box.y_label = "fraction of commits";
    for (auto a : classify::kActivities) {
        auto it = fractions.find(a);
        if (it == fractions.end()) continue;
        report.box.groups.push_back(
            BoxGroup{std::string(classify::to_string(a)), it->second.size(), stats::five_number_summary(it->second)});
    }
    emit_chart(out_dir, "boxplot", report.box);

    CsvTable wmw{{"comparison", "n_corrective", "n_other", "U", "z", "p"}, {}};
    const auto& corrective = fractions[classify::MaintenanceActivity::Corrective];
    for (auto other : {classify::MaintenanceActivity::Perfective, classify::MaintenanceActivity::Adaptive}) {
        RankComparison c;
        c.other = std::string(classify::to_string(other));
        const auto& b = fractions[other];
        c.corrective_groups = corrective.size();
        c.other_groups = b.size();
        std::vector<std::string> row{"CORRECTIVE vs " + c.other, std::to_string(c.corrective_groups),
                                     std::to_string(c.other_groups)};
        if (!corrective.empty() && !b.empty()) {
            c.result = stats::wilcoxon_mann_whitney(corrective, b);
            row.insert(row.end(), {format_number(c.result->u), format_number(c.result->z),
                                   format_number(c.result->p_value)});
        } else {
            row.insert(row.end(), {"NA", "NA", "NA"});
        }
        wmw.rows.push_back(std::move(row));
        report.comparisons.push_back(std::move(c));
    }
    pipeline::write_csv(out_dir / "wmw.csv", wmw);
    return report;
}

}  // namespace coevo::report

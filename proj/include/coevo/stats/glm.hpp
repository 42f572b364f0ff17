#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/error.hpp"

namespace coevo::stats {

// Named predictor columns; the intercept column is implicit.
class DesignMatrix {
public:
    DesignMatrix() = default;
    // Throws InvalidInput on duplicate names, a column-count mismatch or non-finite cells.
    DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd values);

    const std::vector<std::string>& names() const { return names_; }
    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }

    // Sub-design holding the named columns, in the given order.
    DesignMatrix select(const std::vector<std::string>& columns) const;
    DesignMatrix select_rows(const std::vector<std::size_t>& rows) const;

    // [1 | X]
    Eigen::MatrixXd with_intercept() const;

private:
    std::vector<std::string> names_;
    Eigen::MatrixXd values_;
};

enum class Family { NegativeBinomial, BinomialLogit };

std::string_view to_string(Family family);

struct FitOptions {
    double tolerance = 1e-8;      // relative deviance change
    int max_iterations = 50;      // IRLS iterations per inner fit
    int max_outer_iterations = 100;  // negative-binomial theta/beta alternations
    double separation_bound = 15.0;
    double theta_divergence = 1e6;
};

struct Term {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double z_value = 0.0;
    double p_value = 1.0;
};

inline constexpr std::string_view kInterceptName = "(Intercept)";

struct ModelFit {
    Family family = Family::BinomialLogit;
    std::vector<Term> terms;  // intercept first
    double null_deviance = 0.0;
    double residual_deviance = 0.0;
    long null_df = 0;
    long residual_df = 0;
    double theta = 0.0;  // negative binomial only; infinity after a Poisson fallback
    bool poisson_fallback = false;
    int iterations = 0;
    bool converged = false;
    std::string diagnostic;

    const Term& term(std::string_view name) const;
    double coefficient(std::string_view name) const { return term(name).estimate; }
    Eigen::VectorXd coefficient_vector() const;
    // exp(intercept + x·beta) for negative binomial, the logistic mean for logit.
    Eigen::VectorXd predict(const DesignMatrix& x) const;
};

// Raised when the design matrix is rank deficient; names the offending columns.
class SingularDesign : public Error {
public:
    SingularDesign(const std::string& what, std::vector<std::string> columns)
        : Error(what), columns_(std::move(columns)) {}
    const std::vector<std::string>& columns() const { return columns_; }

private:
    std::vector<std::string> columns_;
};

// ln(x + 1); throws InvalidInput for negative x.
double log_transform(double x);

// Logistic regression by IRLS with step-halving. Requires y in {0,1} with both
// classes present. Suspected separation yields converged = false with a diagnostic.
ModelFit fit_logistic(const DesignMatrix& x, const Eigen::VectorXd& y, const FitOptions& options = {});

// Log-link negative-binomial regression; alternates IRLS for beta and a
// Newton step on the profile likelihood for theta.
ModelFit fit_negbin(const DesignMatrix& x, const Eigen::VectorXd& y, const FitOptions& options = {});

// Negative-binomial fit with theta held fixed.
ModelFit fit_negbin_fixed_theta(const DesignMatrix& x, const Eigen::VectorXd& y, double theta,
                                const FitOptions& options = {});

// Log-likelihood of the negative binomial at means mu (theta = infinity gives Poisson).
double negbin_log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double theta);

struct OddsRatio {
    std::string name;
    double estimate = 1.0;
    double ci_low = 1.0;
    double ci_high = 1.0;
};

// exp(beta) and exp(beta -/+ 1.96 SE) for every non-intercept term.
std::vector<OddsRatio> odds_ratios(const ModelFit& fit);

struct AnovaRow {
    std::string term;
    long df = 0;
    double deviance_reduction = 0.0;
    long residual_df = 0;
    double residual_deviance = 0.0;
    double p_value = 1.0;
};

struct AnovaTable {
    long null_df = 0;
    double null_deviance = 0.0;
    std::vector<AnovaRow> rows;
    std::optional<double> theta;  // held fixed across the sequence for negative binomial
};

// Sequential (type I) analysis of deviance: NULL, +t1, +t1+t2, ... For the
// negative binomial the full model's theta is held fixed across the sequence.
AnovaTable anova_sequential(const DesignMatrix& x, const Eigen::VectorXd& y, Family family,
                            const std::vector<std::string>& term_order, const FitOptions& options = {});

}  // namespace coevo::stats

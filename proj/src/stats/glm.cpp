#include "coevo/stats/glm.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <limits>
#include <set>

#include "coevo/stats/distributions.hpp"

namespace coevo::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxEta = 700.0;

// Variance/link behaviour of one fitted family. theta = infinity means Poisson.
struct Model {
    Family family;
    double theta = kInf;

    double mean(double eta) const {
        if (family == Family::BinomialLogit) return 1.0 / (1.0 + std::exp(-eta));
        return std::exp(std::min(eta, kMaxEta));
    }

    double link(double mu) const {
        if (family == Family::BinomialLogit) return std::log(mu / (1.0 - mu));
        return std::log(mu);
    }

    double weight(double mu) const {
        if (family == Family::BinomialLogit) return mu * (1.0 - mu);
        return std::isinf(theta) ? mu : mu / (1.0 + mu / theta);
    }

    // d eta / d mu
    double link_derivative(double mu) const {
        if (family == Family::BinomialLogit) return 1.0 / (mu * (1.0 - mu));
        return 1.0 / mu;
    }

    double unit_deviance(double y, double mu) const {
        if (family == Family::BinomialLogit) {
            double p = y > 0.5 ? mu : 1.0 - mu;
            return -2.0 * std::log(std::max(p, std::numeric_limits<double>::min()));
        }
        double ylogy = y > 0 ? y * std::log(y / mu) : 0.0;
        if (std::isinf(theta)) return 2.0 * (ylogy - (y - mu));
        return 2.0 * (ylogy - (y + theta) * std::log((y + theta) / (mu + theta)));
    }

    double deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) const {
        double d = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) d += unit_deviance(y[i], mu[i]);
        return d;
    }

    double initial_mean(double y) const {
        if (family == Family::BinomialLogit) return (y + 0.5) / 2.0;
        return y + (y == 0 ? 1.0 / 6.0 : 0.0);
    }
};

struct IrlsState {
    Eigen::VectorXd beta;
    Eigen::VectorXd mu;
    double deviance = 0.0;
    int iterations = 0;
    bool converged = false;
    bool last_step_decreased = false;
};

Eigen::VectorXd means(const Model& model, const Eigen::VectorXd& eta) {
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = model.mean(eta[i]);
    return mu;
}

Eigen::MatrixXd weighted_cross(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
    return x.transpose() * w.asDiagonal() * x;
}

IrlsState irls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Model& model,
               const std::optional<Eigen::VectorXd>& start, const FitOptions& options) {
    IrlsState s;
    Eigen::VectorXd eta(y.size());
    if (start) {
        s.beta = *start;
        eta = x * s.beta;
        s.mu = means(model, eta);
    } else {
        s.mu.resize(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            s.mu[i] = model.initial_mean(y[i]);
            eta[i] = model.link(s.mu[i]);
        }
    }
    s.deviance = model.deviance(y, s.mu);
    bool have_beta = start.has_value();

    for (int it = 1; it <= options.max_iterations; ++it) {
        s.iterations = it;
        Eigen::VectorXd w(y.size());
        Eigen::VectorXd z(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            w[i] = model.weight(s.mu[i]);
            z[i] = eta[i] + (y[i] - s.mu[i]) * model.link_derivative(s.mu[i]);
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(weighted_cross(x, w));
        Eigen::VectorXd beta_new = ldlt.solve(x.transpose() * (w.asDiagonal() * z));
        Eigen::VectorXd eta_new = x * beta_new;
        Eigen::VectorXd mu_new = means(model, eta_new);
        double dev_new = model.deviance(y, mu_new);

        // Step-halving keeps the deviance non-increasing across accepted steps.
        if (have_beta) {
            for (int half = 0; half < 40 && (!std::isfinite(dev_new) || dev_new > s.deviance); ++half) {
                beta_new = 0.5 * (beta_new + s.beta);
                eta_new = x * beta_new;
                mu_new = means(model, eta_new);
                dev_new = model.deviance(y, mu_new);
            }
            if (!std::isfinite(dev_new) || dev_new > s.deviance) {
                s.converged = true;  // no further descent possible from the current point
                break;
            }
        }
        bool done = std::abs(dev_new - s.deviance) / (std::abs(dev_new) + 0.1) < options.tolerance;
        s.last_step_decreased = dev_new < s.deviance;
        s.beta = std::move(beta_new);
        eta = std::move(eta_new);
        s.mu = std::move(mu_new);
        s.deviance = dev_new;
        have_beta = true;
        if (done) {
            s.converged = true;
            break;
        }
    }
    return s;
}

void check_rank(const DesignMatrix& x, const Eigen::MatrixXd& x1) {
    if (x1.rows() < x1.cols()) {
        throw SingularDesign("design has more columns than observations", x.names());
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x1);
    qr.setThreshold(1e-10);
    auto rank = qr.rank();
    if (rank == x1.cols()) return;
    std::vector<std::string> dropped;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = rank; k < x1.cols(); ++k) {
        auto col = perm[k];
        dropped.push_back(col == 0 ? std::string(kInterceptName) : x.names()[static_cast<std::size_t>(col - 1)]);
    }
    std::sort(dropped.begin(), dropped.end());
    std::string msg = "singular design; collinear columns:";
    for (const auto& d : dropped) msg += " " + d;
    throw SingularDesign(msg, dropped);
}

ModelFit finish(const DesignMatrix& x, const Eigen::MatrixXd& x1, const Eigen::VectorXd& y, const Model& model,
                const IrlsState& s, double null_deviance) {
    ModelFit fit;
    fit.family = model.family;
    fit.iterations = s.iterations;
    fit.converged = s.converged;
    fit.residual_deviance = s.deviance;
    fit.null_deviance = null_deviance;
    fit.null_df = static_cast<long>(y.size()) - 1;
    fit.residual_df = static_cast<long>(y.size() - x1.cols());
    fit.theta = model.theta;

    Eigen::VectorXd w(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) w[i] = model.weight(s.mu[i]);
    Eigen::MatrixXd info = weighted_cross(x1, w);
    Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));

    for (Eigen::Index j = 0; j < x1.cols(); ++j) {
        Term t;
        t.name = j == 0 ? std::string(kInterceptName) : x.names()[static_cast<std::size_t>(j - 1)];
        t.estimate = s.beta[j];
        t.std_error = std::sqrt(std::max(cov(j, j), 0.0));
        t.z_value = t.std_error > 0 ? t.estimate / t.std_error : 0.0;
        t.p_value = t.std_error > 0 ? two_sided_normal_p(t.z_value) : 1.0;
        fit.terms.push_back(std::move(t));
    }
    return fit;
}

void validate_response(const DesignMatrix& x, const Eigen::VectorXd& y) {
    if (y.size() != x.rows()) {
        throw InvalidInput("response has " + std::to_string(y.size()) + " rows, design has " +
                           std::to_string(x.rows()));
    }
    if (y.size() == 0) throw InvalidInput("no observations");
}

double negbin_null_deviance(const Eigen::VectorXd& y, double theta) {
    Model model{Family::NegativeBinomial, theta};
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(y.size(), y.mean());
    return model.deviance(y, mu);
}

void validate_counts(const DesignMatrix& x, const Eigen::VectorXd& y) {
    validate_response(x, y);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i]) || y[i] < 0 || y[i] != std::floor(y[i])) {
            throw InvalidInput("negative-binomial response must be non-negative integers (row " +
                               std::to_string(i) + ")");
        }
    }
    if (y.maxCoeff() == 0) throw InvalidInput("negative-binomial response is identically zero");
}

// Newton iterations on log(theta) for the profile likelihood with mu fixed.
double theta_ml(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double theta, const FitOptions& options) {
    using boost::math::digamma;
    using boost::math::trigamma;
    double phi = std::log(theta);
    for (int it = 0; it < 100; ++it) {
        double t = std::exp(phi);
        double score = 0.0;
        double info = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double yi = y[i];
            double mt = mu[i] + t;
            score += digamma(yi + t) - digamma(t) + std::log(t) + 1.0 - std::log(mt) - (yi + t) / mt;
            info += -trigamma(yi + t) + trigamma(t) - 1.0 / t + 2.0 / mt - (yi + t) / (mt * mt);
        }
        double grad = t * score;                 // d loglik / d phi
        double hess = -t * t * info + t * score;  // d2 loglik / d phi2
        double step = hess < 0 ? -grad / hess : (grad > 0 ? 1.0 : -1.0);
        step = std::clamp(step, -2.0, 2.0);
        phi += step;
        if (std::exp(phi) > options.theta_divergence) return std::exp(phi);
        if (std::abs(step) < 1e-12) break;
    }
    return std::exp(phi);
}

}  // namespace

DesignMatrix::DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
        throw InvalidInput("design matrix: " + std::to_string(names_.size()) + " names for " +
                           std::to_string(values_.cols()) + " columns");
    }
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) throw InvalidInput("design matrix: duplicate column " + n);
    }
    if (!values_.allFinite()) throw InvalidInput("design matrix: missing or non-finite cell");
}

DesignMatrix DesignMatrix::select(const std::vector<std::string>& columns) const {
    Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) {
        auto it = std::find(names_.begin(), names_.end(), columns[k]);
        if (it == names_.end()) throw InvalidInput("design matrix: no column named " + columns[k]);
        out.col(static_cast<Eigen::Index>(k)) = values_.col(it - names_.begin());
    }
    return DesignMatrix(columns, std::move(out));
}

DesignMatrix DesignMatrix::select_rows(const std::vector<std::size_t>& rows) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), values_.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.row(static_cast<Eigen::Index>(r)) = values_.row(static_cast<Eigen::Index>(rows[r]));
    }
    return DesignMatrix(names_, std::move(out));
}

Eigen::MatrixXd DesignMatrix::with_intercept() const {
    Eigen::MatrixXd out(values_.rows(), values_.cols() + 1);
    out.col(0).setOnes();
    out.rightCols(values_.cols()) = values_;
    return out;
}

std::string_view to_string(Family family) {
    return family == Family::NegativeBinomial ? "NEG_BINOMIAL" : "BINOMIAL_LOGIT";
}

const Term& ModelFit::term(std::string_view name) const {
    for (const auto& t : terms) {
        if (t.name == name) return t;
    }
    throw InvalidInput("model has no term " + std::string(name));
}

Eigen::VectorXd ModelFit::coefficient_vector() const {
    Eigen::VectorXd beta(static_cast<Eigen::Index>(terms.size()));
    for (std::size_t j = 0; j < terms.size(); ++j) beta[static_cast<Eigen::Index>(j)] = terms[j].estimate;
    return beta;
}

Eigen::VectorXd ModelFit::predict(const DesignMatrix& x) const {
    if (static_cast<std::size_t>(x.cols()) + 1 != terms.size()) {
        throw InvalidInput("predict: design has " + std::to_string(x.cols()) + " columns, model has " +
                           std::to_string(terms.size() - 1));
    }
    Model model{family, theta};
    return means(model, x.with_intercept() * coefficient_vector());
}

double log_transform(double x) {
    if (!(x >= 0)) throw InvalidInput("log_transform: negative input " + std::to_string(x));
    return std::log1p(x);
}

ModelFit fit_logistic(const DesignMatrix& x, const Eigen::VectorXd& y, const FitOptions& options) {
    validate_response(x, y);
    Eigen::Index ones = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) throw InvalidInput("logistic response must be 0/1 (row " + std::to_string(i) + ")");
        ones += y[i] == 1.0;
    }
    if (ones == 0 || ones == y.size()) {
        throw InvalidInput("logistic response is constant (" + std::to_string(ones) + " of " +
                           std::to_string(y.size()) + " positive); both outcomes are required");
    }
    Eigen::MatrixXd x1 = x.with_intercept();
    check_rank(x, x1);

    Model model{Family::BinomialLogit};
    IrlsState s = irls(x1, y, model, std::nullopt, options);

    double p = static_cast<double>(ones) / static_cast<double>(y.size());
    double null_dev = -2.0 * (static_cast<double>(ones) * std::log(p) +
                              static_cast<double>(y.size() - ones) * std::log(1.0 - p));
    ModelFit fit = finish(x, x1, y, model, s, null_dev);
    fit.theta = 0.0;
    double max_abs = s.beta.cwiseAbs().maxCoeff();
    if (max_abs > options.separation_bound && s.last_step_decreased) {
        fit.converged = false;
        fit.diagnostic = "perfect or quasi-complete separation suspected: |coefficient| " + std::to_string(max_abs) +
                         " exceeds " + std::to_string(options.separation_bound) + " while deviance keeps shrinking";
    } else if (!s.converged) {
        fit.diagnostic = "IRLS did not converge in " + std::to_string(options.max_iterations) + " iterations";
    }
    return fit;
}

double negbin_log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double theta) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double yi = y[i];
        if (std::isinf(theta)) {
            ll += yi * std::log(mu[i]) - mu[i] - std::lgamma(yi + 1.0);
        } else {
            ll += std::lgamma(yi + theta) - std::lgamma(theta) - std::lgamma(yi + 1.0) +
                  theta * std::log(theta / (theta + mu[i])) + (yi > 0 ? yi * std::log(mu[i] / (theta + mu[i])) : 0.0);
        }
    }
    return ll;
}

ModelFit fit_negbin_fixed_theta(const DesignMatrix& x, const Eigen::VectorXd& y, double theta,
                                const FitOptions& options) {
    validate_counts(x, y);
    if (!(theta > 0)) throw InvalidInput("theta must be positive");
    Eigen::MatrixXd x1 = x.with_intercept();
    check_rank(x, x1);
    Model model{Family::NegativeBinomial, theta};
    IrlsState s = irls(x1, y, model, std::nullopt, options);
    ModelFit fit = finish(x, x1, y, model, s, negbin_null_deviance(y, theta));
    fit.poisson_fallback = std::isinf(theta);
    return fit;
}

ModelFit fit_negbin(const DesignMatrix& x, const Eigen::VectorXd& y, const FitOptions& options) {
    validate_counts(x, y);
    Eigen::MatrixXd x1 = x.with_intercept();
    check_rank(x, x1);

    Model poisson{Family::NegativeBinomial, kInf};
    IrlsState s = irls(x1, y, poisson, std::nullopt, options);
    IrlsState poisson_state = s;

    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        num += s.mu[i] * s.mu[i];
        den += (y[i] - s.mu[i]) * (y[i] - s.mu[i]) - s.mu[i];
    }
    double theta = den > 0 ? num / den : kInf;
    if (std::isinf(theta)) {
        double ss = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) ss += std::pow(y[i] / s.mu[i] - 1.0, 2);
        theta = ss > 0 ? static_cast<double>(y.size()) / ss : options.theta_divergence * 2;
    }

    auto poisson_fallback = [&](const std::string& why) {
        ModelFit fit = finish(x, x1, y, poisson, poisson_state, negbin_null_deviance(y, kInf));
        fit.poisson_fallback = true;
        fit.theta = kInf;
        fit.diagnostic = why;
        return fit;
    };
    if (theta > options.theta_divergence) {
        return poisson_fallback("theta diverged (no overdispersion); Poisson fit reported");
    }

    bool converged = false;
    int outer = 0;
    double dev_prev = s.deviance;
    for (outer = 1; outer <= options.max_outer_iterations; ++outer) {
        double theta_new = theta_ml(y, s.mu, theta, options);
        if (theta_new > options.theta_divergence) {
            return poisson_fallback("theta diverged past " + std::to_string(options.theta_divergence) +
                                    "; Poisson fit reported");
        }
        Model model{Family::NegativeBinomial, theta_new};
        s = irls(x1, y, model, s.beta, options);
        double change = std::abs(theta_new - theta) / theta_new +
                        std::abs(s.deviance - dev_prev) / (std::abs(s.deviance) + 0.1);
        theta = theta_new;
        dev_prev = s.deviance;
        if (change < options.tolerance) {
            converged = true;
            break;
        }
    }
    Model model{Family::NegativeBinomial, theta};
    ModelFit fit = finish(x, x1, y, model, s, negbin_null_deviance(y, theta));
    fit.iterations = std::min(outer, options.max_outer_iterations);
    fit.converged = converged && s.converged;
    if (!fit.converged) fit.diagnostic = "theta/beta alternation did not converge";
    return fit;
}

std::vector<OddsRatio> odds_ratios(const ModelFit& fit) {
    if (fit.family != Family::BinomialLogit) throw InvalidInput("odds ratios require a logistic fit");
    if (!fit.converged) throw InvalidInput("odds ratios require a converged fit: " + fit.diagnostic);
    std::vector<OddsRatio> out;
    for (const auto& t : fit.terms) {
        if (t.name == kInterceptName) continue;
        out.push_back(OddsRatio{t.name, std::exp(t.estimate), std::exp(t.estimate - 1.96 * t.std_error),
                                std::exp(t.estimate + 1.96 * t.std_error)});
    }
    return out;
}

AnovaTable anova_sequential(const DesignMatrix& x, const Eigen::VectorXd& y, Family family,
                            const std::vector<std::string>& term_order, const FitOptions& options) {
    for (const auto& t : term_order) {
        if (std::find(x.names().begin(), x.names().end(), t) == x.names().end()) {
            throw InvalidInput("anova: unknown term " + t);
        }
    }
    AnovaTable table;
    double theta = kInf;
    if (family == Family::NegativeBinomial) {
        theta = fit_negbin(x.select(term_order), y, options).theta;
        table.theta = theta;
    }
    auto fit_prefix = [&](std::size_t k) {
        std::vector<std::string> cols(term_order.begin(), term_order.begin() + static_cast<std::ptrdiff_t>(k));
        DesignMatrix sub = x.select(cols);
        return family == Family::NegativeBinomial ? fit_negbin_fixed_theta(sub, y, theta, options)
                                                  : fit_logistic(sub, y, options);
    };
    ModelFit null_fit = fit_prefix(0);
    table.null_df = null_fit.residual_df;
    table.null_deviance = null_fit.residual_deviance;
    double prev = table.null_deviance;
    long prev_df = table.null_df;
    for (std::size_t k = 1; k <= term_order.size(); ++k) {
        ModelFit fit = fit_prefix(k);
        AnovaRow row;
        row.term = term_order[k - 1];
        row.df = prev_df - fit.residual_df;
        row.residual_df = fit.residual_df;
        row.residual_deviance = fit.residual_deviance;
        row.deviance_reduction = prev - fit.residual_deviance;
        row.p_value = row.deviance_reduction > 0 ? chi_square_upper_tail(row.deviance_reduction, row.df) : 1.0;
        table.rows.push_back(row);
        prev = fit.residual_deviance;
        prev_df = fit.residual_df;
    }
    return table;
}

}  // namespace coevo::stats

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace coevo::testing {

double logistic_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double eta = beta[0];
        for (Eigen::Index j = 0; j < x.cols(); ++j) eta += beta[j + 1] * x(i, j);
        // log(1 + e^eta) without overflow
        double log1pexp = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
        ll += y[i] * eta - log1pexp;
    }
    return ll;
}

Eigen::VectorXd logistic_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index p = x.cols() + 1;
    auto f = [&](const Eigen::VectorXd& b) { return logistic_log_likelihood(x, y, b); };
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    for (int iter = 0; iter < 200; ++iter) {
        const double h = 1e-4;
        Eigen::VectorXd grad(p);
        Eigen::MatrixXd hess(p, p);
        for (Eigen::Index j = 0; j < p; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
            e[j] = h;
            grad[j] = (f(beta + e) - f(beta - e)) / (2 * h);
        }
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index k = j; k < p; ++k) {
                Eigen::VectorXd ej = Eigen::VectorXd::Zero(p);
                Eigen::VectorXd ek = Eigen::VectorXd::Zero(p);
                ej[j] = h;
                ek[k] = h;
                double v = (f(beta + ej + ek) - f(beta + ej - ek) - f(beta - ej + ek) + f(beta - ej - ek)) / (4 * h * h);
                hess(j, k) = v;
                hess(k, j) = v;
            }
        }
        Eigen::VectorXd step = hess.ldlt().solve(-grad);
        if (!step.allFinite() || grad.dot(step) <= 0) step = grad;  // fall back to ascent direction
        double base = f(beta);
        double t = 1.0;
        while (t > 1e-12 && !(f(beta + t * step) >= base)) t /= 2;
        beta += t * step;
        if ((t * step).cwiseAbs().maxCoeff() < 1e-12) break;
    }
    return beta;
}

double medcouple_bruteforce(std::vector<double> values) {
    if (values.size() < 3) throw std::invalid_argument("medcouple oracle needs n >= 3");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    double m = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    std::vector<double> lower;
    std::vector<double> upper;
    long ties = 0;
    for (double v : values) {
        if (v == m) {
            ++ties;
        } else if (v < m) {
            lower.push_back(v);
        } else {
            upper.push_back(v);
        }
    }
    std::vector<double> kernel;
    // xi <= m <= xj with xi != xj
    auto h = [m](double xi, double xj) { return ((xj - m) - (m - xi)) / (xj - xi); };
    for (double xi : lower) {
        for (double xj : upper) kernel.push_back(h(xi, xj));
        for (long t = 0; t < ties; ++t) kernel.push_back(h(xi, m));
    }
    for (long t = 0; t < ties; ++t) {
        for (double xj : upper) kernel.push_back(h(m, xj));
    }
    // Both members tied with the median: -1, 0 or +1 by position in the tie block.
    for (long a = 0; a < ties; ++a) {
        for (long b = 0; b < ties; ++b) {
            long s = ties - 1 - a - b;
            kernel.push_back(s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0));
        }
    }
    std::sort(kernel.begin(), kernel.end());
    const std::size_t k = kernel.size();
    return k % 2 ? kernel[k / 2] : (kernel[k / 2 - 1] + kernel[k / 2]) / 2.0;
}

double rank_sum_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    // Doubled midranks are integers.
    std::map<double, long> doubled_rank;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        doubled_rank[sorted[i]] = static_cast<long>(i + 1 + j);
        i = j;
    }
    const std::size_t na = a.size();
    const std::size_t n = pooled.size();
    long total = 0;
    for (double v : pooled) total += doubled_rank[v];
    long observed = 0;
    for (double v : a) observed += doubled_rank[v];

    // ways[k][s]: number of k-subsets with doubled rank sum s
    std::vector<std::vector<double>> ways(na + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        long r = doubled_rank[pooled[i]];
        for (std::size_t k = std::min(na, i + 1); k-- > 0;) {
            for (long s = total - r; s >= 0; --s) {
                if (ways[k][static_cast<std::size_t>(s)] != 0.0) {
                    ways[k + 1][static_cast<std::size_t>(s + r)] += ways[k][static_cast<std::size_t>(s)];
                }
            }
        }
    }
    // Two-sided: subsets at least as far from the mean as the observed sum.
    double mean2 = static_cast<double>(total) * static_cast<double>(na) / static_cast<double>(n);
    double dev = std::abs(static_cast<double>(observed) - mean2);
    double extreme = 0.0;
    double all = 0.0;
    for (long s = 0; s <= total; ++s) {
        double w = ways[na][static_cast<std::size_t>(s)];
        all += w;
        if (std::abs(static_cast<double>(s) - mean2) >= dev - 1e-9) extreme += w;
    }
    return extreme / all;
}

double quantile_oracle(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    double pos = p * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] * (1 - (pos - static_cast<double>(lo))) + values[hi] * (pos - static_cast<double>(lo));
}

}  // namespace coevo::testing

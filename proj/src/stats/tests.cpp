#include "coevo/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "coevo/error.hpp"
#include "coevo/stats/distributions.hpp"

namespace coevo::stats {

GoodnessOfFit chisq_goodness_of_fit(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) throw InvalidInput("goodness of fit: length mismatch");
    if (predicted.size() < 2) throw InvalidInput("goodness of fit: need at least two cells");
    GoodnessOfFit out;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (!(predicted[i] > 0)) {
            throw InvalidInput("goodness of fit: predicted cell " + std::to_string(i) + " is not positive");
        }
        double d = actual[i] - predicted[i];
        out.statistic += d * d / predicted[i];
    }
    out.df = static_cast<double>(predicted.size() - 1);
    out.p_value = chi_square_upper_tail(out.statistic, out.df);
    return out;
}

RankSumResult wilcoxon_mann_whitney(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidInput("rank-sum test: both samples must be non-empty");
    const std::size_t na = a.size();
    const std::size_t n = na + b.size();
    std::vector<std::pair<double, bool>> pooled;
    pooled.reserve(n);
    for (double v : a) pooled.emplace_back(v, true);
    for (double v : b) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second) rank_sum_a += midrank;
        }
        double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }

    const double dna = static_cast<double>(na);
    const double dnb = static_cast<double>(n - na);
    const double dn = static_cast<double>(n);
    RankSumResult out;
    out.u = rank_sum_a - dna * (dna + 1.0) / 2.0;
    double mean = dna * dnb / 2.0;
    double variance = n > 1 ? dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0))) : 0.0;
    if (variance <= 0) return out;
    double sigma = std::sqrt(variance);
    double diff = out.u - mean;
    double corrected = std::max(0.0, std::abs(diff) - 0.5);
    out.z = std::copysign(corrected / sigma, diff);
    out.p_value = two_sided_normal_p(out.z);
    return out;
}

}  // namespace coevo::stats

#pragma once

#include <span>

namespace coevo::stats {

struct GoodnessOfFit {
    double statistic = 0.0;  // Pearson X²
    double df = 0.0;
    double p_value = 1.0;
};

// Pearson chi-square of actual counts against predicted counts, df = n - 1.
// Throws InvalidInput on length mismatch, n < 2 or a non-positive predicted cell.
GoodnessOfFit chisq_goodness_of_fit(std::span<const double> predicted, std::span<const double> actual);

struct RankSumResult {
    double u = 0.0;  // U of sample a
    double z = 0.0;
    double p_value = 1.0;
};

// Two-sided Wilcoxon–Mann–Whitney test using midranks, a tie-corrected normal
// approximation and a 0.5 continuity correction.
RankSumResult wilcoxon_mann_whitney(std::span<const double> a, std::span<const double> b);

}  // namespace coevo::stats

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace coevo::stats {

// Sample quantile by linear interpolation between order statistics
// (Hyndman–Fan type 7). p in [0, 1]; throws InvalidInput on an empty sample.
double quantile_type7(std::span<const double> values, double p);

struct FiveNumberSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

FiveNumberSummary five_number_summary(std::span<const double> values);

// Median of the kernel ((xj - m) - (m - xi)) / (xj - xi) over xi <= m <= xj.
// Pairs tied with the median take signum(p - 1 - i - j). O(n log n).
// Throws InvalidInput for n < 3.
double medcouple(std::span<const double> values);

struct BoxplotFence {
    double medcouple = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double upper_fence = 0.0;
    std::vector<bool> keep;  // parallel to the input
    std::size_t dropped = 0;
};

// Upper fence of the skew-adjusted boxplot:
//   Q3 + 1.5 e^{3 MC} IQR when MC >= 0, Q3 + 1.5 e^{4 MC} IQR otherwise.
// Values above the fence are marked dropped. Samples with fewer than three
// values are kept whole. Throws InvalidInput on non-positive input.
BoxplotFence adjusted_boxplot_filter(std::span<const double> values);

struct Split {
    std::vector<std::size_t> train;       // ascending indices
    std::vector<std::size_t> validation;  // ascending indices
};

// Seeded random partition of [0, n) with `holdout` indices in validation.
// Throws InvalidInput when holdout >= n.
Split split_train_validation(std::size_t n, std::size_t holdout, std::uint64_t seed);

}  // namespace coevo::stats

#include "coevo/stats/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "coevo/error.hpp"

namespace coevo::stats {

namespace {

std::vector<double> sorted_copy(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    return v;
}

double quantile_sorted(const std::vector<double>& v, double p) {
    double h = static_cast<double>(v.size() - 1) * p;
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

// Kernel matrix over xplus (descending, >= m) by xminus (descending, <= m).
// Entries are non-increasing along rows and columns.
class Kernel {
public:
    Kernel(std::vector<double> plus, std::vector<double> minus, double m)
        : plus_(std::move(plus)), minus_(std::move(minus)), m_(m) {}

    std::size_t p() const { return plus_.size(); }
    std::size_t q() const { return minus_.size(); }

    double operator()(std::size_t i, std::size_t j) const {
        double xj = plus_[i];
        double xi = minus_[j];
        if (xj == xi) {
            auto s = static_cast<long>(p()) - 1 - static_cast<long>(i) - static_cast<long>(j);
            return s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
        }
        return ((xj - m_) - (m_ - xi)) / (xj - xi);
    }

private:
    std::vector<double> plus_;
    std::vector<double> minus_;
    double m_;
};

double weighted_median(std::vector<std::pair<double, std::size_t>> items) {
    std::sort(items.begin(), items.end());
    std::size_t total = 0;
    for (const auto& it : items) total += it.second;
    std::size_t acc = 0;
    for (const auto& it : items) {
        acc += it.second;
        if (2 * acc >= total) return it.first;
    }
    return items.back().first;
}

// k-th largest kernel value (0-based), after Johnson & Mizoguchi.
double kth_largest(const Kernel& h, std::size_t k) {
    const std::size_t p = h.p();
    const std::size_t q = h.q();
    std::vector<long> left(p, 0);
    std::vector<long> right(p, static_cast<long>(q) - 1);
    std::size_t left_total = 0;
    std::size_t right_total = p * q;

    while (right_total - left_total > p) {
        std::vector<std::pair<double, std::size_t>> row_medians;
        for (std::size_t i = 0; i < p; ++i) {
            if (left[i] <= right[i]) {
                auto mid = static_cast<std::size_t>((left[i] + right[i]) / 2);
                row_medians.emplace_back(h(i, mid), static_cast<std::size_t>(right[i] - left[i] + 1));
            }
        }
        double wm = weighted_median(std::move(row_medians));

        std::vector<long> greater(p);
        long j = 0;
        for (std::size_t r = p; r-- > 0;) {
            while (j < static_cast<long>(q) && h(r, static_cast<std::size_t>(j)) > wm) ++j;
            greater[r] = j - 1;
        }
        std::vector<long> less(p);
        j = static_cast<long>(q) - 1;
        for (std::size_t r = 0; r < p; ++r) {
            while (j >= 0 && h(r, static_cast<std::size_t>(j)) < wm) --j;
            less[r] = j + 1;
        }
        std::size_t greater_total = 0;
        std::size_t less_total = 0;
        for (std::size_t r = 0; r < p; ++r) {
            greater_total += static_cast<std::size_t>(greater[r] + 1);
            less_total += static_cast<std::size_t>(less[r]);
        }
        if (k + 1 <= greater_total) {
            right = std::move(greater);
            right_total = greater_total;
        } else if (k + 1 > less_total) {
            left = std::move(less);
            left_total = less_total;
        } else {
            return wm;
        }
    }

    std::vector<double> remaining;
    for (std::size_t i = 0; i < p; ++i) {
        for (long c = left[i]; c <= right[i]; ++c) remaining.push_back(h(i, static_cast<std::size_t>(c)));
    }
    auto nth = remaining.begin() + static_cast<std::ptrdiff_t>(k - left_total);
    std::nth_element(remaining.begin(), nth, remaining.end(), std::greater<>());
    return *nth;
}

}  // namespace

double quantile_type7(std::span<const double> values, double p) {
    if (values.empty()) throw InvalidInput("quantile of an empty sample");
    if (!(p >= 0 && p <= 1)) throw InvalidInput("quantile probability outside [0, 1]");
    return quantile_sorted(sorted_copy(values), p);
}

FiveNumberSummary five_number_summary(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("summary of an empty sample");
    auto v = sorted_copy(values);
    return FiveNumberSummary{v.front(), quantile_sorted(v, 0.25), quantile_sorted(v, 0.5), quantile_sorted(v, 0.75),
                             v.back()};
}

double medcouple(std::span<const double> values) {
    if (values.size() < 3) throw InvalidInput("medcouple needs at least 3 values");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    const std::size_t n = v.size();
    double m = n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;

    std::vector<double> plus;
    std::vector<double> minus;
    for (double x : v) {
        if (x >= m) plus.push_back(x);
        if (x <= m) minus.push_back(x);
    }
    Kernel h(std::move(plus), std::move(minus), m);
    const std::size_t count = h.p() * h.q();
    if (count % 2 == 1) return kth_largest(h, count / 2);
    return (kth_largest(h, count / 2 - 1) + kth_largest(h, count / 2)) / 2.0;
}

BoxplotFence adjusted_boxplot_filter(std::span<const double> values) {
    for (double v : values) {
        if (!(v > 0)) throw InvalidInput("adjusted boxplot filter requires positive values");
    }
    BoxplotFence out;
    out.keep.assign(values.size(), true);
    if (values.size() < 3) {
        out.upper_fence = std::numeric_limits<double>::infinity();
        if (!values.empty()) {
            auto v = sorted_copy(values);
            out.q1 = quantile_sorted(v, 0.25);
            out.q3 = quantile_sorted(v, 0.75);
            out.iqr = out.q3 - out.q1;
        }
        return out;
    }
    auto v = sorted_copy(values);
    out.q1 = quantile_sorted(v, 0.25);
    out.q3 = quantile_sorted(v, 0.75);
    out.iqr = out.q3 - out.q1;
    out.medcouple = medcouple(values);
    double tilt = out.medcouple >= 0 ? std::exp(3.0 * out.medcouple) : std::exp(4.0 * out.medcouple);
    out.upper_fence = out.q3 + 1.5 * tilt * out.iqr;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > out.upper_fence) {
            out.keep[i] = false;
            ++out.dropped;
        }
    }
    return out;
}

Split split_train_validation(std::size_t n, std::size_t holdout, std::uint64_t seed) {
    if (holdout >= n) {
        throw InvalidInput("holdout " + std::to_string(holdout) + " must be smaller than the " + std::to_string(n) +
                           " available items");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i-- > 1;) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(order[i], order[j]);
    }
    Split out;
    out.validation.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(holdout));
    out.train.assign(order.begin() + static_cast<std::ptrdiff_t>(holdout), order.end());
    std::sort(out.validation.begin(), out.validation.end());
    std::sort(out.train.begin(), out.train.end());
    return out;
}

}  // namespace coevo::stats

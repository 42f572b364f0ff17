#pragma once

namespace coevo::stats {

// P(|Z| >= |z|) for a standard normal Z.
double two_sided_normal_p(double z);

// P(X >= x) for X ~ chi-square(df). df must be positive.
double chi_square_upper_tail(double x, double df);

}  // namespace coevo::stats

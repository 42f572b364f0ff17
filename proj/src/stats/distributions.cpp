#include "coevo/stats/distributions.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "coevo/error.hpp"

namespace coevo::stats {

double two_sided_normal_p(double z) {
    return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

double chi_square_upper_tail(double x, double df) {
    if (!(df > 0)) throw InvalidInput("chi-square degrees of freedom must be positive");
    if (x <= 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

}  // namespace coevo::stats

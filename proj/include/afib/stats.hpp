#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace afib {

inline double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Variance with the 1/N convention.
inline double population_variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

inline double population_stddev(const std::vector<double>& v) {
    return std::sqrt(population_variance(v));
}

}  // namespace afib

#pragma once

#include "afib/types.hpp"

namespace afib {

/// F1: population standard deviation of the order-th successive-difference
/// sequence of the intervals. Needs at least order + 2 intervals.
double f1_sd_derivative(const IbiSequence& ibi, int order = 5);

/// F2: entropy of an equal-width histogram over [min, max] with `bins` bins,
/// -sum h_j * ln(h_j / w_j), empty bins contributing 0. A zero-spread series
/// yields 0. Natural log; w_j in ms, so the value shifts by ln(c) when the
/// intervals are scaled by c.
double f2_histogram_entropy(const IbiSequence& ibi, int bins = 2);

/// Rayleigh density with scale sigma.
double rayleigh_pdf(double x, double sigma);

/// Closed-form maximum-likelihood Rayleigh scale, sqrt(sum i^2 / 2N), plus
/// the 1 ms evaluation grid used by the resemblance sum. The grid runs into
/// the tail until the density falls below 1% of its peak, and at least to
/// max(I) + 3 kernel bandwidths.
struct RayleighFit {
    double sigma_ml_ms = 0.0;
    double grid_step_ms = 1.0;
    int grid_len = 0;
};

RayleighFit rayleigh_sigma_ml(const IbiSequence& ibi);

/// Silverman's rule-of-thumb bandwidth (4 sd^5 / 3N)^0.2, floored at 1 ms.
double silverman_bandwidth(const IbiSequence& ibi);

/// Gaussian kernel density estimate at x, kernel standard deviation =
/// Silverman bandwidth (or an explicit one).
double kde_density(const IbiSequence& ibi, double x_ms);
double kde_density(const IbiSequence& ibi, double x_ms, double bandwidth_ms);

/// F3: sum over the 1 ms grid of |rayleigh - kde| / grid step.
double f3_rayleigh_resemblance(const IbiSequence& ibi);

struct FeatureOptions {
    int deriv_order = 5;
    int bins = 2;
};

/// All five features; needs at least 10 intervals.
FeatureVector extract_features(const IbiSequence& ibi, const FeatureOptions& opts = {});

}  // namespace afib

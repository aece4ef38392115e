#include "afib/features.hpp"

#include <algorithm>
#include <cmath>

#include "afib/hvg.hpp"
#include "afib/stats.hpp"

namespace afib {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void require_positive_intervals(const IbiSequence& ibi) {
    for (double iv : ibi.intervals_ms) {
        if (!(iv > 0.0)) {
            throw Error(ErrorCode::NonPositiveInterval, "intervals must be positive");
        }
    }
}

}  // namespace

double f1_sd_derivative(const IbiSequence& ibi, int order) {
    if (order < 1) {
        throw Error(ErrorCode::InvalidArgument, "difference order must be >= 1");
    }
    if (ibi.size() < static_cast<std::size_t>(order) + 2) {
        throw Error(ErrorCode::SeriesTooShort,
                    "need at least " + std::to_string(order + 2) + " intervals for order " +
                        std::to_string(order));
    }
    std::vector<double> d = ibi.intervals_ms;
    for (int k = 0; k < order; ++k) {
        for (std::size_t j = 0; j + 1 < d.size(); ++j) d[j] = d[j + 1] - d[j];
        d.pop_back();
    }
    return population_stddev(d);
}

double f2_histogram_entropy(const IbiSequence& ibi, int bins) {
    if (bins < 1) {
        throw Error(ErrorCode::InvalidArgument, "bin count must be >= 1");
    }
    if (ibi.size() < 2) {
        throw Error(ErrorCode::SeriesTooShort, "histogram entropy needs at least 2 intervals");
    }
    const auto [lo_it, hi_it] = std::minmax_element(ibi.intervals_ms.begin(), ibi.intervals_ms.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) return 0.0;

    const double range = hi - lo;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double x : ibi.intervals_ms) {
        auto idx = static_cast<long>((x - lo) / range * bins);
        idx = std::clamp<long>(idx, 0, bins - 1);  // puts max(I) in the last bin
        ++counts[static_cast<std::size_t>(idx)];
    }
    const double w = range / bins;
    const double n = static_cast<double>(ibi.size());
    double entropy = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double h = static_cast<double>(c) / n;
        entropy -= h * std::log(h / w);
    }
    return entropy;
}

double rayleigh_pdf(double x, double sigma) {
    if (x < 0.0) return 0.0;
    const double s2 = sigma * sigma;
    return x / s2 * std::exp(-0.5 * x * x / s2);
}

double silverman_bandwidth(const IbiSequence& ibi) {
    if (ibi.size() < 1) {
        throw Error(ErrorCode::SeriesTooShort, "bandwidth needs at least 1 interval");
    }
    const double sd = population_stddev(ibi.intervals_ms);
    const double n = static_cast<double>(ibi.size());
    const double bw = std::pow(4.0 * std::pow(sd, 5.0) / (3.0 * n), 0.2);
    return std::max(bw, 1.0);  // 1 ms floor, the grid resolution
}

RayleighFit rayleigh_sigma_ml(const IbiSequence& ibi) {
    if (ibi.size() < 2) {
        throw Error(ErrorCode::SeriesTooShort, "Rayleigh fit needs at least 2 intervals");
    }
    require_positive_intervals(ibi);

    double sum_sq = 0.0;
    for (double iv : ibi.intervals_ms) sum_sq += iv * iv;
    RayleighFit fit;
    fit.sigma_ml_ms = std::sqrt(sum_sq / (2.0 * static_cast<double>(ibi.size())));
    fit.grid_step_ms = 1.0;

    // First grid index in the tail (past the mode at sigma) where the density
    // drops below 1% of its peak.
    const double peak = rayleigh_pdf(fit.sigma_ml_ms, fit.sigma_ml_ms);
    long m = static_cast<long>(std::ceil(fit.sigma_ml_ms / fit.grid_step_ms));
    m = std::max<long>(m, 1);
    while (rayleigh_pdf(static_cast<double>(m) * fit.grid_step_ms, fit.sigma_ml_ms) >= 0.01 * peak) {
        ++m;
    }
    // Extend so the grid also covers the KDE mass beyond the Rayleigh tail.
    const double max_iv = *std::max_element(ibi.intervals_ms.begin(), ibi.intervals_ms.end());
    const double bw = silverman_bandwidth(ibi);
    m = std::max<long>(m, static_cast<long>(std::ceil((max_iv + 3.0 * bw) / fit.grid_step_ms)));
    fit.grid_len = static_cast<int>(m);
    return fit;
}

double kde_density(const IbiSequence& ibi, double x_ms, double bandwidth_ms) {
    if (ibi.size() < 1) {
        throw Error(ErrorCode::SeriesTooShort, "density estimate needs at least 1 interval");
    }
    if (!(bandwidth_ms > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
    }
    const double norm = 1.0 / (bandwidth_ms * std::sqrt(kTwoPi));
    double sum = 0.0;
    for (double iv : ibi.intervals_ms) {
        const double u = (x_ms - iv) / bandwidth_ms;
        sum += std::exp(-0.5 * u * u);
    }
    return norm * sum / static_cast<double>(ibi.size());
}

double kde_density(const IbiSequence& ibi, double x_ms) {
    return kde_density(ibi, x_ms, silverman_bandwidth(ibi));
}

double f3_rayleigh_resemblance(const IbiSequence& ibi) {
    const RayleighFit fit = rayleigh_sigma_ml(ibi);
    const double bw = silverman_bandwidth(ibi);
    double sum = 0.0;
    for (int j = 1; j <= fit.grid_len; ++j) {
        const double x = static_cast<double>(j) * fit.grid_step_ms;
        sum += std::fabs(rayleigh_pdf(x, fit.sigma_ml_ms) - kde_density(ibi, x, bw));
    }
    return sum / fit.grid_step_ms;
}

FeatureVector extract_features(const IbiSequence& ibi, const FeatureOptions& opts) {
    if (ibi.size() < 10) {
        throw Error(ErrorCode::SeriesTooShort, "feature extraction needs at least 10 intervals");
    }
    FeatureVector f;
    f.f1 = f1_sd_derivative(ibi, opts.deriv_order);
    f.f2 = f2_histogram_entropy(ibi, opts.bins);
    f.f3 = f3_rayleigh_resemblance(ibi);
    f.f4 = static_cast<double>(hvg_radius(ibi));
    f.f5 = hvg_disassortative_entropy(ibi);
    return f;
}

}  // namespace afib

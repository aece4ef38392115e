#include "afib/synth.hpp"

#include <algorithm>
#include <cmath>

#include "afib/rng.hpp"

namespace afib {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kMinIntervalMs = 250.0;
constexpr double kMaxIntervalMs = 3000.0;
constexpr double kSinusPeriodBeats = 6.0;

double mean_square(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

void RhythmSpec::validate() const {
    if (!(duration_s > 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "duration must be positive");
    }
    if (mean_ibi_ms < kMinIntervalMs || mean_ibi_ms > kMaxIntervalMs) {
        throw Error(ErrorCode::InvalidSpec, "mean interval must lie in [250, 3000] ms");
    }
    if (variability_ms < 0.0) {
        throw Error(ErrorCode::InvalidSpec, "variability must be non-negative");
    }
}

IbiSequence gen_ibis(const RhythmSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const double phase = rng.uniform(0.0, kTwoPi);
    const double duration_ms = spec.duration_s * 1000.0;

    std::vector<double> intervals;
    double elapsed_ms = 0.0;
    for (std::size_t j = 0;; ++j) {
        double iv;
        if (spec.kind == Rhythm::Sinus) {
            const double breath =
                spec.variability_ms * std::sin(kTwoPi * static_cast<double>(j) / kSinusPeriodBeats + phase);
            iv = spec.mean_ibi_ms + breath + (spec.variability_ms / 4.0) * rng.normal();
        } else {
            iv = spec.mean_ibi_ms + 4.0 * spec.variability_ms * rng.normal();
        }
        iv = std::clamp(iv, kMinIntervalMs, kMaxIntervalMs);
        if (elapsed_ms + iv > duration_ms) break;
        intervals.push_back(iv);
        elapsed_ms += iv;
    }
    if (intervals.empty()) {
        throw Error(ErrorCode::InvalidSpec, "duration too short for a single beat");
    }
    return ibi_from_intervals(std::move(intervals));
}

SynthRecording gen_waveform(const IbiSequence& ibi, SignalKind kind, double rate_hz,
                            const WaveformOptions& opts) {
    ibi.validate();
    const double min_rate = kind == SignalKind::Ecg ? 100.0 : 20.0;
    if (!(rate_hz >= min_rate)) {
        throw Error(ErrorCode::InvalidRate,
                    "sampling rate too low for this signal kind");
    }

    const auto& beats = ibi.beat_times_s;  // first beat at 0, last at the interval sum
    const double t_first = beats.front();
    const double span_s = beats.back() - t_first;
    const auto count = static_cast<std::size_t>(std::floor(span_s * rate_hz)) + 1;

    std::vector<double> clean(count, 0.0);
    if (kind == SignalKind::Ppg) {
        for (std::size_t b = 0; b < beats.size(); ++b) {
            // Half-width capped so neighboring pulses never overlap.
            double gap = kMaxIntervalMs / 1000.0;
            if (b > 0) gap = std::min(gap, beats[b] - beats[b - 1]);
            if (b + 1 < beats.size()) gap = std::min(gap, beats[b + 1] - beats[b]);
            const double w = std::min(0.18, 0.45 * gap);
            const double center = beats[b] - t_first;
            const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil((center - w) * rate_hz)));
            const auto hi = std::min(count - 1, static_cast<std::size_t>(std::floor((center + w) * rate_hz)));
            for (std::size_t i = lo; i <= hi; ++i) {
                const double dt = static_cast<double>(i) / rate_hz - center;
                clean[i] += 0.5 * (1.0 + std::cos(kTwoPi / 2.0 * dt / w));
            }
        }
    } else {
        const double w = 0.020;  // 40 ms triangular spike
        for (double beat : beats) {
            const double center = beat - t_first;
            const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil((center - w) * rate_hz)));
            const auto hi = std::min(count - 1, static_cast<std::size_t>(std::floor((center + w) * rate_hz)));
            for (std::size_t i = lo; i <= hi; ++i) {
                const double dt = static_cast<double>(i) / rate_hz - center;
                clean[i] += std::max(0.0, 1.0 - std::fabs(dt) / w);
            }
        }
    }

    Rng rng(opts.seed);
    const double drift_phase = rng.uniform(0.0, kTwoPi);
    double noise_sd = 0.0;
    if (std::isfinite(opts.snr_db)) {
        noise_sd = std::sqrt(mean_square(clean) / std::pow(10.0, opts.snr_db / 10.0));
    }

    SynthRecording out;
    out.recording.kind = kind;
    out.recording.nominal_rate_hz = rate_hz;
    out.recording.samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / rate_hz;
        double v = clean[i];
        if (opts.drift_amplitude != 0.0) {
            v += opts.drift_amplitude * std::sin(kTwoPi * opts.drift_freq_hz * t + drift_phase);
        }
        if (noise_sd > 0.0) v += noise_sd * rng.normal();
        out.recording.samples.push_back({t, v});
    }
    for (double b : beats) out.beat_times_s.push_back(b - t_first);
    return out;
}

}  // namespace afib

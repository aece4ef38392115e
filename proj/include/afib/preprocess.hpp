#pragma once

#include <vector>

#include "afib/types.hpp"

namespace afib {

/// Linear interpolation of a raw recording onto a uniform grid that starts at
/// the first sample time. Output length = floor(duration * rate) + 1.
SampledSignal resample_uniform(const RawRecording& rec, double target_rate_hz);

struct Band {
    double low_hz = 0.0;
    double high_hz = 0.0;
};

/// Default passbands: ECG [0.5, 40] Hz (QRS energy), PPG [0.5, 8] Hz (pulse
/// fundamental and low harmonics at 30 Hz sampling).
Band default_band(SignalKind kind);

/// Removes the least-squares linear trend, then bandpass filters with
/// second-order Butterworth sections run forward-backward (zero phase, so
/// peak positions do not shift). Requires 0 < low < high < rate / 2.
SampledSignal detrend_and_filter(const SampledSignal& sig, double low_hz, double high_hz);

/// Rescales to zero mean and unit population variance.
SampledSignal standardize(const SampledSignal& sig);

/// Beat times in seconds from the signal start, strictly increasing, at least
/// 250 ms apart; every reported beat sits on a local maximum of the detection
/// function (the filtered signal for PPG, its square for ECG). The signal is
/// expected to be detrended, filtered, and standardized, and >= 2 s long.
///
/// ECG: derivative -> squaring -> centered moving-window integration ->
/// adaptive threshold, then the beat is refined to the nearby energy maximum.
/// PPG: local maxima above a rolling median + 2 * rolling MAD threshold.
std::vector<double> detect_beats(const SampledSignal& sig, SignalKind kind);

/// Differences beat times into intervals, rejecting physiologically
/// implausible ones: an interval below min_interval_ms drops its later beat
/// (merging into the following interval); an interval above max_interval_ms
/// splits the train, and the longest contiguous segment is kept.
IbiSequence intervals_from_beats(const std::vector<double>& beat_times_s,
                                 double min_interval_ms = 250.0,
                                 double max_interval_ms = 3000.0);

struct PreprocessOptions {
    double target_rate_hz = 0.0;  // 0 = recording's nominal rate, else kind default
    double low_hz = 0.0;          // 0 = kind default
    double high_hz = 0.0;         // 0 = kind default
    double min_interval_ms = 250.0;
    double max_interval_ms = 3000.0;
};

/// Full pipeline: resample, detrend + filter, standardize, detect beats,
/// difference into intervals.
IbiSequence ibis_from_recording(const RawRecording& rec, const PreprocessOptions& opts = {});

}  // namespace afib

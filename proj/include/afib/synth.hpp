#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "afib/types.hpp"

namespace afib {

/// Parameters for one synthetic rhythm recording. Sinus intervals follow a
/// respiratory sinusoid (amplitude = variability, period 6 beats, i.e. a
/// ~0.2 Hz breathing cycle at resting heart rates) plus Gaussian jitter of
/// variability / 4. AFib intervals are drawn i.i.d. with standard deviation
/// 4 * variability: irregular with no serial correlation. Everything is
/// clipped to [250, 3000] ms.
struct RhythmSpec {
    Rhythm kind = Rhythm::Sinus;
    double duration_s = 30.0;
    double mean_ibi_ms = 800.0;
    double variability_ms = 40.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Deterministic interval generator; identical seeds give identical output.
/// Cumulative time never exceeds duration_s.
IbiSequence gen_ibis(const RhythmSpec& spec);

struct WaveformOptions {
    double snr_db = std::numeric_limits<double>::infinity();  // infinity = noise-free
    double drift_amplitude = 0.0;
    double drift_freq_hz = 0.1;
    std::uint64_t seed = 1;
};

/// Synthetic waveform plus the ground-truth beat times that produced it.
struct SynthRecording {
    RawRecording recording;
    std::vector<double> beat_times_s;
};

/// PPG: one raised-cosine pulse per beat, width adapted so neighboring
/// pulses never overlap. ECG: one narrow triangular spike (40 ms base) per
/// beat. Optional baseline drift and white Gaussian noise at the requested
/// SNR. The recording spans the interval sum to within one sample period.
/// Rates below 20 Hz (PPG) or 100 Hz (ECG) are rejected.
SynthRecording gen_waveform(const IbiSequence& ibi, SignalKind kind, double rate_hz,
                            const WaveformOptions& opts = {});

}  // namespace afib

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace afib {

enum class SignalKind { Ecg, Ppg };

enum class Rhythm { Sinus = 0, AFib = 1 };

enum class ErrorCode {
    EmptyRecording,
    NonMonotonicTime,
    InvalidBand,
    ZeroVariance,
    TooFewBeats,
    SeriesTooShort,
    NonPositiveInterval,
    NoEdges,
    SingleClass,
    NonFiniteFeature,
    UndefinedMetric,
    TooFewPerClass,
    InvalidSpec,
    InvalidRate,
    InvalidArgument,
    FormatError,
    IoError,
};

const char* to_string(ErrorCode code);

/// True for failures caused by unreadable or malformed inputs, as opposed to
/// numeric/domain failures on well-formed data. Drives the CLI exit status.
bool is_data_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct RawSample {
    double t_s = 0.0;
    double v = 0.0;
};

/// Raw, possibly irregularly sampled single-channel recording.
struct RawRecording {
    std::vector<RawSample> samples;
    SignalKind kind = SignalKind::Ppg;
    double nominal_rate_hz = 0.0;

    double duration_s() const;
    // Throws unless times are strictly increasing and there are >= 2 samples.
    void validate() const;
};

/// Uniformly sampled signal.
struct SampledSignal {
    std::vector<double> values;
    double rate_hz = 0.0;

    std::size_t size() const { return values.size(); }
    double duration_s() const;
};

/// Inter-beat intervals in milliseconds plus the beat times they came from.
/// beat_times_s has one more element than intervals_ms, and
/// intervals_ms[j] == 1000 * (beat_times_s[j+1] - beat_times_s[j]).
struct IbiSequence {
    std::vector<double> intervals_ms;
    std::vector<double> beat_times_s;

    std::size_t size() const { return intervals_ms.size(); }
    void validate() const;
};

IbiSequence ibi_from_beat_times(std::vector<double> beat_times_s);
// Synthesizes beat times by cumulative summation starting at t = 0.
IbiSequence ibi_from_intervals(std::vector<double> intervals_ms);

/// The five irregularity features for one recording. f4 is integer-valued.
struct FeatureVector {
    double f1 = 0.0;  // ms
    double f2 = 0.0;  // nats
    double f3 = 0.0;  // dimensionless, >= 0
    double f4 = 0.0;  // graph hops, integer >= 0
    double f5 = 0.0;  // nats, <= 0

    std::array<double, 5> to_array() const { return {f1, f2, f3, f4, f5}; }
    static FeatureVector from_array(const std::array<double, 5>& a);
};

inline constexpr std::array<const char*, 5> kFeatureNames = {"f1", "f2", "f3", "f4", "f5"};

}  // namespace afib

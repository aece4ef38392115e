#include "afib/types.hpp"

#include <cmath>

namespace afib {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyRecording: return "EmptyRecording";
        case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
        case ErrorCode::InvalidBand: return "InvalidBand";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::TooFewBeats: return "TooFewBeats";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::NonPositiveInterval: return "NonPositiveInterval";
        case ErrorCode::NoEdges: return "NoEdges";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::UndefinedMetric: return "UndefinedMetric";
        case ErrorCode::TooFewPerClass: return "TooFewPerClass";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::InvalidRate: return "InvalidRate";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

bool is_data_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError:
        case ErrorCode::FormatError:
        case ErrorCode::EmptyRecording:
        case ErrorCode::NonMonotonicTime:
            return true;
        default:
            return false;
    }
}

double RawRecording::duration_s() const {
    if (samples.size() < 2) return 0.0;
    return samples.back().t_s - samples.front().t_s;
}

void RawRecording::validate() const {
    if (samples.size() < 2) {
        throw Error(ErrorCode::EmptyRecording, "recording has fewer than 2 samples");
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].t_s > samples[i - 1].t_s)) {
            throw Error(ErrorCode::NonMonotonicTime,
                        "sample times must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

double SampledSignal::duration_s() const {
    if (values.size() < 2 || rate_hz <= 0.0) return 0.0;
    return static_cast<double>(values.size() - 1) / rate_hz;
}

void IbiSequence::validate() const {
    if (beat_times_s.size() != intervals_ms.size() + 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "beat_times_s must have exactly one more element than intervals_ms");
    }
    for (std::size_t j = 0; j < intervals_ms.size(); ++j) {
        if (!(intervals_ms[j] > 0.0)) {
            throw Error(ErrorCode::NonPositiveInterval,
                        "interval " + std::to_string(j) + " is not positive");
        }
        const double from_times = (beat_times_s[j + 1] - beat_times_s[j]) * 1000.0;
        if (std::fabs(from_times - intervals_ms[j]) > 1e-9) {
            throw Error(ErrorCode::InvalidArgument,
                        "intervals_ms and beat_times_s disagree at index " + std::to_string(j));
        }
    }
}

IbiSequence ibi_from_beat_times(std::vector<double> beat_times_s) {
    if (beat_times_s.size() < 2) {
        throw Error(ErrorCode::TooFewBeats, "need at least 2 beat times");
    }
    IbiSequence out;
    out.intervals_ms.reserve(beat_times_s.size() - 1);
    for (std::size_t j = 1; j < beat_times_s.size(); ++j) {
        const double dt_ms = (beat_times_s[j] - beat_times_s[j - 1]) * 1000.0;
        if (!(dt_ms > 0.0)) {
            throw Error(ErrorCode::NonMonotonicTime, "beat times must be strictly increasing");
        }
        out.intervals_ms.push_back(dt_ms);
    }
    out.beat_times_s = std::move(beat_times_s);
    return out;
}

IbiSequence ibi_from_intervals(std::vector<double> intervals_ms) {
    if (intervals_ms.empty()) {
        throw Error(ErrorCode::SeriesTooShort, "empty interval sequence");
    }
    IbiSequence out;
    out.beat_times_s.reserve(intervals_ms.size() + 1);
    out.beat_times_s.push_back(0.0);
    double t = 0.0;
    for (double iv : intervals_ms) {
        if (!(iv > 0.0)) {
            throw Error(ErrorCode::NonPositiveInterval, "intervals must be positive");
        }
        t += iv / 1000.0;
        out.beat_times_s.push_back(t);
    }
    out.intervals_ms = std::move(intervals_ms);
    return out;
}

FeatureVector FeatureVector::from_array(const std::array<double, 5>& a) {
    return FeatureVector{a[0], a[1], a[2], a[3], a[4]};
}

}  // namespace afib

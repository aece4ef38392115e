#include "afib/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "afib/stats.hpp"

namespace afib {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRefractoryS = 0.25;

struct Biquad {
    double b0, b1, b2, a1, a2;
};

// Bilinear transform with frequency prewarping.
Biquad butter2_lowpass(double fc_hz, double fs_hz) {
    const double w = std::tan(kPi * fc_hz / fs_hz);
    const double w2 = w * w;
    const double d = 1.0 + std::sqrt(2.0) * w + w2;
    return {w2 / d, 2.0 * w2 / d, w2 / d, 2.0 * (w2 - 1.0) / d,
            (1.0 - std::sqrt(2.0) * w + w2) / d};
}

Biquad butter2_highpass(double fc_hz, double fs_hz) {
    const double w = std::tan(kPi * fc_hz / fs_hz);
    const double w2 = w * w;
    const double d = 1.0 + std::sqrt(2.0) * w + w2;
    return {1.0 / d, -2.0 / d, 1.0 / d, 2.0 * (w2 - 1.0) / d,
            (1.0 - std::sqrt(2.0) * w + w2) / d};
}

// Direct form II transposed, zero initial state.
void filter_in_place(const Biquad& q, std::vector<double>& x) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : x) {
        const double in = v;
        const double out = q.b0 * in + z1;
        z1 = q.b1 * in - q.a1 * out + z2;
        z2 = q.b2 * in - q.a2 * out;
        v = out;
    }
}

// Forward-backward filtering with mirror padding at both ends; the pad
// absorbs the start-up transients of both passes, and mirroring keeps a
// peak on the first or last sample a genuine local maximum.
std::vector<double> filtfilt(const Biquad& q, const std::vector<double>& x, std::size_t pad_len) {
    const std::size_t n = x.size();
    pad_len = std::min(pad_len, n - 1);
    std::vector<double> ext;
    ext.reserve(n + 2 * pad_len);
    for (std::size_t i = pad_len; i >= 1; --i) ext.push_back(x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad_len; ++i) ext.push_back(x[n - 1 - i]);

    filter_in_place(q, ext);
    std::reverse(ext.begin(), ext.end());
    filter_in_place(q, ext);
    std::reverse(ext.begin(), ext.end());

    return {ext.begin() + static_cast<std::ptrdiff_t>(pad_len),
            ext.begin() + static_cast<std::ptrdiff_t>(pad_len + n)};
}

// Local maxima, boundary-inclusive so beats at the very edges of a recording
// are still reported. Plateaus count once, at their first index.
std::vector<std::size_t> local_maxima(const std::vector<double>& x) {
    std::vector<std::size_t> idx;
    const std::size_t n = x.size();
    if (n < 2) return idx;
    if (x[0] > x[1]) idx.push_back(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (x[i] > x[i - 1] && x[i] >= x[i + 1]) idx.push_back(i);
    }
    if (x[n - 1] > x[n - 2]) idx.push_back(n - 1);
    return idx;
}

// Greedy refractory enforcement: candidates arrive in time order; one inside
// the refractory window replaces the previous beat only if it scores higher.
std::vector<std::size_t> apply_refractory(const std::vector<std::size_t>& candidates,
                                          const std::vector<double>& score, double fs_hz) {
    const double min_gap = kRefractoryS * fs_hz;
    std::vector<std::size_t> beats;
    for (std::size_t c : candidates) {
        if (beats.empty() ||
            static_cast<double>(c) - static_cast<double>(beats.back()) >= min_gap) {
            beats.push_back(c);
        } else if (score[c] > score[beats.back()]) {
            beats.back() = c;
        }
    }
    return beats;
}

std::vector<double> rolling_median(const std::vector<double>& x, std::size_t half_window) {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    std::vector<double> buf;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > half_window ? i - half_window : 0;
        const std::size_t hi = std::min(n - 1, i + half_window);
        buf.assign(x.begin() + static_cast<std::ptrdiff_t>(lo),
                   x.begin() + static_cast<std::ptrdiff_t>(hi + 1));
        const std::size_t mid = buf.size() / 2;
        std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
        double med = buf[mid];
        if (buf.size() % 2 == 0) {
            const double below =
                *std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid));
            med = 0.5 * (med + below);
        }
        out[i] = med;
    }
    return out;
}

std::vector<double> detect_ppg(const SampledSignal& sig) {
    const auto& x = sig.values;
    const double fs = sig.rate_hz;
    const auto half_window = static_cast<std::size_t>(std::lround(1.5 * fs));

    const std::vector<double> med = rolling_median(x, half_window);
    std::vector<double> abs_dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) abs_dev[i] = std::fabs(x[i] - med[i]);
    const std::vector<double> mad = rolling_median(abs_dev, half_window);

    std::vector<std::size_t> candidates;
    for (std::size_t i : local_maxima(x)) {
        if (x[i] > med[i] + 2.0 * mad[i]) candidates.push_back(i);
    }
    const auto beats = apply_refractory(candidates, x, fs);

    std::vector<double> times;
    times.reserve(beats.size());
    for (std::size_t b : beats) times.push_back(static_cast<double>(b) / fs);
    return times;
}

std::vector<double> detect_ecg(const SampledSignal& sig) {
    const auto& x = sig.values;
    const double fs = sig.rate_hz;
    const std::size_t n = x.size();

    std::vector<double> sq(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d = 0.5 * (x[i + 1] - x[i - 1]) * fs;
        sq[i] = d * d;
    }

    // Centered moving-window integration over a QRS-wide window.
    auto w_half = static_cast<std::size_t>(std::lround(0.075 * fs));
    w_half = std::max<std::size_t>(w_half, 1);
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sq[i];
    std::vector<double> mwi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > w_half ? i - w_half : 0;
        const std::size_t hi = std::min(n - 1, i + w_half);
        mwi[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }

    // Running signal/noise peak estimates seeded from the first 2 seconds.
    const auto init_len = std::min(n, static_cast<std::size_t>(std::lround(2.0 * fs)) + 1);
    double spk = *std::max_element(mwi.begin(), mwi.begin() + static_cast<std::ptrdiff_t>(init_len));
    double npk = 0.5 *
                 std::accumulate(mwi.begin(), mwi.begin() + static_cast<std::ptrdiff_t>(init_len),
                                 0.0) /
                 static_cast<double>(init_len);
    npk = std::min(npk, spk);

    std::vector<std::size_t> candidates;
    for (std::size_t i : local_maxima(mwi)) {
        const double thr = npk + 0.25 * (spk - npk);
        if (mwi[i] > thr) {
            candidates.push_back(i);
            spk = 0.125 * mwi[i] + 0.875 * spk;
        } else {
            npk = 0.125 * mwi[i] + 0.875 * npk;
        }
    }
    auto beats = apply_refractory(candidates, mwi, fs);

    // Refine each beat to the energy peak of the waveform itself; the MWI
    // bump is flat-topped and its argmax is not the fiducial point.
    std::vector<double> energy(n);
    for (std::size_t i = 0; i < n; ++i) energy[i] = x[i] * x[i];
    const auto is_energy_max = [&](std::size_t i) {
        if (i == 0) return n >= 2 && energy[0] > energy[1];
        if (i + 1 == n) return energy[n - 1] > energy[n - 2];
        return energy[i] > energy[i - 1] && energy[i] >= energy[i + 1];
    };
    const std::size_t search = w_half + 2;
    std::vector<std::size_t> refined;
    for (std::size_t b : beats) {
        const std::size_t lo = b > search ? b - search : 0;
        const std::size_t hi = std::min(n - 1, b + search);
        std::size_t best = b;
        double best_val = -1.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            if (is_energy_max(i) && energy[i] > best_val) {
                best_val = energy[i];
                best = i;
            }
        }
        if (best_val < 0.0) continue;  // no energy peak near this MWI bump
        refined.push_back(best);
    }
    std::sort(refined.begin(), refined.end());
    refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
    refined = apply_refractory(refined, energy, fs);

    std::vector<double> times;
    times.reserve(refined.size());
    for (std::size_t b : refined) times.push_back(static_cast<double>(b) / fs);
    return times;
}

}  // namespace

SampledSignal resample_uniform(const RawRecording& rec, double target_rate_hz) {
    rec.validate();
    if (!(target_rate_hz > 0.0)) {
        throw Error(ErrorCode::InvalidRate, "target rate must be positive");
    }
    const double duration = rec.duration_s();
    if (duration < 2.0 / target_rate_hz) {
        throw Error(ErrorCode::InvalidArgument, "recording shorter than two output samples");
    }

    const auto count = static_cast<std::size_t>(std::floor(duration * target_rate_hz + 1e-9)) + 1;
    const double t0 = rec.samples.front().t_s;
    SampledSignal out;
    out.rate_hz = target_rate_hz;
    out.values.reserve(count);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = std::min(t0 + static_cast<double>(k) / target_rate_hz,
                                  rec.samples.back().t_s);
        while (seg + 2 < rec.samples.size() && rec.samples[seg + 1].t_s <= t) ++seg;
        const auto& a = rec.samples[seg];
        const auto& b = rec.samples[seg + 1];
        const double u = (t - a.t_s) / (b.t_s - a.t_s);
        out.values.push_back(a.v + u * (b.v - a.v));
    }
    return out;
}

Band default_band(SignalKind kind) {
    return kind == SignalKind::Ecg ? Band{0.5, 40.0} : Band{0.5, 8.0};
}

SampledSignal detrend_and_filter(const SampledSignal& sig, double low_hz, double high_hz) {
    if (sig.size() < 2 || sig.rate_hz <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "signal needs >= 2 samples and a positive rate");
    }
    if (!(low_hz > 0.0) || !(low_hz < high_hz) || !(high_hz < sig.rate_hz / 2.0)) {
        throw Error(ErrorCode::InvalidBand, "need 0 < low < high < rate/2");
    }

    // Least-squares line over sample index.
    const std::size_t n = sig.size();
    const double nd = static_cast<double>(n);
    const double mean_i = 0.5 * (nd - 1.0);
    const double mean_v = mean(sig.values);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double di = static_cast<double>(i) - mean_i;
        sxy += di * (sig.values[i] - mean_v);
        sxx += di * di;
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = sig.values[i] - mean_v - slope * (static_cast<double>(i) - mean_i);
    }

    const auto pad_for = [&](double fc) {
        return static_cast<std::size_t>(std::lround(3.0 * sig.rate_hz / fc));
    };
    y = filtfilt(butter2_highpass(low_hz, sig.rate_hz), y, pad_for(low_hz));
    y = filtfilt(butter2_lowpass(high_hz, sig.rate_hz), y, pad_for(high_hz));
    return {std::move(y), sig.rate_hz};
}

SampledSignal standardize(const SampledSignal& sig) {
    if (sig.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "standardize needs >= 2 samples");
    }
    const double m = mean(sig.values);
    const double var = population_variance(sig.values);
    if (var <= 0.0) {
        throw Error(ErrorCode::ZeroVariance, "signal has zero variance");
    }
    const double inv_sd = 1.0 / std::sqrt(var);
    SampledSignal out;
    out.rate_hz = sig.rate_hz;
    out.values.reserve(sig.size());
    for (double v : sig.values) out.values.push_back((v - m) * inv_sd);
    return out;
}

std::vector<double> detect_beats(const SampledSignal& sig, SignalKind kind) {
    if (sig.rate_hz <= 0.0 || sig.duration_s() < 2.0) {
        throw Error(ErrorCode::TooFewBeats, "signal shorter than 2 s");
    }
    const auto times = kind == SignalKind::Ecg ? detect_ecg(sig) : detect_ppg(sig);
    if (times.size() < 2) {
        throw Error(ErrorCode::TooFewBeats, "fewer than 2 beats detected");
    }
    return times;
}

IbiSequence intervals_from_beats(const std::vector<double>& beat_times_s,
                                 double min_interval_ms, double max_interval_ms) {
    if (beat_times_s.size() < 3) {
        throw Error(ErrorCode::TooFewBeats, "need at least 3 beat times");
    }
    for (std::size_t i = 1; i < beat_times_s.size(); ++i) {
        if (!(beat_times_s[i] > beat_times_s[i - 1])) {
            throw Error(ErrorCode::NonMonotonicTime, "beat times must be strictly increasing");
        }
    }

    // Pass 1: drop the later beat of any too-short interval.
    std::vector<double> kept;
    kept.push_back(beat_times_s.front());
    for (std::size_t i = 1; i < beat_times_s.size(); ++i) {
        if ((beat_times_s[i] - kept.back()) * 1000.0 >= min_interval_ms) {
            kept.push_back(beat_times_s[i]);
        }
    }

    // Pass 2: split at too-long intervals, keep the longest contiguous run.
    std::size_t best_lo = 0, best_len = 1, run_lo = 0;
    for (std::size_t i = 1; i <= kept.size(); ++i) {
        const bool gap =
            i == kept.size() || (kept[i] - kept[i - 1]) * 1000.0 > max_interval_ms;
        if (gap) {
            if (i - run_lo > best_len) {
                best_len = i - run_lo;
                best_lo = run_lo;
            }
            run_lo = i;
        }
    }

    if (best_len < 3) {
        throw Error(ErrorCode::TooFewBeats, "fewer than 3 plausible beats remain");
    }
    return ibi_from_beat_times({kept.begin() + static_cast<std::ptrdiff_t>(best_lo),
                                kept.begin() + static_cast<std::ptrdiff_t>(best_lo + best_len)});
}

IbiSequence ibis_from_recording(const RawRecording& rec, const PreprocessOptions& opts) {
    double rate = opts.target_rate_hz;
    if (rate <= 0.0) rate = rec.nominal_rate_hz;
    if (rate <= 0.0) rate = rec.kind == SignalKind::Ecg ? 250.0 : 30.0;

    const Band def = default_band(rec.kind);
    const double low = opts.low_hz > 0.0 ? opts.low_hz : def.low_hz;
    double high = opts.high_hz > 0.0 ? opts.high_hz : def.high_hz;
    high = std::min(high, 0.45 * rate);  // keep the corner below Nyquist

    SampledSignal sig = resample_uniform(rec, rate);
    sig = detrend_and_filter(sig, low, high);
    sig = standardize(sig);
    const auto beats = detect_beats(sig, rec.kind);
    return intervals_from_beats(beats, opts.min_interval_ms, opts.max_interval_ms);
}

}  // namespace afib

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "afib/classifier.hpp"
#include "afib/eval.hpp"
#include "afib/features.hpp"
#include "afib/hvg.hpp"
#include "afib/io.hpp"
#include "afib/preprocess.hpp"
#include "afib/synth.hpp"

namespace py = pybind11;
using namespace afib;

namespace {

RawRecording make_recording(const std::vector<double>& times, const std::vector<double>& values,
                            SignalKind kind, double nominal_rate_hz) {
    if (times.size() != values.size()) {
        throw Error(ErrorCode::InvalidArgument, "times and values differ in length");
    }
    RawRecording rec;
    rec.kind = kind;
    rec.nominal_rate_hz = nominal_rate_hz;
    rec.samples.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) rec.samples.push_back({times[i], values[i]});
    return rec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heart-beat-interval irregularity features and AFib screening";

    py::register_exception<Error>(m, "Error");

    py::enum_<SignalKind>(m, "SignalKind")
        .value("ECG", SignalKind::Ecg)
        .value("PPG", SignalKind::Ppg);
    py::enum_<Rhythm>(m, "Rhythm")
        .value("SINUS", Rhythm::Sinus)
        .value("AFIB", Rhythm::AFib);

    py::class_<SampledSignal>(m, "SampledSignal")
        .def(py::init([](std::vector<double> values, double rate_hz) {
                 return SampledSignal{std::move(values), rate_hz};
             }),
             py::arg("values"), py::arg("rate_hz"))
        .def_readonly("values", &SampledSignal::values)
        .def_readonly("rate_hz", &SampledSignal::rate_hz)
        .def("__len__", &SampledSignal::size);

    py::class_<IbiSequence>(m, "IbiSequence")
        .def_readonly("intervals_ms", &IbiSequence::intervals_ms)
        .def_readonly("beat_times_s", &IbiSequence::beat_times_s)
        .def("__len__", &IbiSequence::size);
    m.def("ibi_from_intervals", &ibi_from_intervals, py::arg("intervals_ms"));
    m.def("ibi_from_beat_times", &ibi_from_beat_times, py::arg("beat_times_s"));

    py::class_<FeatureVector>(m, "FeatureVector")
        .def_readonly("f1", &FeatureVector::f1)
        .def_readonly("f2", &FeatureVector::f2)
        .def_readonly("f3", &FeatureVector::f3)
        .def_readonly("f4", &FeatureVector::f4)
        .def_readonly("f5", &FeatureVector::f5)
        .def("to_list", [](const FeatureVector& f) {
            const auto a = f.to_array();
            return std::vector<double>(a.begin(), a.end());
        });

    // preprocessing
    m.def(
        "resample_uniform",
        [](const std::vector<double>& times, const std::vector<double>& values, double rate,
           SignalKind kind) {
            return resample_uniform(make_recording(times, values, kind, 0.0), rate);
        },
        py::arg("times_s"), py::arg("values"), py::arg("target_rate_hz"),
        py::arg("kind") = SignalKind::Ppg);
    m.def("detrend_and_filter", &detrend_and_filter, py::arg("signal"), py::arg("low_hz"),
          py::arg("high_hz"));
    m.def("standardize", &standardize, py::arg("signal"));
    m.def("detect_beats", &detect_beats, py::arg("signal"), py::arg("kind"));
    m.def("intervals_from_beats", &intervals_from_beats, py::arg("beat_times_s"),
          py::arg("min_interval_ms") = 250.0, py::arg("max_interval_ms") = 3000.0);
    m.def(
        "ibis_from_signal",
        [](const std::vector<double>& times, const std::vector<double>& values, SignalKind kind,
           double rate) {
            PreprocessOptions opts;
            opts.target_rate_hz = rate;
            return ibis_from_recording(make_recording(times, values, kind, rate), opts);
        },
        py::arg("times_s"), py::arg("values"), py::arg("kind"), py::arg("rate_hz") = 0.0);

    // features
    m.def("f1_sd_derivative", &f1_sd_derivative, py::arg("ibi"), py::arg("order") = 5);
    m.def("f2_histogram_entropy", &f2_histogram_entropy, py::arg("ibi"), py::arg("bins") = 2);
    m.def("f3_rayleigh_resemblance", &f3_rayleigh_resemblance, py::arg("ibi"));
    m.def("rayleigh_sigma_ml", [](const IbiSequence& ibi) {
        const RayleighFit fit = rayleigh_sigma_ml(ibi);
        return py::make_tuple(fit.sigma_ml_ms, fit.grid_len);
    });
    m.def("silverman_bandwidth", &silverman_bandwidth, py::arg("ibi"));
    m.def("kde_density",
          py::overload_cast<const IbiSequence&, double>(&kde_density), py::arg("ibi"),
          py::arg("x_ms"));
    m.def(
        "extract_features",
        [](const IbiSequence& ibi, int deriv_order, int bins) {
            return extract_features(ibi, FeatureOptions{deriv_order, bins});
        },
        py::arg("ibi"), py::arg("deriv_order") = 5, py::arg("bins") = 2);

    // visibility graph
    py::class_<HvGraph>(m, "HvGraph")
        .def_readonly("vertex_count", &HvGraph::vertex_count)
        .def_readonly("edges", &HvGraph::edges)
        .def_readonly("degrees", &HvGraph::degrees);
    m.def("build_hvg", py::overload_cast<const std::vector<double>&>(&build_hvg),
          py::arg("values"));
    m.def("hvg_radius", [](const std::vector<double>& values) {
        return radius(build_hvg(values));
    });
    m.def("hvg_disassortative_entropy", [](const std::vector<double>& values) {
        return mixing_entropy(mixing_matrix(build_hvg(values)));
    });
    m.def("mixing_matrix", [](const HvGraph& g) {
        py::dict out;
        for (const auto& [degrees, e] : mixing_matrix(g).entries) {
            out[py::make_tuple(degrees.first, degrees.second)] = e;
        }
        return out;
    });

    // classifier
    py::class_<LogisticModel>(m, "LogisticModel")
        .def_readonly("weights", &LogisticModel::weights)
        .def_readonly("intercept", &LogisticModel::intercept)
        .def_readonly("feature_means", &LogisticModel::feature_means)
        .def_readonly("feature_stds", &LogisticModel::feature_stds)
        .def_readonly("threshold", &LogisticModel::threshold)
        .def_readonly("l2", &LogisticModel::l2);
    m.def(
        "fit_logistic",
        [](const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
           double l2, double threshold) {
            FitOptions opts;
            opts.l2 = l2;
            opts.threshold = threshold;
            return fit_logistic(LabeledSet{features, labels}, opts);
        },
        py::arg("features"), py::arg("labels"), py::arg("l2") = 1.0, py::arg("threshold") = 0.5);
    m.def("predict_proba", &predict_proba, py::arg("model"), py::arg("features"));
    m.def("classify", &classify, py::arg("model"), py::arg("features"));
    m.def("save_model", [](const std::string& path, const LogisticModel& model) {
        save_model_json(path, model);
    });
    m.def("load_model", [](const std::string& path) { return load_model_json(path); });

    // evaluation
    m.def("roc_auc", [](const std::vector<double>& scores, const std::vector<int>& labels) {
        const RocCurve curve = roc_auc(scores, labels);
        std::vector<std::tuple<double, double, double>> points;
        points.reserve(curve.points.size());
        for (const auto& p : curve.points) points.emplace_back(p.threshold, p.fpr, p.tpr);
        return py::make_tuple(curve.auc, points);
    });
    m.def(
        "kfold_cv",
        [](const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
           int k, double l2, double threshold, std::uint64_t seed) {
            const CvResult cv = kfold_cv(LabeledSet{features, labels},
                                         CvOptions{k, l2, threshold, seed});
            py::dict out;
            out["pooled_auc"] = cv.pooled_auc;
            out["sensitivity"] = cv.pooled_metrics.sensitivity;
            out["specificity"] = cv.pooled_metrics.specificity;
            out["accuracy"] = cv.pooled_metrics.accuracy;
            out["oof_scores"] = cv.oof_scores;
            return out;
        },
        py::arg("features"), py::arg("labels"), py::arg("k") = 5, py::arg("l2") = 1.0,
        py::arg("threshold") = 0.5, py::arg("seed") = 1);
    m.def(
        "forward_feature_selection",
        [](const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
           int k, double l2, std::uint64_t seed) {
            const SelectionResult sel = forward_feature_selection(
                LabeledSet{features, labels}, CvOptions{k, l2, 0.5, seed});
            std::vector<std::pair<std::size_t, double>> steps;
            for (const auto& s : sel.steps) steps.emplace_back(s.feature, s.auc);
            return py::make_tuple(sel.baseline_auc, steps);
        },
        py::arg("features"), py::arg("labels"), py::arg("k") = 5, py::arg("l2") = 1.0,
        py::arg("seed") = 1);

    // synthetic data
    m.def(
        "gen_ibis",
        [](Rhythm kind, double duration_s, double mean_ibi_ms, double variability_ms,
           std::uint64_t seed) {
            return gen_ibis(RhythmSpec{kind, duration_s, mean_ibi_ms, variability_ms, seed});
        },
        py::arg("kind"), py::arg("duration_s") = 30.0, py::arg("mean_ibi_ms") = 800.0,
        py::arg("variability_ms") = 40.0, py::arg("seed") = 1);
    m.def(
        "gen_waveform",
        [](const IbiSequence& ibi, SignalKind kind, double rate_hz, double snr_db,
           double drift_amplitude, std::uint64_t seed) {
            WaveformOptions opts;
            opts.snr_db = snr_db;
            opts.drift_amplitude = drift_amplitude;
            opts.seed = seed;
            const SynthRecording rec = gen_waveform(ibi, kind, rate_hz, opts);
            std::vector<double> times, values;
            times.reserve(rec.recording.samples.size());
            values.reserve(rec.recording.samples.size());
            for (const auto& s : rec.recording.samples) {
                times.push_back(s.t_s);
                values.push_back(s.v);
            }
            return py::make_tuple(times, values, rec.beat_times_s);
        },
        py::arg("ibi"), py::arg("kind"), py::arg("rate_hz"),
        py::arg("snr_db") = std::numeric_limits<double>::infinity(),
        py::arg("drift_amplitude") = 0.0, py::arg("seed") = 1);
}

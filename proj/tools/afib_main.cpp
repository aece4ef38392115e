#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afib/features.hpp"
#include "afib/hvg.hpp"
#include "afib/io.hpp"
#include "afib/preprocess.hpp"
#include "afib/synth.hpp"

namespace fs = std::filesystem;

namespace {

afib::SignalKind parse_kind(const std::string& kind) {
    if (kind == "ecg") return afib::SignalKind::Ecg;
    if (kind == "ppg") return afib::SignalKind::Ppg;
    throw afib::Error(afib::ErrorCode::InvalidArgument, "kind must be 'ecg' or 'ppg'");
}

double default_rate(afib::SignalKind kind) {
    return kind == afib::SignalKind::Ecg ? 250.0 : 30.0;
}

// Signal CSVs carry a .csv extension; anything else is an interval file.
afib::IbiSequence load_ibis(const fs::path& path, afib::SignalKind kind, double rate_hz) {
    if (path.extension() == ".csv") {
        const auto rec = afib::read_signal_csv(path, kind, rate_hz);
        afib::PreprocessOptions opts;
        opts.target_rate_hz = rate_hz;
        return afib::ibis_from_recording(rec, opts);
    }
    return afib::ibi_from_intervals(afib::read_intervals(path));
}

std::vector<fs::path> list_recordings(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.filename() == "manifest.csv") continue;
        if (p.extension() == ".csv" || p.extension() == ".txt") files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw afib::Error(afib::ErrorCode::IoError,
                          "no .csv or .txt recordings in " + dir.string());
    }
    return files;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
    } else {
        afib::write_file_atomic(output_path, text);
    }
}

struct SynthArgs {
    std::string output_dir;
    int count = 0;
    std::uint64_t seed = 0;
    std::string kind = "ppg";
    double rate = 0.0;
    std::string format = "intervals";
    double duration = 30.0;
    double mean_ibi = 800.0;
    double variability = 40.0;
    double afib_fraction = 0.5;
    double snr_db = std::numeric_limits<double>::infinity();
    double drift = 0.0;
};

int run_synth(const SynthArgs& a) {
    if (a.count < 1 || a.afib_fraction < 0.0 || a.afib_fraction > 1.0) {
        throw afib::Error(afib::ErrorCode::InvalidSpec,
                          "count must be >= 1 and afib-fraction in [0,1]");
    }
    const afib::SignalKind kind = parse_kind(a.kind);
    const double rate = a.rate > 0.0 ? a.rate : default_rate(kind);
    const bool signals = a.format == "signals";
    if (!signals && a.format != "intervals") {
        throw afib::Error(afib::ErrorCode::InvalidArgument,
                          "format must be 'intervals' or 'signals'");
    }

    fs::create_directories(a.output_dir);
    const int n_sinus = a.count - static_cast<int>(std::lround(a.count * a.afib_fraction));

    std::vector<std::pair<std::string, int>> manifest;
    for (int i = 0; i < a.count; ++i) {
        afib::RhythmSpec spec;
        spec.kind = i < n_sinus ? afib::Rhythm::Sinus : afib::Rhythm::AFib;
        spec.duration_s = a.duration;
        spec.mean_ibi_ms = a.mean_ibi;
        spec.variability_ms = a.variability;
        spec.seed = a.seed + static_cast<std::uint64_t>(i);
        const afib::IbiSequence ibi = afib::gen_ibis(spec);

        char name[32];
        std::snprintf(name, sizeof(name), "rec_%04d.%s", i + 1, signals ? "csv" : "txt");
        const fs::path path = fs::path(a.output_dir) / name;
        if (signals) {
            afib::WaveformOptions wopts;
            wopts.snr_db = a.snr_db;
            wopts.drift_amplitude = a.drift;
            wopts.seed = spec.seed;
            afib::write_signal_csv(path, afib::gen_waveform(ibi, kind, rate, wopts).recording);
        } else {
            afib::write_intervals(path, ibi.intervals_ms);
        }
        manifest.emplace_back(name, spec.kind == afib::Rhythm::AFib ? 1 : 0);
    }
    afib::write_file_atomic(fs::path(a.output_dir) / "manifest.csv",
                            afib::manifest_csv_text(manifest));
    return 0;
}

struct ExtractArgs {
    std::string input;
    std::string output;
    std::string kind = "ppg";
    double rate = 0.0;
    int bins = 2;
    int deriv_order = 5;
    std::string labels_path;
    std::string hvg_edges_path;
};

int run_extract(const ExtractArgs& a) {
    const afib::SignalKind kind = parse_kind(a.kind);
    const double rate = a.rate > 0.0 ? a.rate : default_rate(kind);
    const afib::FeatureOptions fopts{a.deriv_order, a.bins};

    std::map<std::string, int> labels;
    if (!a.labels_path.empty()) {
        for (const auto& [file, label] : afib::read_manifest(a.labels_path)) {
            labels[file] = label;
        }
    }

    afib::FeatureTable table;
    table.feature_names.assign(afib::kFeatureNames.begin(), afib::kFeatureNames.end());

    const fs::path input(a.input);
    const bool batch = fs::is_directory(input);
    const auto files = batch ? list_recordings(input) : std::vector<fs::path>{input};
    if (!a.hvg_edges_path.empty() && batch) {
        throw afib::Error(afib::ErrorCode::InvalidArgument,
                          "--hvg-edges needs a single input file");
    }

    for (const auto& file : files) {
        const afib::IbiSequence ibi = load_ibis(file, kind, rate);
        const afib::FeatureVector fv = afib::extract_features(ibi, fopts);
        table.rows.push_back({fv.f1, fv.f2, fv.f3, fv.f4, fv.f5});
        if (batch) table.files.push_back(file.filename().string());
        if (!labels.empty()) {
            const auto it = labels.find(file.filename().string());
            if (it == labels.end()) {
                throw afib::Error(afib::ErrorCode::FormatError,
                                  file.filename().string() + " is missing from the manifest");
            }
            table.labels.push_back(it->second);
        }
        if (!a.hvg_edges_path.empty()) {
            afib::write_edge_list(a.hvg_edges_path, afib::build_hvg(ibi));
        }
    }
    emit(afib::feature_csv_text(table), a.output);
    return 0;
}

struct TrainArgs {
    std::string input;
    std::string output;
    double l2 = 1.0;
    double threshold = 0.5;
};

int run_train(const TrainArgs& a) {
    const afib::FeatureTable table = afib::read_feature_csv(a.input);
    afib::FitOptions opts;
    opts.l2 = a.l2;
    opts.threshold = a.threshold;
    const afib::LogisticModel model = afib::fit_logistic(table.to_labeled_set(), opts);
    for (std::size_t j : model.degenerate_features) {
        std::cerr << "warning: feature '" << table.feature_names[j]
                  << "' has zero variance; its weight is uninformative\n";
    }
    afib::save_model_json(a.output, model);
    return 0;
}

struct ClassifyArgs {
    std::string input;
    std::string model_path;
    std::string output;
    std::string kind = "ppg";
    double rate = 0.0;
    int bins = 2;
    int deriv_order = 5;
};

int run_classify(const ClassifyArgs& a) {
    const afib::LogisticModel model = afib::load_model_json(a.model_path);
    const afib::SignalKind kind = parse_kind(a.kind);
    const double rate = a.rate > 0.0 ? a.rate : default_rate(kind);
    const afib::FeatureOptions fopts{a.deriv_order, a.bins};

    const fs::path input(a.input);
    const auto files =
        fs::is_directory(input) ? list_recordings(input) : std::vector<fs::path>{input};

    std::string out = "file,label,probability\n";
    for (const auto& file : files) {
        const afib::IbiSequence ibi = load_ibis(file, kind, rate);
        const afib::FeatureVector fv = afib::extract_features(ibi, fopts);
        const std::vector<double> row{fv.f1, fv.f2, fv.f3, fv.f4, fv.f5};
        const double proba = afib::predict_proba(model, row);
        out += file.filename().string();
        out += ',';
        out += afib::label_name(proba >= model.threshold ? 1 : 0);
        out += ',';
        out += afib::format_double(proba);
        out += '\n';
    }
    emit(out, a.output);
    return 0;
}

struct EvalArgs {
    std::string input;
    std::string output;
    std::string roc_output;
    int k = 5;
    double l2 = 1.0;
    double threshold = 0.5;
    std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& a) {
    const afib::FeatureTable table = afib::read_feature_csv(a.input);
    afib::CvOptions opts;
    opts.k = a.k;
    opts.l2 = a.l2;
    opts.threshold = a.threshold;
    opts.seed = a.seed;
    const afib::CvResult cv = afib::kfold_cv(table.to_labeled_set(), opts);
    emit(afib::metrics_csv_text(cv), a.output);
    if (!a.roc_output.empty()) {
        afib::write_file_atomic(a.roc_output, afib::roc_csv_text(cv.pooled_roc));
    }
    return 0;
}

struct SelectArgs {
    std::string input;
    std::string output;
    int k = 5;
    double l2 = 1.0;
    std::uint64_t seed = 0;
};

int run_select(const SelectArgs& a) {
    const afib::FeatureTable table = afib::read_feature_csv(a.input);
    afib::CvOptions opts;
    opts.k = a.k;
    opts.l2 = a.l2;
    opts.seed = a.seed;
    const afib::SelectionResult sel = afib::forward_feature_selection(table.to_labeled_set(), opts);

    std::string out = "step,feature,auc\n";
    out += "0,(none)," + afib::format_double(sel.baseline_auc) + '\n';
    for (std::size_t s = 0; s < sel.steps.size(); ++s) {
        out += std::to_string(s + 1);
        out += ',';
        out += table.feature_names[sel.steps[s].feature];
        out += ',';
        out += afib::format_double(sel.steps[s].auc);
        out += '\n';
    }
    emit(out, a.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AFib vs sinus-rhythm screening from short heart-beat recordings"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate labeled synthetic recordings");
    synth_cmd->add_option("--output", synth.output_dir, "Output directory")->required();
    synth_cmd->add_option("--count", synth.count, "Number of recordings")->required();
    synth_cmd->add_option("--seed", synth.seed, "Base seed; recording i uses seed + i")->required();
    synth_cmd->add_option("--kind", synth.kind, "Signal kind for --format signals (ecg|ppg)");
    synth_cmd->add_option("--rate", synth.rate, "Sampling rate in Hz (default 30 ppg, 250 ecg)");
    synth_cmd->add_option("--format", synth.format, "Output format (intervals|signals)");
    synth_cmd->add_option("--duration", synth.duration, "Recording duration in seconds");
    synth_cmd->add_option("--mean-ibi", synth.mean_ibi, "Mean inter-beat interval in ms");
    synth_cmd->add_option("--variability", synth.variability, "Interval variability in ms");
    synth_cmd->add_option("--afib-fraction", synth.afib_fraction, "Fraction of AFib recordings");
    synth_cmd->add_option("--snr", synth.snr_db, "Waveform SNR in dB (default noise-free)");
    synth_cmd->add_option("--drift", synth.drift, "Baseline drift amplitude");

    ExtractArgs extract;
    auto* extract_cmd =
        app.add_subcommand("extract", "Compute the 5-feature vector per recording");
    extract_cmd->add_option("--input", extract.input, "Recording file or directory")->required();
    extract_cmd->add_option("--output", extract.output, "Output CSV (default stdout)");
    extract_cmd->add_option("--kind", extract.kind, "Signal kind for .csv inputs (ecg|ppg)");
    extract_cmd->add_option("--rate", extract.rate, "Resampling rate in Hz");
    extract_cmd->add_option("--bins", extract.bins, "Histogram bins for f2");
    extract_cmd->add_option("--deriv-order", extract.deriv_order, "Difference order for f1");
    extract_cmd->add_option("--labels", extract.labels_path, "Manifest CSV to append labels");
    extract_cmd->add_option("--hvg-edges", extract.hvg_edges_path,
                            "Write the visibility-graph edge list (single input only)");

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Fit the logistic model");
    train_cmd->add_option("--input", train.input, "Labeled feature CSV")->required();
    train_cmd->add_option("--output", train.output, "Model JSON path")->required();
    train_cmd->add_option("--l2", train.l2, "L2 regularization strength");
    train_cmd->add_option("--threshold", train.threshold, "Decision threshold");

    ClassifyArgs classify;
    auto* classify_cmd = app.add_subcommand("classify", "Score recordings with a trained model");
    classify_cmd->add_option("--input", classify.input, "Recording file or directory")->required();
    classify_cmd->add_option("--model", classify.model_path, "Model JSON path")->required();
    classify_cmd->add_option("--output", classify.output, "Output CSV (default stdout)");
    classify_cmd->add_option("--kind", classify.kind, "Signal kind for .csv inputs (ecg|ppg)");
    classify_cmd->add_option("--rate", classify.rate, "Resampling rate in Hz");
    classify_cmd->add_option("--bins", classify.bins, "Histogram bins for f2");
    classify_cmd->add_option("--deriv-order", classify.deriv_order, "Difference order for f1");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Cross-validated metrics and ROC");
    eval_cmd->add_option("--input", eval.input, "Labeled feature CSV")->required();
    eval_cmd->add_option("--output", eval.output, "Metrics CSV (default stdout)");
    eval_cmd->add_option("--roc-output", eval.roc_output, "Pooled ROC CSV path");
    eval_cmd->add_option("--k", eval.k, "Number of folds");
    eval_cmd->add_option("--l2", eval.l2, "L2 regularization strength");
    eval_cmd->add_option("--threshold", eval.threshold, "Decision threshold");
    eval_cmd->add_option("--seed", eval.seed, "Fold-shuffle seed")->required();

    SelectArgs select;
    auto* select_cmd = app.add_subcommand("select", "Greedy wrapper feature selection");
    select_cmd->add_option("--input", select.input, "Labeled feature CSV")->required();
    select_cmd->add_option("--output", select.output, "Report CSV (default stdout)");
    select_cmd->add_option("--k", select.k, "Number of folds");
    select_cmd->add_option("--l2", select.l2, "L2 regularization strength");
    select_cmd->add_option("--seed", select.seed, "Fold-shuffle seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth_cmd->parsed()) return run_synth(synth);
        if (extract_cmd->parsed()) return run_extract(extract);
        if (train_cmd->parsed()) return run_train(train);
        if (classify_cmd->parsed()) return run_classify(classify);
        if (eval_cmd->parsed()) return run_eval(eval);
        if (select_cmd->parsed()) return run_select(select);
    } catch (const afib::Error& e) {
        std::cerr << "error: " << e.what() << " [" << afib::to_string(e.code()) << "]\n";
        return afib::is_data_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

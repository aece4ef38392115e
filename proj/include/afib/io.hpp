#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "afib/classifier.hpp"
#include "afib/eval.hpp"
#include "afib/hvg.hpp"
#include "afib/types.hpp"

namespace afib {

/// Shortest exact decimal form of v (17 significant digits), locale-free.
std::string format_double(double v);

/// Writes to a temporary sibling and renames, so readers never observe a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Signal CSV: header "t,v", time in seconds, value in arbitrary units.
RawRecording read_signal_csv(const std::filesystem::path& path, SignalKind kind,
                             double nominal_rate_hz = 0.0);
void write_signal_csv(const std::filesystem::path& path, const RawRecording& rec);

/// Interval file: one interval in milliseconds per line.
std::vector<double> read_intervals(const std::filesystem::path& path);
void write_intervals(const std::filesystem::path& path, const std::vector<double>& intervals_ms);

/// Edge list: "u v" per line, 1-based vertex indices.
void write_edge_list(const std::filesystem::path& path, const HvGraph& graph);

/// Feature CSV. Columns: optional leading "file", any number of numeric
/// feature columns, optional trailing "label" (0/1 or sinus/afib).
struct FeatureTable {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> files;  // empty when there is no file column
    std::vector<int> labels;         // empty when there is no label column

    bool has_files() const { return !files.empty(); }
    bool has_labels() const { return !labels.empty(); }
    LabeledSet to_labeled_set() const;
};

FeatureTable read_feature_csv(const std::filesystem::path& path);
std::string feature_csv_text(const FeatureTable& table);

/// Manifest CSV: header "file,label".
std::vector<std::pair<std::string, int>> read_manifest(const std::filesystem::path& path);
std::string manifest_csv_text(const std::vector<std::pair<std::string, int>>& entries);

int parse_label(const std::string& text);
const char* label_name(int label);

/// Model JSON: weights, intercept, means, stds, threshold, l2, format_version.
void save_model_json(const std::filesystem::path& path, const LogisticModel& model);
LogisticModel load_model_json(const std::filesystem::path& path);

/// Metrics CSV: "fold,sensitivity,specificity,accuracy,auc", one row per fold
/// plus a "pooled" row. ROC CSV: "threshold,fpr,tpr".
std::string metrics_csv_text(const CvResult& cv);
std::string roc_csv_text(const RocCurve& curve);

}  // namespace afib

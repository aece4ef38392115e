#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "afib/classifier.hpp"
#include "afib/types.hpp"

namespace afib {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

struct Metrics {
    double sensitivity = 0.0;
    double specificity = 0.0;
    double accuracy = 0.0;
};

ConfusionCounts confusion_counts(const std::vector<int>& labels,
                                 const std::vector<int>& predictions);

/// sensitivity = tp/(tp+fn), specificity = tn/(tn+fp), accuracy = (tp+tn)/n.
/// Both classes must be present in the labels.
Metrics confusion_metrics(const std::vector<int>& labels, const std::vector<int>& predictions);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Threshold sweep over the distinct scores (positive iff score >= threshold)
/// plus the all-negative point, so the curve runs from (0,0) to (1,1). The
/// AUC is the Mann-Whitney statistic, ties counted half.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct FoldMetrics {
    Metrics metrics;
    double auc = 0.0;
};

struct CvResult {
    std::vector<FoldMetrics> folds;
    std::vector<double> oof_scores;  // out-of-fold probability per sample
    std::vector<int> fold_of;        // fold index per sample
    RocCurve pooled_roc;
    Metrics pooled_metrics;
    double pooled_auc = 0.0;
};

struct CvOptions {
    int k = 5;
    double l2 = 1.0;
    double threshold = 0.5;
    std::uint64_t seed = 1;
};

/// Stratified k-fold cross-validation: a seeded shuffle per class, dealt
/// round-robin, so per-fold class ratios stay within one sample of global.
CvResult kfold_cv(const LabeledSet& data, const CvOptions& opts = {});

struct SelectionStep {
    std::size_t feature = 0;
    double auc = 0.0;
};

struct SelectionResult {
    double baseline_auc = 0.0;  // intercept-only model
    std::vector<SelectionStep> steps;
};

/// Greedy wrapper selection over feature columns: each step adds the
/// candidate with the best cross-validated pooled AUC, stopping when the
/// best improvement is <= min_improvement.
SelectionResult forward_feature_selection(const LabeledSet& data, const CvOptions& opts = {},
                                          double min_improvement = 1e-4);

}  // namespace afib

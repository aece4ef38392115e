#pragma once

#include <cstddef>
#include <vector>

#include "afib/types.hpp"

namespace afib {

/// Feature rows with binary labels (AFib = 1, sinus = 0).
struct LabeledSet {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.empty() ? 0 : features.front().size(); }
    void validate() const;
};

/// L2-regularized logistic regression. The training-set standardization is
/// stored in the model, so a serialized model is self-contained.
struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    std::vector<double> feature_means;
    std::vector<double> feature_stds;
    double threshold = 0.5;
    double l2 = 1.0;
    // Indices of zero-variance training features; their std was floored.
    std::vector<std::size_t> degenerate_features;
};

struct FitOptions {
    double l2 = 1.0;
    double threshold = 0.5;
    double grad_tolerance = 1e-8;  // infinity norm, intercept included
    int max_iterations = 10000;
};

struct FitTrace {
    std::vector<double> loss;  // one entry per accepted step, strictly decreasing
    double final_grad_inf_norm = 0.0;
    int iterations = 0;
};

/// Mean cross-entropy + (l2/2) * ||w||^2 (intercept unpenalized) over
/// already-standardized rows. Fills the gradient when requested.
double logistic_loss_grad(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          const std::vector<double>& w, double b, double l2,
                          std::vector<double>* grad_w = nullptr, double* grad_b = nullptr);

/// Full-batch gradient descent with a backtracking (Armijo) line search,
/// Barzilai-Borwein trial steps. Deterministic.
LogisticModel fit_logistic(const LabeledSet& data, const FitOptions& opts = {},
                           FitTrace* trace = nullptr);

/// P(AFib) for one raw (unstandardized) feature row.
double predict_proba(const LogisticModel& model, const std::vector<double>& x);

/// AFib iff predict_proba >= threshold.
Rhythm classify(const LogisticModel& model, const std::vector<double>& x);

}  // namespace afib

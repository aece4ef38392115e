#include "afib/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "afib/rng.hpp"

namespace afib {

namespace {

void fisher_yates(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.below(i)]);
    }
}

LabeledSet subset(const LabeledSet& data, const std::vector<std::size_t>& rows) {
    LabeledSet out;
    out.features.reserve(rows.size());
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        out.features.push_back(data.features[r]);
        out.labels.push_back(data.labels[r]);
    }
    return out;
}

LabeledSet select_columns(const LabeledSet& data, const std::vector<std::size_t>& cols) {
    LabeledSet out;
    out.labels = data.labels;
    out.features.reserve(data.features.size());
    for (const auto& row : data.features) {
        std::vector<double> r;
        r.reserve(cols.size());
        for (std::size_t c : cols) r.push_back(row[c]);
        out.features.push_back(std::move(r));
    }
    return out;
}

}  // namespace

ConfusionCounts confusion_counts(const std::vector<int>& labels,
                                 const std::vector<int>& predictions) {
    if (labels.size() != predictions.size()) {
        throw Error(ErrorCode::InvalidArgument, "labels and predictions differ in length");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            (predictions[i] == 1 ? c.tp : c.fn) += 1;
        } else {
            (predictions[i] == 1 ? c.fp : c.tn) += 1;
        }
    }
    return c;
}

Metrics confusion_metrics(const std::vector<int>& labels, const std::vector<int>& predictions) {
    const ConfusionCounts c = confusion_counts(labels, predictions);
    if (c.tp + c.fn == 0 || c.tn + c.fp == 0) {
        throw Error(ErrorCode::UndefinedMetric, "labels must contain both classes");
    }
    Metrics m;
    m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return m;
}

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw Error(ErrorCode::InvalidArgument, "scores and labels must match and be non-empty");
    }
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            throw Error(ErrorCode::InvalidArgument, "scores must be finite");
        }
        (labels[i] == 1 ? pos : neg) += 1;
    }
    if (pos == 0 || neg == 0) {
        throw Error(ErrorCode::SingleClass, "both classes required for a ROC curve");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        // Consume the whole tie group: threshold = s admits all of them.
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos)});
    }

    // Mann-Whitney via midranks: ties contribute half.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });
    double rank_sum_pos = 0.0;
    std::size_t j = 0;
    while (j < order.size()) {
        std::size_t j2 = j;
        while (j2 < order.size() && scores[order[j2]] == scores[order[j]]) ++j2;
        const double midrank = 0.5 * (static_cast<double>(j + 1) + static_cast<double>(j2));
        for (std::size_t t = j; t < j2; ++t) {
            if (labels[order[t]] == 1) rank_sum_pos += midrank;
        }
        j = j2;
    }
    const double p = static_cast<double>(pos);
    curve.auc = (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
    return curve;
}

CvResult kfold_cv(const LabeledSet& data, const CvOptions& opts) {
    data.validate();
    if (opts.k < 2) {
        throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
    }
    const auto k = static_cast<std::size_t>(opts.k);

    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
        (data.labels[i] == 1 ? pos_idx : neg_idx).push_back(i);
    }
    if (pos_idx.size() < k || neg_idx.size() < k) {
        throw Error(ErrorCode::TooFewPerClass, "each class needs at least k members");
    }

    Rng rng(opts.seed);
    fisher_yates(pos_idx, rng);
    fisher_yates(neg_idx, rng);

    CvResult result;
    result.fold_of.assign(data.size(), 0);
    for (std::size_t i = 0; i < pos_idx.size(); ++i) {
        result.fold_of[pos_idx[i]] = static_cast<int>(i % k);
    }
    for (std::size_t i = 0; i < neg_idx.size(); ++i) {
        result.fold_of[neg_idx[i]] = static_cast<int>(i % k);
    }

    result.oof_scores.assign(data.size(), 0.0);
    const FitOptions fit_opts{opts.l2, opts.threshold, 1e-8, 10000};
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < data.size(); ++i) {
            (result.fold_of[i] == static_cast<int>(f) ? test_rows : train_rows).push_back(i);
        }
        const LogisticModel model = fit_logistic(subset(data, train_rows), fit_opts);

        std::vector<double> fold_scores;
        std::vector<int> fold_labels, fold_preds;
        fold_scores.reserve(test_rows.size());
        for (std::size_t i : test_rows) {
            const double proba = predict_proba(model, data.features[i]);
            result.oof_scores[i] = proba;
            fold_scores.push_back(proba);
            fold_labels.push_back(data.labels[i]);
            fold_preds.push_back(proba >= opts.threshold ? 1 : 0);
        }
        FoldMetrics fm;
        fm.metrics = confusion_metrics(fold_labels, fold_preds);
        fm.auc = roc_auc(fold_scores, fold_labels).auc;
        result.folds.push_back(fm);
    }

    std::vector<int> pooled_preds(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        pooled_preds[i] = result.oof_scores[i] >= opts.threshold ? 1 : 0;
    }
    result.pooled_metrics = confusion_metrics(data.labels, pooled_preds);
    result.pooled_roc = roc_auc(result.oof_scores, data.labels);
    result.pooled_auc = result.pooled_roc.auc;
    return result;
}

SelectionResult forward_feature_selection(const LabeledSet& data, const CvOptions& opts,
                                          double min_improvement) {
    data.validate();
    const std::size_t d = data.dim();
    if (d == 0) {
        throw Error(ErrorCode::InvalidArgument, "candidate pool is empty");
    }

    SelectionResult result;
    result.baseline_auc = kfold_cv(select_columns(data, {}), opts).pooled_auc;

    std::vector<std::size_t> selected;
    std::vector<bool> used(d, false);
    double current = result.baseline_auc;
    while (selected.size() < d) {
        std::size_t best_col = d;
        double best_auc = -1.0;
        for (std::size_t c = 0; c < d; ++c) {
            if (used[c]) continue;
            auto cols = selected;
            cols.push_back(c);
            const double auc = kfold_cv(select_columns(data, cols), opts).pooled_auc;
            if (auc > best_auc) {
                best_auc = auc;
                best_col = c;
            }
        }
        if (best_col == d || best_auc <= current + min_improvement) break;
        used[best_col] = true;
        selected.push_back(best_col);
        result.steps.push_back({best_col, best_auc});
        current = best_auc;
    }
    return result;
}

}  // namespace afib

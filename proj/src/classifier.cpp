#include "afib/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace afib {

namespace {

constexpr double kStdFloor = 1e-12;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// ln(1 + exp(z)) without overflow.
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

}  // namespace

void LabeledSet::validate() const {
    if (features.size() != labels.size()) {
        throw Error(ErrorCode::InvalidArgument, "features and labels differ in length");
    }
    const std::size_t d = dim();
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
        }
        (labels[i] == 1 ? pos : neg) += 1;
        if (features[i].size() != d) {
            throw Error(ErrorCode::InvalidArgument, "ragged feature rows");
        }
        for (double v : features[i]) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteFeature, "non-finite feature value");
            }
        }
    }
    if (pos < 2 || neg < 2) {
        throw Error(ErrorCode::SingleClass, "need at least 2 samples of each class");
    }
}

double logistic_loss_grad(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          const std::vector<double>& w, double b, double l2,
                          std::vector<double>* grad_w, double* grad_b) {
    const std::size_t n = x.size();
    const std::size_t d = w.size();
    if (grad_w) grad_w->assign(d, 0.0);
    if (grad_b) *grad_b = 0.0;

    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = b;
        for (std::size_t j = 0; j < d; ++j) z += w[j] * x[i][j];
        loss += softplus(z) - static_cast<double>(y[i]) * z;
        if (grad_w || grad_b) {
            const double r = sigmoid(z) - static_cast<double>(y[i]);
            if (grad_w) {
                for (std::size_t j = 0; j < d; ++j) (*grad_w)[j] += r * x[i][j];
            }
            if (grad_b) *grad_b += r;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    loss *= inv_n;
    for (std::size_t j = 0; j < d; ++j) {
        loss += 0.5 * l2 * w[j] * w[j];
        if (grad_w) (*grad_w)[j] = (*grad_w)[j] * inv_n + l2 * w[j];
    }
    if (grad_b) *grad_b *= inv_n;
    return loss;
}

LogisticModel fit_logistic(const LabeledSet& data, const FitOptions& opts, FitTrace* trace) {
    data.validate();
    if (opts.l2 < 0.0 || !(opts.threshold > 0.0) || !(opts.threshold < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "l2 must be >= 0 and threshold in (0,1)");
    }

    const std::size_t n = data.size();
    const std::size_t d = data.dim();

    LogisticModel model;
    model.threshold = opts.threshold;
    model.l2 = opts.l2;
    model.feature_means.assign(d, 0.0);
    model.feature_stds.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += data.features[i][j];
        m /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dv = data.features[i][j] - m;
            var += dv * dv;
        }
        var /= static_cast<double>(n);
        model.feature_means[j] = m;
        double sd = std::sqrt(var);
        if (sd < kStdFloor) {
            sd = kStdFloor;
            model.degenerate_features.push_back(j);
        }
        model.feature_stds[j] = sd;
    }

    std::vector<std::vector<double>> xs(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            xs[i][j] = (data.features[i][j] - model.feature_means[j]) / model.feature_stds[j];
        }
    }

    std::vector<double> w(d, 0.0), g(d), g_prev(d), w_prev(d);
    double b = 0.0, gb = 0.0, gb_prev = 0.0, b_prev = 0.0;
    double loss = logistic_loss_grad(xs, data.labels, w, b, opts.l2, &g, &gb);
    if (trace) {
        trace->loss.clear();
        trace->loss.push_back(loss);
    }

    double step = 1.0;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        double ginf = std::fabs(gb);
        double gnorm2 = gb * gb;
        for (std::size_t j = 0; j < d; ++j) {
            ginf = std::max(ginf, std::fabs(g[j]));
            gnorm2 += g[j] * g[j];
        }
        if (ginf < opts.grad_tolerance) break;

        // Barzilai-Borwein trial step from the previous accepted move.
        if (iter > 0) {
            double ss = (b - b_prev) * (b - b_prev);
            double sy = (b - b_prev) * (gb - gb_prev);
            for (std::size_t j = 0; j < d; ++j) {
                const double s = w[j] - w_prev[j];
                ss += s * s;
                sy += s * (g[j] - g_prev[j]);
            }
            step = sy > 0.0 ? ss / sy : step * 2.0;
        }
        step = std::clamp(step, 1e-12, 1e6);

        w_prev = w;
        b_prev = b;
        g_prev = g;
        gb_prev = gb;

        // Armijo backtracking; each accepted step strictly decreases the loss.
        bool accepted = false;
        std::vector<double> w_try(d);
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j < d; ++j) w_try[j] = w[j] - step * g[j];
            const double b_try = b - step * gb;
            const double trial = logistic_loss_grad(xs, data.labels, w_try, b_try, opts.l2);
            if (trial <= loss - 1e-4 * step * gnorm2) {
                w = w_try;
                b = b_try;
                loss = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step at floating-point resolution

        logistic_loss_grad(xs, data.labels, w, b, opts.l2, &g, &gb);
        if (trace) trace->loss.push_back(loss);
    }

    if (trace) {
        double ginf = std::fabs(gb);
        for (double v : g) ginf = std::max(ginf, std::fabs(v));
        trace->final_grad_inf_norm = ginf;
        trace->iterations = iter;
    }

    model.weights = std::move(w);
    model.intercept = b;
    return model;
}

double predict_proba(const LogisticModel& model, const std::vector<double>& x) {
    if (x.size() != model.weights.size()) {
        throw Error(ErrorCode::InvalidArgument, "feature count does not match the model");
    }
    double z = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!std::isfinite(x[j])) {
            throw Error(ErrorCode::NonFiniteFeature, "non-finite feature value");
        }
        z += model.weights[j] * (x[j] - model.feature_means[j]) / model.feature_stds[j];
    }
    return sigmoid(z);
}

Rhythm classify(const LogisticModel& model, const std::vector<double>& x) {
    return predict_proba(model, x) >= model.threshold ? Rhythm::AFib : Rhythm::Sinus;
}

}  // namespace afib

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "afib/classifier.hpp"
#include "afib/io.hpp"
#include "afib/rng.hpp"
#include "oracles.hpp"

using namespace afib;

namespace {

// Two well-separated Gaussian blobs in the first feature; the rest is noise.
LabeledSet blob_data(std::size_t per_class, std::size_t dim, double gap, std::uint64_t seed) {
    Rng rng(seed);
    LabeledSet data;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const int label = i < per_class ? 0 : 1;
        std::vector<double> row(dim);
        row[0] = (label == 1 ? gap : -gap) + rng.normal();
        for (std::size_t j = 1; j < dim; ++j) row[j] = rng.normal();
        data.features.push_back(std::move(row));
        data.labels.push_back(label);
    }
    return data;
}

}  // namespace

TEST_CASE("perfectly separated data trains to 100% accuracy at threshold 0.5") {
    LabeledSet data = blob_data(20, 1, 6.0, 1);  // +-6 sigma blobs: fully separated
    FitOptions opts;
    opts.l2 = 1.0;
    const auto model = fit_logistic(data, opts);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(static_cast<int>(classify(model, data.features[i])) == data.labels[i]);
    }
}

TEST_CASE("flipping every label negates weights and intercept") {
    LabeledSet data = blob_data(25, 3, 1.5, 2);
    LabeledSet flipped = data;
    for (int& y : flipped.labels) y = 1 - y;

    const auto a = fit_logistic(data);
    const auto b = fit_logistic(flipped);
    for (std::size_t j = 0; j < a.weights.size(); ++j) {
        CHECK(a.weights[j] == doctest::Approx(-b.weights[j]).epsilon(1e-6));
    }
    CHECK(a.intercept == doctest::Approx(-b.intercept).epsilon(1e-6));
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(3);
    LabeledSet data = blob_data(15, 4, 1.0, 4);
    // The loss operates on standardized rows; exercise it directly.
    const auto& x = data.features;
    const auto& y = data.labels;
    const double l2 = 0.7;

    for (int point = 0; point < 20; ++point) {
        std::vector<double> theta(5);  // w0..w3, b
        for (auto& t : theta) t = rng.uniform(-2.0, 2.0);

        const auto loss_at = [&](const std::vector<double>& th) {
            const std::vector<double> w(th.begin(), th.begin() + 4);
            return logistic_loss_grad(x, y, w, th[4], l2);
        };
        const auto fd = oracle::finite_difference_gradient(loss_at, theta, 1e-5);

        std::vector<double> grad_w;
        double grad_b = 0.0;
        const std::vector<double> w(theta.begin(), theta.begin() + 4);
        logistic_loss_grad(x, y, w, theta[4], l2, &grad_w, &grad_b);

        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(std::fabs(grad_w[j] - fd[j]) <= 1e-6 * std::max(1.0, std::fabs(fd[j])));
        }
        CHECK(std::fabs(grad_b - fd[4]) <= 1e-6 * std::max(1.0, std::fabs(fd[4])));
    }
}

TEST_CASE("the loss decreases monotonically and the gradient converges") {
    LabeledSet data = blob_data(30, 5, 1.2, 5);
    FitTrace trace;
    fit_logistic(data, {}, &trace);
    REQUIRE(trace.loss.size() >= 2);
    for (std::size_t i = 1; i < trace.loss.size(); ++i) {
        CHECK(trace.loss[i] < trace.loss[i - 1]);
    }
    CHECK(trace.final_grad_inf_norm < 1e-8);
}

TEST_CASE("stronger regularization never grows the weight norm") {
    LabeledSet data = blob_data(30, 3, 2.0, 6);
    double prev_norm = std::numeric_limits<double>::infinity();
    for (double l2 : {0.01, 0.1, 0.5, 1.0, 5.0, 25.0}) {
        FitOptions opts;
        opts.l2 = l2;
        const auto model = fit_logistic(data, opts);
        double norm = 0.0;
        for (double w : model.weights) norm += w * w;
        CHECK(norm <= prev_norm + 1e-12);
        prev_norm = norm;
    }
}

TEST_CASE("fitting is deterministic, bit for bit") {
    LabeledSet data = blob_data(25, 5, 1.0, 7);
    const auto a = fit_logistic(data);
    const auto b = fit_logistic(data);
    CHECK(a.weights == b.weights);
    CHECK(a.intercept == b.intercept);
    CHECK(a.feature_means == b.feature_means);
    CHECK(a.feature_stds == b.feature_stds);
}

TEST_CASE("probability identities") {
    LogisticModel model;
    model.weights = {0.0, 0.0};
    model.feature_means = {0.0, 0.0};
    model.feature_stds = {1.0, 1.0};
    model.intercept = 0.0;

    SUBCASE("zero model scores one half everywhere") {
        CHECK(predict_proba(model, {3.0, -4.0}) == 0.5);
        CHECK(predict_proba(model, {-100.0, 55.0}) == 0.5);
        // Boundary rule: probability at the threshold classifies as AFib.
        CHECK(classify(model, {1.0, 1.0}) == Rhythm::AFib);
    }
    SUBCASE("strictly increasing in a positively weighted feature") {
        model.weights = {0.8, -0.3};
        double prev = 0.0;
        for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0, 5.0}) {
            const double p = predict_proba(model, {v, 1.0});
            CHECK(p > prev);
            prev = p;
        }
    }
    SUBCASE("threshold extremes") {
        model.weights = {0.8, -0.3};
        // sigma stays strictly inside (0, 1) for these scores, so a low
        // enough threshold always says AFib and a high enough one never does.
        model.threshold = 1e-12;
        CHECK(classify(model, {-5.0, 5.0}) == Rhythm::AFib);
        CHECK(classify(model, {5.0, -5.0}) == Rhythm::AFib);
        model.threshold = 1.0 - 1e-12;
        CHECK(classify(model, {-5.0, 5.0}) == Rhythm::Sinus);
        CHECK(classify(model, {5.0, -5.0}) == Rhythm::Sinus);
    }
}

TEST_CASE("a trained model separates the class means") {
    LabeledSet data = blob_data(50, 2, 1.0, 8);
    const auto model = fit_logistic(data);
    double mean_pos = 0.0, mean_neg = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = predict_proba(model, data.features[i]);
        if (data.labels[i] == 1) {
            mean_pos += p;
            ++n_pos;
        } else {
            mean_neg += p;
            ++n_neg;
        }
    }
    CHECK(mean_pos / static_cast<double>(n_pos) > mean_neg / static_cast<double>(n_neg));
}

TEST_CASE("classification depends only on the stored standardization") {
    LabeledSet data = blob_data(20, 3, 1.5, 9);
    const auto model = fit_logistic(data);

    // Shift the raw features and compensate in the model's means: identical scores.
    const double shift = 17.5;
    LogisticModel adjusted = model;
    for (double& m : adjusted.feature_means) m += shift;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto shifted = data.features[i];
        for (double& v : shifted) v += shift;
        CHECK(predict_proba(adjusted, shifted) ==
              doctest::Approx(predict_proba(model, data.features[i])).epsilon(1e-12));
    }
}

TEST_CASE("input validation") {
    SUBCASE("single class") {
        LabeledSet data;
        data.features = {{1.0}, {2.0}, {3.0}, {4.0}};
        data.labels = {1, 1, 1, 0};
        CHECK_THROWS_AS(fit_logistic(data), Error);
        try {
            fit_logistic(data);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SingleClass);
        }
    }
    SUBCASE("non-finite feature") {
        LabeledSet data = blob_data(5, 2, 1.0, 10);
        data.features[3][1] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(fit_logistic(data), Error);
    }
    SUBCASE("non-finite prediction input") {
        const auto model = fit_logistic(blob_data(5, 2, 1.0, 11));
        CHECK_THROWS_AS(predict_proba(model, {1.0, std::numeric_limits<double>::infinity()}),
                        Error);
    }
    SUBCASE("degenerate feature is floored and flagged, fit still succeeds") {
        LabeledSet data = blob_data(10, 3, 2.0, 12);
        for (auto& row : data.features) row[2] = 42.0;
        const auto model = fit_logistic(data);
        REQUIRE(model.degenerate_features == std::vector<std::size_t>{2});
        CHECK(model.feature_stds[2] == 1e-12);
        CHECK(std::isfinite(predict_proba(model, data.features[0])));
    }
}

TEST_CASE("model json round trip preserves every number") {
    const auto dir = std::filesystem::temp_directory_path() / "afib_model_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "model.json";

    const auto model = fit_logistic(blob_data(20, 5, 1.0, 13));
    save_model_json(path, model);
    const auto loaded = load_model_json(path);

    CHECK(loaded.weights == model.weights);
    CHECK(loaded.intercept == model.intercept);
    CHECK(loaded.feature_means == model.feature_means);
    CHECK(loaded.feature_stds == model.feature_stds);
    CHECK(loaded.threshold == model.threshold);
    CHECK(loaded.l2 == model.l2);
    std::filesystem::remove_all(dir);
}

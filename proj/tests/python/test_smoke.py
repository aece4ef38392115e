"""Smoke tests for the Python bindings."""

import math

import pytest

import afibdet as ad


def test_histogram_entropy_worked_example():
    ibi = ad.ibi_from_intervals([600.0, 600.0, 600.0, 1000.0])
    expected = -(0.75 * math.log(0.75 / 200.0) + 0.25 * math.log(0.25 / 200.0))
    assert ad.f2_histogram_entropy(ibi, bins=2) == pytest.approx(expected, abs=1e-12)


def test_constant_series_features():
    ibi = ad.ibi_from_intervals([800.0] * 40)
    f = ad.extract_features(ibi)
    assert f.f1 == 0.0
    assert f.f2 == 0.0
    assert f.f4 == 20.0
    assert f.f5 <= 0.0


def test_hvg_examples():
    assert set(ad.build_hvg([3.0, 1.0, 2.0]).edges) == {(0, 1), (0, 2), (1, 2)}
    assert ad.hvg_radius([1.0, 2.0, 3.0]) == 1
    assert ad.hvg_disassortative_entropy([1.0, 2.0, 3.0]) == pytest.approx(
        -math.log(2.0), abs=1e-12
    )


def test_rayleigh_scale_closed_form():
    sigma, grid_len = ad.rayleigh_sigma_ml(ad.ibi_from_intervals([1.0] * 4))
    assert sigma == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert grid_len >= 1


def test_generator_determinism_and_bounds():
    a = ad.gen_ibis(ad.Rhythm.AFIB, seed=11)
    b = ad.gen_ibis(ad.Rhythm.AFIB, seed=11)
    assert a.intervals_ms == b.intervals_ms
    assert all(250.0 <= iv <= 3000.0 for iv in a.intervals_ms)


def test_waveform_pipeline_recovers_beats():
    ibi = ad.gen_ibis(ad.Rhythm.SINUS, seed=4)
    times, values, truth = ad.gen_waveform(ibi, ad.SignalKind.PPG, 30.0)
    recovered = ad.ibis_from_signal(times, values, ad.SignalKind.PPG, 30.0)
    assert len(recovered) >= len(ibi) - 2
    got_mean = sum(recovered.intervals_ms) / len(recovered)
    want_mean = sum(ibi.intervals_ms) / len(ibi)
    assert abs(got_mean - want_mean) < 40.0
    assert len(truth) == len(ibi) + 1


def test_classifier_and_metrics():
    feats, labels = [], []
    for seed in range(1, 41):
        for kind, label in ((ad.Rhythm.SINUS, 0), (ad.Rhythm.AFIB, 1)):
            f = ad.extract_features(ad.gen_ibis(kind, seed=seed))
            feats.append(f.to_list())
            labels.append(label)

    model = ad.fit_logistic(feats, labels, l2=1.0)
    probs = [ad.predict_proba(model, row) for row in feats]
    auc, points = ad.roc_auc(probs, labels)
    assert auc >= 0.95
    assert points[0][1:] == (0.0, 0.0)
    assert points[-1][1:] == (1.0, 1.0)

    cv = ad.kfold_cv(feats, labels, k=5, seed=7)
    assert cv["pooled_auc"] >= 0.95


def test_model_round_trip(tmp_path):
    feats = [[float(i), float(i % 3)] for i in range(20)]
    labels = [1 if i >= 10 else 0 for i in range(20)]
    model = ad.fit_logistic(feats, labels)
    path = str(tmp_path / "model.json")
    ad.save_model(path, model)
    loaded = ad.load_model(path)
    assert loaded.weights == model.weights
    assert loaded.intercept == model.intercept


def test_error_type():
    with pytest.raises(ad.Error):
        ad.ibi_from_intervals([])
    with pytest.raises(ad.Error):
        ad.f1_sd_derivative(ad.ibi_from_intervals([800.0] * 4), order=5)

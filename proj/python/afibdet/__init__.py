"""AFib vs sinus-rhythm screening from short heart-beat-interval recordings.

The heavy lifting lives in the compiled extension; this package re-exports
its surface: preprocessing (resampling, bandpass filtering, beat detection),
the five interval-irregularity features, horizontal visibility graphs,
the logistic classifier, evaluation helpers, and synthetic-data generators.
"""

from ._core import (
    Error,
    FeatureVector,
    HvGraph,
    IbiSequence,
    LogisticModel,
    Rhythm,
    SampledSignal,
    SignalKind,
    build_hvg,
    classify,
    detect_beats,
    detrend_and_filter,
    extract_features,
    f1_sd_derivative,
    f2_histogram_entropy,
    f3_rayleigh_resemblance,
    fit_logistic,
    forward_feature_selection,
    gen_ibis,
    gen_waveform,
    hvg_disassortative_entropy,
    hvg_radius,
    ibi_from_beat_times,
    ibi_from_intervals,
    ibis_from_signal,
    intervals_from_beats,
    kde_density,
    kfold_cv,
    load_model,
    mixing_matrix,
    predict_proba,
    rayleigh_sigma_ml,
    resample_uniform,
    roc_auc,
    save_model,
    silverman_bandwidth,
    standardize,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "FeatureVector",
    "HvGraph",
    "IbiSequence",
    "LogisticModel",
    "Rhythm",
    "SampledSignal",
    "SignalKind",
    "build_hvg",
    "classify",
    "detect_beats",
    "detrend_and_filter",
    "extract_features",
    "f1_sd_derivative",
    "f2_histogram_entropy",
    "f3_rayleigh_resemblance",
    "fit_logistic",
    "forward_feature_selection",
    "gen_ibis",
    "gen_waveform",
    "hvg_disassortative_entropy",
    "hvg_radius",
    "ibi_from_beat_times",
    "ibi_from_intervals",
    "ibis_from_signal",
    "intervals_from_beats",
    "kde_density",
    "kfold_cv",
    "load_model",
    "mixing_matrix",
    "predict_proba",
    "rayleigh_sigma_ml",
    "resample_uniform",
    "roc_auc",
    "save_model",
    "silverman_bandwidth",
    "standardize",
]

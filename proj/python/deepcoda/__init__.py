"""Log-contrast bottleneck networks with a self-explanation head for compositional data."""

from ._deepcoda import (
    Error,
    InvalidInput,
    Model,
    NumericError,
    TrainConfig,
    TrainingDiverged,
    auc,
    closure,
    clr,
    decide,
    explain_sample,
    gen_cmyc,
    gen_toy,
    lasso_baseline,
    lasso_fit,
    log_contrast,
    replace_zeros,
    train,
    weight_contrast_correlation,
)

__all__ = [
    "Error",
    "InvalidInput",
    "Model",
    "NumericError",
    "TrainConfig",
    "TrainingDiverged",
    "auc",
    "closure",
    "clr",
    "decide",
    "explain_sample",
    "gen_cmyc",
    "gen_toy",
    "lasso_baseline",
    "lasso_fit",
    "log_contrast",
    "replace_zeros",
    "train",
    "weight_contrast_correlation",
]

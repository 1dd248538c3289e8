"""Autoencoder anomaly detection with a learned latent feature mask."""

from ._swad import (
    Checkpoint,
    ConfigError,
    DataError,
    DimensionError,
    NumericError,
    SwadError,
    InvalidValue,
    auc,
    config_hash,
    fit_threshold,
    train,
)

__all__ = [
    "Checkpoint",
    "ConfigError",
    "DataError",
    "DimensionError",
    "NumericError",
    "SwadError",
    "InvalidValue",
    "auc",
    "config_hash",
    "fit_threshold",
    "train",
]

"""Smart-home resident simulator and anomaly detection pipeline."""

from ._core import (
    Model,
    Observations,
    SimulationResult,
    config_hash,
    default_config,
    denoise,
    detect,
    label_intervals,
    score,
    simulate,
    theta_for,
    train,
)

__all__ = [
    "Model",
    "Observations",
    "SimulationResult",
    "config_hash",
    "default_config",
    "denoise",
    "detect",
    "label_intervals",
    "score",
    "simulate",
    "theta_for",
    "train",
]

"""Sensor measurement model: log-distance propagation plus Gaussian noise.

A sensor at distance ``d`` from the target reports
``p0 - 10 * eta * log10(d + epsilon)`` dB plus N(0, sigma^2) noise.  The dB
value itself is the measurement mean; with log-distance decay this matches
received-signal-strength readings with log-normal uncorrelated noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PropagationModel:
    """Log-distance signal model parameters plus measurement noise level."""

    p0: float
    eta: float
    epsilon: float
    sigma: float

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")


def as_sensors(positions, ndim: int | None = None) -> np.ndarray:
    """Normalize sensor positions to a float array of shape ``(m, d)``."""
    arr = np.asarray(positions, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValueError(f"expected a non-empty (m, d) sensor array, got shape {arr.shape}")
    if ndim is not None and arr.shape[1] != ndim:
        raise ValueError(f"sensors have dimension {arr.shape[1]}, expected {ndim}")
    return arr


def expected_measurement(model: PropagationModel, sensor, location) -> float:
    """Noise-free dB reading of one sensor for a target at ``location``."""
    s = np.atleast_1d(np.asarray(sensor, dtype=float))
    x = np.atleast_1d(np.asarray(location, dtype=float))
    d = float(np.linalg.norm(s - x))
    return model.p0 - 10.0 * model.eta * math.log10(d + model.epsilon)


def hypothesis_vector(model: PropagationModel, sensors, point) -> np.ndarray:
    """Expected measurements of all sensors for a hypothesized target point."""
    s = as_sensors(sensors)
    x = np.atleast_1d(np.asarray(point, dtype=float))
    d = np.linalg.norm(s - x[None, :], axis=1)
    return model.p0 - 10.0 * model.eta * np.log10(d + model.epsilon)


def hypothesis_matrix(model: PropagationModel, sensors, points) -> np.ndarray:
    """Hypothesis vectors for many points at once, shape ``(n_points, m)``."""
    s = as_sensors(sensors)
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    d = np.linalg.norm(pts[:, None, :] - s[None, :, :], axis=2)
    return model.p0 - 10.0 * model.eta * np.log10(d + model.epsilon)


def sample_measurements(
    model: PropagationModel,
    sensors,
    true_location,
    rng: np.random.Generator,
    *,
    noiseless: bool = False,
) -> np.ndarray:
    """Draw one noisy measurement vector for a target at ``true_location``.

    With ``noiseless=True`` the exact hypothesis vector is returned (the
    sigma -> 0 limit); the rng is not consumed in that case.
    """
    h = hypothesis_vector(model, sensors, true_location)
    if noiseless:
        return h
    return h + rng.normal(0.0, model.sigma, size=h.shape)


def log_likelihood(model: PropagationModel, z, h_k) -> float:
    """Gaussian log-likelihood of measurements ``z`` under hypothesis vector ``h_k``.

    Equals ``-||z - h_k||^2 / (2 sigma^2) - (m/2) log(2 pi sigma^2)``, so
    ranking hypotheses by log-likelihood is the same as ranking them by
    Euclidean distance to ``z``.
    """
    zv = np.atleast_1d(np.asarray(z, dtype=float))
    hv = np.atleast_1d(np.asarray(h_k, dtype=float))
    if zv.shape != hv.shape:
        raise ValueError(f"measurement/hypothesis length mismatch: {zv.shape} vs {hv.shape}")
    m = zv.shape[0]
    resid = zv - hv
    var = model.sigma**2
    return float(-(resid @ resid) / (2.0 * var) - 0.5 * m * math.log(2.0 * math.pi * var))

"""Closed-form step error probabilities and their Monte Carlo validation.

For a symmetric two-sensor placement the per-step misclassification
probability has the closed form

    P_e = (2 / |H|) * sum_{k in left-exclusive} Q(d_k / sigma),

where ``d_k`` is half the measurement-space distance between the hypothesis
vectors of ``k`` and its mirror partner.  The Monte Carlo estimator makes no
symmetry assumption: it classifies noisy measurement vectors to the nearest
hypothesis vector, which is exactly the Voronoi-cell membership test, and
counts the trials whose nearest neighbour falls outside every cell of the
true side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .grid import GridRegion, Partition, overlap_count, round_half_to_even
from .measurement import PropagationModel, as_sensors, hypothesis_matrix
from .quadrature import QuadratureSpec, integrate_1d, integrate_2d

_SQRT2 = math.sqrt(2.0)


class AsymmetricSensorsError(ValueError):
    """Raised when a symmetric-placement formula is asked about asymmetric sensors."""


def q_function(x):
    """Standard Gaussian tail probability Pr{N(0,1) > x} via erfc."""
    if np.isscalar(x):
        return 0.5 * math.erfc(x / _SQRT2)
    return 0.5 * erfc(np.asarray(x, dtype=float) / _SQRT2)


def binomial_half_width(successes: int, trials: int) -> float:
    """Three-sigma normal-approximation half-width for a binomial proportion.

    For zero (or all) observed successes the one-sided ``3 / trials`` bound is
    reported instead.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    if successes in (0, trials):
        return 3.0 / trials
    return 3.0 * math.sqrt(p * (1.0 - p) / trials)


@dataclass(frozen=True)
class StepErrorReport:
    """One step error estimate with its provenance."""

    analytic: float | None
    mc_estimate: float | None
    mc_half_width: float
    trials: int
    method_tags: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for value in (self.analytic, self.mc_estimate):
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"probability {value} outside [0, 1]")
        if self.mc_half_width < 0:
            raise ValueError("mc_half_width must be >= 0")


def _check_region_matches(region: GridRegion, partition: Partition) -> None:
    if region != partition.parent:
        raise ValueError("partition does not belong to the given region")


def validate_symmetric_sensors(partition: Partition, sensors) -> np.ndarray:
    """Check the two-sensor mirror placement required by the closed form.

    The pair must be reflected about the parent midpoint along the split axis
    and coincide on every other axis.  Returns the normalized sensor array.
    """
    region = partition.parent
    s = as_sensors(sensors, region.ndim)
    if s.shape[0] != 2:
        raise AsymmetricSensorsError(
            f"symmetric formula needs exactly 2 sensors, got {s.shape[0]}"
        )
    sd = partition.split_dim
    axis = region.axes[sd]
    tol = 1e-9 * max(1.0, axis.length)
    mirrored = 2.0 * axis.midpoint - s[0, sd]
    if abs(s[1, sd] - mirrored) > tol:
        raise AsymmetricSensorsError(
            f"sensors not mirrored about {axis.midpoint} along axis {sd}: "
            f"{s[0, sd]} vs {s[1, sd]}"
        )
    for j in range(region.ndim):
        if j != sd and abs(s[0, j] - s[1, j]) > tol:
            raise AsymmetricSensorsError(
                f"sensor coordinates differ along non-split axis {j}"
            )
    return s


def _exclusive_left_points(partition: Partition) -> tuple[np.ndarray, np.ndarray]:
    """Points of the left-exclusive set and their mirror partners."""
    region = partition.parent
    sd = partition.split_dim
    axis = region.axes[sd]
    n_excl = axis.count - partition.next_count
    if n_excl <= 0:
        d = region.ndim
        return np.empty((0, d)), np.empty((0, d))
    coords = [ax.coordinates() for ax in region.axes]
    split_coords = coords[sd][:n_excl]
    partner_coords = coords[sd][axis.count - 1 : axis.count - 1 - n_excl : -1]
    pts_axes = list(coords)
    partner_axes = list(coords)
    pts_axes[sd] = split_coords
    partner_axes[sd] = partner_coords
    pts = np.stack(np.meshgrid(*pts_axes, indexing="ij"), axis=-1).reshape(-1, region.ndim)
    partners = np.stack(np.meshgrid(*partner_axes, indexing="ij"), axis=-1).reshape(
        -1, region.ndim
    )
    return pts, partners


def step_error_symmetric_discrete(
    region: GridRegion,
    partition: Partition,
    model: PropagationModel,
    sensors,
) -> float:
    """Closed-form step error for a symmetric two-sensor placement.

    Sums ``Q(d_k / sigma)`` over the left-exclusive points, where ``d_k`` is
    half the distance between the hypothesis vectors of ``k`` and its mirror
    partner, and normalizes by half the parent point count.
    """
    _check_region_matches(region, partition)
    s = validate_symmetric_sensors(partition, sensors)
    pts, partners = _exclusive_left_points(partition)
    if pts.shape[0] == 0:
        return 0.0
    h = hypothesis_matrix(model, s, pts)
    h_partner = hypothesis_matrix(model, s, partners)
    d = 0.5 * np.linalg.norm(h - h_partner, axis=1)
    total = math.fsum(q_function(d / model.sigma))
    return 2.0 * total / region.num_points


def step_error_monte_carlo(
    region: GridRegion,
    partition: Partition,
    model: PropagationModel,
    sensors,
    trials: int,
    master_seed: int,
    *,
    noiseless: bool = False,
) -> StepErrorReport:
    """Monte Carlo step error via nearest-neighbour classification.

    Draws the true location uniformly over the parent grid.  Overlap points
    can never produce an error (both sides retain them); otherwise a trial is
    an error when the region selected for the noisy measurement (nearest
    hypothesis vector, overlap ties resolved by the nearest exclusive point,
    exactly as in the search itself) excludes the side containing the truth.
    Works for any sensor placement, symmetric or not.
    """
    _check_region_matches(region, partition)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    s = as_sensors(sensors, region.ndim)
    points = region.points()
    n_points = points.shape[0]
    h = hypothesis_matrix(model, s, points)
    h_sq = np.einsum("ij,ij->i", h, h)

    sd = partition.split_dim
    c = region.axes[sd].count
    n2 = partition.next_count
    split_idx = np.unravel_index(np.arange(n_points), region.shape)[sd]
    in_left = split_idx < n2
    in_right = split_idx >= c - n2
    left_excl = split_idx < c - n2
    right_excl = split_idx >= n2

    chunk = max(256, min(1 << 16, 4_000_000 // max(n_points, 1)))
    errors = 0
    done = 0
    chunk_index = 0
    while done < trials:
        size = min(chunk, trials - done)
        rng = np.random.default_rng(np.random.SeedSequence([master_seed, chunk_index]))
        true_idx = rng.integers(0, n_points, size=size)
        z = h[true_idx]
        if not noiseless:
            z = z + rng.normal(0.0, model.sigma, size=z.shape)
        # argmin_k ||z - h_k||^2 without forming the difference tensor
        d2 = -2.0 * (z @ h.T) + h_sq[None, :]
        nn = np.argmin(d2, axis=1)
        nn_left = in_left[nn]
        nn_right = in_right[nn]
        side1 = nn_left & ~nn_right
        in_overlap = nn_left & nn_right
        if left_excl.any() and right_excl.any():
            min_left = d2[:, left_excl].min(axis=1)
            min_right = d2[:, right_excl].min(axis=1)
            side1 |= in_overlap & (min_left <= min_right)
        else:
            side1 |= in_overlap
        true_left = in_left[true_idx]
        true_right = in_right[true_idx]
        err = (true_left & ~true_right & ~side1) | (true_right & ~true_left & side1)
        errors += int(err.sum())
        done += size
        chunk_index += 1

    estimate = errors / trials
    return StepErrorReport(
        analytic=None,
        mc_estimate=estimate,
        mc_half_width=binomial_half_width(errors, trials),
        trials=trials,
        method_tags=("monte-carlo", "nearest-neighbor"),
    )


def _pair_half_distance_1d(model: PropagationModel, length: float, sensor_s: float, x: float) -> float:
    """Half measurement-space distance between positions ``x`` and ``length - x``.

    With the mirrored sensor pair {s, L - s} the partner's hypothesis vector is
    the component swap of the original, so the half distance reduces to
    ``|h1 - h2| / sqrt(2)``.
    """
    h1 = model.p0 - 10.0 * model.eta * math.log10(abs(x - sensor_s) + model.epsilon)
    h2 = model.p0 - 10.0 * model.eta * math.log10(abs(length - sensor_s - x) + model.epsilon)
    return abs(h1 - h2) / _SQRT2


def step_error_continuous_1d(
    length: float,
    alpha: float,
    model: PropagationModel,
    sensor_s: float,
    quad: QuadratureSpec | None = None,
) -> float:
    """Continuous-limit step error on an interval of the given length.

    Evaluates ``(2 / L) * integral_0^{L (1/2 - alpha)} Q(d(x) / sigma) dx`` for
    the mirrored sensor pair {s, L - s}.
    """
    if length <= 0:
        raise ValueError("length must be positive")
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha must be in [0, 0.5], got {alpha}")
    spec = quad or QuadratureSpec("adaptive_simpson", abs_tolerance=1e-8)
    upper = length * (0.5 - alpha)
    if upper <= 0:
        return 0.0
    sigma = model.sigma

    def integrand(x: float) -> float:
        d = _pair_half_distance_1d(model, length, sensor_s, x)
        return 0.5 * math.erfc(d / (sigma * _SQRT2))

    return 2.0 / length * integrate_1d(integrand, 0.0, upper, spec)


def step_error_continuous_2d(
    length_x: float,
    length_y: float,
    alpha: float,
    model: PropagationModel,
    sensors,
    quad: QuadratureSpec | None = None,
) -> float:
    """Continuous-limit step error on a rectangle, split along its longer side.

    The sensor pair must be mirrored about the split midpoint with equal
    coordinates along the other axis.
    """
    if length_x <= 0 or length_y <= 0:
        raise ValueError("side lengths must be positive")
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha must be in [0, 0.5], got {alpha}")
    spec = quad or QuadratureSpec("gauss_legendre", nodes=64, abs_tolerance=1e-6)

    s = as_sensors(sensors, 2)
    if s.shape[0] != 2:
        raise AsymmetricSensorsError("continuous 2D formula needs exactly 2 sensors")
    lengths = (length_x, length_y)
    sd = 0 if length_x >= length_y else 1
    other = 1 - sd
    tol = 1e-9 * max(1.0, lengths[sd])
    if abs(s[1, sd] - (lengths[sd] - s[0, sd])) > tol:
        raise AsymmetricSensorsError("sensors not mirrored about the split midpoint")
    if abs(s[1, other] - s[0, other]) > tol:
        raise AsymmetricSensorsError("sensor coordinates differ along the non-split axis")

    upper = lengths[sd] * (0.5 - alpha)
    if upper <= 0:
        return 0.0
    sigma = model.sigma

    def integrand(u, v):
        # u runs along the split axis, v along the other axis
        if sd == 0:
            x, y = u, v
        else:
            x, y = v, u
        d1 = np.hypot(x - s[0, 0], y - s[0, 1])
        d2 = np.hypot(x - s[1, 0], y - s[1, 1])
        h1 = model.p0 - 10.0 * model.eta * np.log10(d1 + model.epsilon)
        h2 = model.p0 - 10.0 * model.eta * np.log10(d2 + model.epsilon)
        d = np.abs(h1 - h2) / _SQRT2
        return q_function(d / sigma)

    value = integrate_2d(integrand, 0.0, upper, 0.0, lengths[other], spec)
    return 2.0 / (length_x * length_y) * value


def error_derivative_alpha(
    length: float,
    alpha: float,
    model: PropagationModel,
    sensor_s: float,
) -> float:
    """Rate of change of the continuous 1D step error in the overlap parameter.

    For fixed sensors the derivative is ``-2 Q(d(L (1/2 - alpha)) / sigma)``;
    at alpha = 0 the boundary pair coincides and the value is exactly -1.
    """
    if length <= 0:
        raise ValueError("length must be positive")
    if not 0.0 <= alpha < 0.5:
        raise ValueError(f"alpha must be in [0, 0.5), got {alpha}")
    x = length * (0.5 - alpha)
    d = _pair_half_distance_1d(model, length, sensor_s, x)
    return -2.0 * q_function(d / model.sigma)


def end_to_end_error(step_errors) -> float:
    """Total exclusion probability ``1 - prod(1 - p_t)`` over a run of steps."""
    total_log = 0.0
    for p in step_errors:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"step error {p} outside [0, 1]")
        if p == 1.0:
            return 1.0
        total_log += math.log1p(-p)
    return -math.expm1(total_log)


def tree_depth_exact(n0: int, n_beta: int, alpha: float) -> int:
    """Steps needed to shrink a run of ``n0`` points to at most ``n_beta``."""
    if not 1 <= n_beta <= n0:
        raise ValueError("need 1 <= n_beta <= n0")
    if not 0.0 <= alpha < 0.25:
        raise ValueError(f"alpha must be in [0, 0.25) for full-depth runs, got {alpha}")
    steps = 0
    n = n0
    while n > n_beta:
        n = overlap_count(n, alpha)
        steps += 1
        if steps > 10_000:
            raise RuntimeError("partition iteration failed to converge")
    return steps


def tree_depth_approx(n0: int, n_beta: int, alpha: float) -> int:
    """Log-ratio approximation of the tree depth for overlap ``alpha``."""
    if not 1 <= n_beta <= n0:
        raise ValueError("need 1 <= n_beta <= n0")
    if not 0.0 <= alpha < 0.25:
        raise ValueError(f"alpha must be in [0, 0.25), got {alpha}")
    if n0 == n_beta:
        return 0
    ratio = (math.log(n_beta) - math.log(n0)) / math.log(0.5 + alpha)
    return round_half_to_even(ratio)

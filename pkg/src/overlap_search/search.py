"""The iterative overlapping search: partition, sense, ML-update, select.

Each step splits the current region into two overlapping halves, takes noisy
measurements from a small set of sensors, finds the maximum-likelihood grid
point, and keeps the half containing it.  When the ML point lies in the
overlap both halves attain the maximum; the step is flagged as a tie and
resolved by the side of the nearest exclusive hypothesis point, which for
mirrored sensor pairs coincides with the hyperplane decision assumed by the
closed-form error analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import binomial_half_width
from .grid import CannotSplitError, GridRegion, Partition, overlap_count, split
from .measurement import (
    PropagationModel,
    as_sensors,
    hypothesis_matrix,
    sample_measurements,
)


@dataclass(frozen=True)
class SensorPolicy:
    """Rule producing the sensor positions activated at each step.

    Symmetric kinds place a mirrored pair {s, L - s} in region-local
    coordinates along the split axis, with the non-split coordinates at the
    region center:

    * ``fixed_fraction``  -- s = fraction * L
    * ``alpha_coupled``   -- s = (L / 2) * (1/2 - alpha)
    * ``edge_index``      -- s = floor((1/2 - alpha) * n) * step
    * ``explicit``        -- caller-provided global positions per step
    """

    kind: str
    fraction: float | None = None
    positions: tuple | None = None
    sensors_per_step: int = 2

    def __post_init__(self) -> None:
        if self.kind not in ("fixed_fraction", "alpha_coupled", "edge_index", "explicit"):
            raise ValueError(f"unknown sensor policy kind: {self.kind!r}")
        if self.kind == "fixed_fraction":
            if self.fraction is None or not 0.0 <= self.fraction <= 0.5:
                raise ValueError("fixed_fraction needs a fraction in [0, 0.5]")
        if self.kind == "explicit" and not self.positions:
            raise ValueError("explicit policy needs per-step positions")
        if self.sensors_per_step < 1:
            raise ValueError("sensors_per_step must be >= 1")

    @classmethod
    def symmetric_fixed_fraction(cls, fraction: float = 0.25) -> "SensorPolicy":
        return cls(kind="fixed_fraction", fraction=fraction)

    @classmethod
    def symmetric_alpha_coupled(cls) -> "SensorPolicy":
        return cls(kind="alpha_coupled")

    @classmethod
    def symmetric_edge_index(cls) -> "SensorPolicy":
        return cls(kind="edge_index")

    @classmethod
    def explicit(cls, positions) -> "SensorPolicy":
        steps = tuple(as_sensors(p) for p in positions)
        return cls(kind="explicit", positions=steps, sensors_per_step=steps[0].shape[0])

    def local_offset(self, length: float, count: int, step: float, alpha: float) -> float:
        """Region-local offset of the first sensor along the split axis."""
        if self.kind == "fixed_fraction":
            return self.fraction * length
        if self.kind == "alpha_coupled":
            return 0.5 * length * (0.5 - alpha)
        if self.kind == "edge_index":
            return float(int((0.5 - alpha) * count)) * step
        raise ValueError("explicit policies carry positions, not offsets")


def sensors_for_step(
    policy: SensorPolicy,
    region: GridRegion,
    split_dim: int,
    alpha: float,
    step_index: int,
) -> np.ndarray:
    """Global sensor positions for one step, shape ``(m, ndim)``."""
    if policy.kind == "explicit":
        if step_index >= len(policy.positions):
            raise ValueError(f"explicit policy has no positions for step {step_index}")
        return as_sensors(policy.positions[step_index], region.ndim)
    axis = region.axes[split_dim]
    s_local = policy.local_offset(axis.length, axis.count, axis.step, alpha)
    base = region.center()
    first = base.copy()
    second = base.copy()
    first[split_dim] = axis.lo + s_local
    second[split_dim] = axis.lo + (axis.length - s_local)
    return np.stack([first, second])


def ml_classify(model: PropagationModel, sensors, z, hypothesis_points) -> int:
    """Index of the hypothesis point whose expected measurements are nearest to ``z``.

    Equivalent to maximizing the Gaussian log-likelihood over the hypothesis
    points; ties resolve to the lowest enumeration index.
    """
    pts = np.asarray(hypothesis_points, dtype=float)
    if pts.size == 0:
        raise ValueError("hypothesis list must be non-empty")
    if pts.ndim == 1:
        pts = pts[:, None]
    zv = np.atleast_1d(np.asarray(z, dtype=float))
    h = hypothesis_matrix(model, sensors, pts)
    diff = h - zv[None, :]
    return int(np.argmin(np.einsum("ij,ij->i", diff, diff)))


def select_region(
    partition: Partition,
    ml_index: int,
    d_squared: np.ndarray | None = None,
    tie_break: str = "nearest_exclusive",
) -> tuple[int, bool]:
    """Side (1 or 2) containing the ML point, with a tie flag for the overlap.

    ``ml_index`` is a flat row-major index into the parent region's points.
    When the ML point lies in the overlap both sides attain the likelihood
    maximum; the tie is then resolved by the side of the nearest *exclusive*
    hypothesis point (which for mirrored sensor pairs reproduces the single
    hyperplane decision behind the closed-form error).  That needs the
    squared measurement distances ``d_squared``; without them, or with
    ``tie_break`` set to ``"side1"``/``"side2"``, the named side is returned.
    """
    if tie_break not in ("nearest_exclusive", "side1", "side2"):
        raise ValueError(f"unknown tie_break: {tie_break!r}")
    region = partition.parent
    if not 0 <= ml_index < region.num_points:
        raise ValueError(f"ml_index {ml_index} out of range for {region.num_points} points")
    sd = partition.split_dim
    split_idx = np.unravel_index(np.arange(region.num_points), region.shape)[sd]
    c = region.axes[sd].count
    n2 = partition.next_count
    idx = int(split_idx[ml_index])
    in_left = idx < n2
    in_right = idx >= c - n2
    if not (in_left and in_right):
        return (1, False) if in_left else (2, False)
    if tie_break == "side2":
        return 2, True
    if tie_break == "side1" or d_squared is None:
        return 1, True
    left_excl = split_idx < c - n2
    right_excl = split_idx >= n2
    if not left_excl.any() or not right_excl.any():
        return 1, True
    min_left = float(np.min(d_squared[left_excl]))
    min_right = float(np.min(d_squared[right_excl]))
    return (1, True) if min_left <= min_right else (2, True)


@dataclass(frozen=True)
class StepRecord:
    """Everything observed and decided during one search step."""

    region_before: GridRegion
    partition: Partition
    sensors: np.ndarray
    measurements: np.ndarray
    ml_index: int
    ml_point: np.ndarray
    chosen_side: int
    tie_flag: bool


@dataclass(frozen=True)
class SearchTrace:
    """Per-step record of a search run plus the final region and outcome."""

    steps: tuple[StepRecord, ...]
    final_region: GridRegion
    success: bool
    requested_steps: int

    @property
    def realized_depth(self) -> int:
        return len(self.steps)


def _validate_tree_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < 0.25:
        raise ValueError(
            f"multi-step searches need alpha in [0, 0.25), got {alpha}"
        )


def run_search(
    space: GridRegion,
    model: PropagationModel,
    alpha: float,
    beta: int,
    policy: SensorPolicy,
    true_location,
    rng: np.random.Generator,
    *,
    noiseless: bool = False,
    tie_break: str = "nearest_exclusive",
    selection_rule: str = "max",
) -> SearchTrace:
    """Run ``beta`` partition-and-select steps and report the trace.

    Stops early (recorded in the trace) if the region can no longer be split.
    ``selection_rule`` is ``"max"`` for the maximum-likelihood point rule or
    ``"sum"`` for the alternate summed-likelihood region rule.
    """
    _validate_tree_alpha(alpha)
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if selection_rule not in ("max", "sum"):
        raise ValueError(f"unknown selection rule: {selection_rule!r}")
    true_loc = np.atleast_1d(np.asarray(true_location, dtype=float))
    if not space.contains(true_loc):
        raise ValueError("true_location lies outside the search space")

    region = space
    steps: list[StepRecord] = []
    for t in range(beta):
        try:
            part = split(region, alpha)
        except CannotSplitError:
            break
        sensors = sensors_for_step(policy, region, part.split_dim, alpha, t)
        z = sample_measurements(model, sensors, true_loc, rng, noiseless=noiseless)
        points = region.points()
        h = hypothesis_matrix(model, sensors, points)
        d2 = np.einsum("ij,ij->i", h - z[None, :], h - z[None, :])
        ml_index = int(np.argmin(d2))
        if selection_rule == "max":
            side, tie = select_region(part, ml_index, d_squared=d2, tie_break=tie_break)
        else:
            side, tie = _summed_likelihood_side(region, part, d2)
        region = part.left if side == 1 else part.right
        steps.append(
            StepRecord(
                region_before=part.parent,
                partition=part,
                sensors=sensors,
                measurements=z,
                ml_index=ml_index,
                ml_point=points[ml_index],
                chosen_side=side,
                tie_flag=tie,
            )
        )
    return SearchTrace(
        steps=tuple(steps),
        final_region=region,
        success=region.contains(true_loc),
        requested_steps=beta,
    )


def _summed_likelihood_side(
    region: GridRegion, part: Partition, d2: np.ndarray
) -> tuple[int, bool]:
    """Alternate selection: maximize the sum of log-likelihoods over each side.

    Both sides hold the same number of points, so comparing summed
    log-likelihoods reduces to comparing summed squared distances.
    """
    sd = part.split_dim
    idx = np.unravel_index(np.arange(region.num_points), region.shape)[sd]
    c = region.axes[sd].count
    left_sum = float(d2[idx < part.next_count].sum())
    right_sum = float(d2[idx >= c - part.next_count].sum())
    if left_sum == right_sum:
        return 1, True
    return (1, False) if left_sum < right_sum else (2, False)


@dataclass(frozen=True)
class SuccessRateEstimate:
    rate: float
    half_width: float
    trials: int
    successes: int


def _deterministic_schedule(space: GridRegion, alpha: float, beta: int):
    """Shared per-step geometry: counts only change by the split rule, so every
    trial sees the same region-local layout regardless of which sides it chose."""
    schedule = []
    shape = list(space.shape)
    steps = [ax.step for ax in space.axes]
    for _ in range(beta):
        extents = [(c - 1) * st for c, st in zip(shape, steps)]
        sd = int(np.argmax(extents))
        if shape[sd] < 2:
            break
        n2 = overlap_count(shape[sd], alpha)
        schedule.append((tuple(shape), sd, n2))
        shape[sd] = n2
    return schedule


def success_rate(
    space: GridRegion,
    model: PropagationModel,
    alpha: float,
    beta: int,
    policy: SensorPolicy,
    trials: int,
    master_seed: int,
    *,
    noiseless: bool = False,
    true_location=None,
    tie_break: str = "nearest_exclusive",
    selection_rule: str = "max",
) -> SuccessRateEstimate:
    """Fraction of independent searches whose final region keeps the target.

    With ``true_location=None`` the target is drawn uniformly from the initial
    grid and trials run through a vectorized kernel applying exactly the
    ``run_search`` decision rule; a fixed ``true_location`` falls back to
    per-trial ``run_search`` calls.  Deterministic for a given master seed.
    """
    _validate_tree_alpha(alpha)
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if trials < 1:
        raise ValueError("trials must be >= 1")

    if true_location is not None or policy.kind == "explicit":
        successes = 0
        loc = true_location
        for i in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence([master_seed, i]))
            if true_location is None:
                flat = int(rng.integers(0, space.num_points))
                loc = space.point(flat)
            trace = run_search(
                space, model, alpha, beta, policy, loc, rng,
                noiseless=noiseless, tie_break=tie_break, selection_rule=selection_rule,
            )
            successes += int(trace.success)
        return SuccessRateEstimate(
            rate=successes / trials,
            half_width=binomial_half_width(successes, trials),
            trials=trials,
            successes=successes,
        )

    successes = _batched_uniform_success(
        space, model, alpha, beta, policy, trials, master_seed,
        noiseless=noiseless, tie_break=tie_break, selection_rule=selection_rule,
    )
    return SuccessRateEstimate(
        rate=successes / trials,
        half_width=binomial_half_width(successes, trials),
        trials=trials,
        successes=successes,
    )


def _batched_uniform_success(
    space: GridRegion,
    model: PropagationModel,
    alpha: float,
    beta: int,
    policy: SensorPolicy,
    trials: int,
    master_seed: int,
    *,
    noiseless: bool,
    tie_break: str,
    selection_rule: str,
) -> int:
    schedule = _deterministic_schedule(space, alpha, beta)
    axis_steps = [ax.step for ax in space.axes]

    # Precompute per-step local geometry shared by all trials.
    step_data = []
    for shape, sd, n2 in schedule:
        axes_local = [
            (2 * np.arange(c) + 1) * (st / 2.0) for c, st in zip(shape, axis_steps)
        ]
        pts = np.stack(np.meshgrid(*axes_local, indexing="ij"), axis=-1).reshape(
            -1, len(shape)
        )
        length = shape[sd] * axis_steps[sd]
        s_local = policy.local_offset(length, shape[sd], axis_steps[sd], alpha)
        center = np.array([c * st / 2.0 for c, st in zip(shape, axis_steps)])
        first = center.copy()
        second = center.copy()
        first[sd] = s_local
        second[sd] = length - s_local
        sensors = np.stack([first, second])
        h = hypothesis_matrix(model, sensors, pts)
        h_sq = np.einsum("ij,ij->i", h, h)
        split_idx = np.unravel_index(np.arange(pts.shape[0]), shape)[sd]
        step_data.append((shape, sd, n2, h, h_sq, split_idx))

    n0_points = space.num_points
    max_points = max((d[3].shape[0] for d in step_data), default=1)
    chunk = max(256, min(1 << 15, 4_000_000 // max(max_points, 1)))

    successes = 0
    done = 0
    chunk_index = 0
    while done < trials:
        size = min(chunk, trials - done)
        rng = np.random.default_rng(np.random.SeedSequence([master_seed, chunk_index]))
        flat = rng.integers(0, n0_points, size=size)
        idx = np.stack(np.unravel_index(flat, space.shape), axis=1)
        alive = np.ones(size, dtype=bool)
        for shape, sd, n2, h, h_sq, split_idx in step_data:
            c = shape[sd]
            strides = np.array(
                [int(np.prod(shape[j + 1 :])) for j in range(len(shape))], dtype=np.int64
            )
            true_flat = idx @ strides
            z = h[true_flat]
            if not noiseless:
                z = z + rng.normal(0.0, model.sigma, size=z.shape)
            d2 = -2.0 * (z @ h.T) + h_sq[None, :]
            if selection_rule == "max":
                nn = np.argmin(d2, axis=1)
                nn_split = split_idx[nn]
                nn_left = nn_split < n2
                nn_right = nn_split >= c - n2
                in_overlap = nn_left & nn_right
                side1 = nn_left & ~nn_right
                if tie_break == "nearest_exclusive":
                    left_excl = split_idx < c - n2
                    right_excl = split_idx >= n2
                    min_left = d2[:, left_excl].min(axis=1)
                    min_right = d2[:, right_excl].min(axis=1)
                    side1 |= in_overlap & (min_left <= min_right)
                elif tie_break == "side1":
                    side1 |= in_overlap
            else:
                left_mask = (split_idx < n2).astype(float)
                right_mask = (split_idx >= c - n2).astype(float)
                left_sum = d2 @ left_mask
                right_sum = d2 @ right_mask
                side1 = left_sum <= right_sum
            true_split = idx[:, sd]
            keep1 = true_split < n2
            keep2 = true_split >= c - n2
            alive &= np.where(side1, keep1, keep2)
            idx[:, sd] = np.where(side1, true_split, true_split - (c - n2))
            np.clip(idx[:, sd], 0, n2 - 1, out=idx[:, sd])
        successes += int(alive.sum())
        done += size
        chunk_index += 1
    return successes

"""Digitized search spaces and the overlapping partition rule.

A search region is an axis-aligned sub-grid of the step-0 hypothesis grid,
tracked by integer index ranges so that point coordinates are always derived
from the original grid parameters (no accumulation drift across steps).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np


class CannotSplitError(ValueError):
    """Raised when a region has a single point along every axis."""


def round_half_to_even(value: float) -> int:
    """Round to the nearest integer, resolving .5 ties to the even integer.

    Implemented explicitly rather than relying on a platform rounding mode.
    """
    floor_v = math.floor(value)
    frac = value - floor_v
    if frac > 0.5:
        return floor_v + 1
    if frac < 0.5:
        return floor_v
    return floor_v if floor_v % 2 == 0 else floor_v + 1


def overlap_count(parent_count: int, alpha: float) -> int:
    """Number of grid points kept on each side when a run of ``parent_count``
    points is split with overlap parameter ``alpha``.

    Returns ``max(round_half_to_even((1/2 + alpha) * n), ceil(n / 2))``, so the
    result is always between ``ceil(n/2)`` and ``n``.  Values of ``alpha`` in
    ``[0.25, 0.5]`` are accepted here because single-step error analysis allows
    them; full multi-step searches reject them separately.
    """
    if parent_count < 1:
        raise ValueError(f"parent_count must be >= 1, got {parent_count}")
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha must be in [0, 0.5], got {alpha}")
    rounded = round_half_to_even((0.5 + alpha) * parent_count)
    result = max(rounded, (parent_count + 1) // 2)
    return min(result, parent_count)


@dataclass(frozen=True)
class GridAxis:
    """One axis of a rectangular sub-grid, as an index range into the step-0 grid.

    The physical coordinate of local index ``i`` is
    ``(2 * (origin + i) + 1) * initial_length / (2 * initial_count)``.
    """

    origin: int
    count: int
    initial_count: int
    initial_length: float

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if self.origin < 0:
            raise ValueError(f"origin must be >= 0, got {self.origin}")
        if self.origin + self.count > self.initial_count:
            raise ValueError(
                f"axis [{self.origin}, {self.origin + self.count}) exceeds "
                f"initial_count={self.initial_count}"
            )
        if self.initial_length <= 0:
            raise ValueError("initial_length must be positive")

    @classmethod
    def initial(cls, count: int, length: float) -> "GridAxis":
        return cls(origin=0, count=count, initial_count=count, initial_length=length)

    @property
    def step(self) -> float:
        return self.initial_length / self.initial_count

    @property
    def lo(self) -> float:
        """Physical lower cell edge of the axis range."""
        return self.origin * self.step

    @property
    def length(self) -> float:
        """Physical span of the covered cells."""
        return self.count * self.step

    @property
    def extent(self) -> float:
        """Distance between the first and last point coordinates."""
        return (self.count - 1) * self.step

    def coordinate(self, i: int) -> float:
        if not 0 <= i < self.count:
            raise IndexError(f"local index {i} out of range [0, {self.count})")
        return (2 * (self.origin + i) + 1) * self.initial_length / (2 * self.initial_count)

    def coordinates(self) -> np.ndarray:
        idx = self.origin + np.arange(self.count)
        return (2 * idx + 1) * (self.initial_length / (2 * self.initial_count))

    @property
    def midpoint(self) -> float:
        """Midpoint of the covered point range (equals the cell-span midpoint)."""
        return 0.5 * (self.coordinate(0) + self.coordinate(self.count - 1))


@dataclass(frozen=True)
class GridRegion:
    """Axis-aligned hypothesis sub-grid; the Cartesian product of its axes."""

    axes: tuple[GridAxis, ...]

    def __post_init__(self) -> None:
        if not self.axes:
            raise ValueError("region needs at least one axis")
        object.__setattr__(self, "axes", tuple(self.axes))

    @classmethod
    def initial_1d(cls, count: int, length: float) -> "GridRegion":
        return cls((GridAxis.initial(count, length),))

    @classmethod
    def initial_2d(cls, counts: tuple[int, int], lengths: tuple[float, float]) -> "GridRegion":
        return cls(tuple(GridAxis.initial(c, length) for c, length in zip(counts, lengths)))

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ax.count for ax in self.axes)

    @property
    def num_points(self) -> int:
        return int(np.prod(self.shape))

    def points(self) -> np.ndarray:
        """All grid points, row-major over the axes, shape ``(num_points, ndim)``."""
        coords = [ax.coordinates() for ax in self.axes]
        mesh = np.meshgrid(*coords, indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, self.ndim)

    def point(self, flat_index: int) -> np.ndarray:
        multi = np.unravel_index(flat_index, self.shape)
        return np.array([ax.coordinate(int(i)) for ax, i in zip(self.axes, multi)])

    def center(self) -> np.ndarray:
        return np.array([ax.midpoint for ax in self.axes])

    def contains(self, point) -> bool:
        """Whether a physical point lies inside the region's cell span."""
        p = np.atleast_1d(np.asarray(point, dtype=float))
        if p.shape != (self.ndim,):
            raise ValueError(f"expected a {self.ndim}-vector, got shape {p.shape}")
        return all(ax.lo <= x <= ax.lo + ax.length for ax, x in zip(self.axes, p))


@dataclass(frozen=True)
class Partition:
    """Two overlapping sub-regions of a parent, sliced along one axis.

    ``left`` spans the first ``next_count`` indices of the parent's split axis
    and ``right`` the last ``next_count``; both agree with the parent on every
    other axis.
    """

    parent: GridRegion
    left: GridRegion
    right: GridRegion
    split_dim: int
    midpoint: float
    next_count: int
    overlap_count: int

    @property
    def delta(self) -> float:
        """Half-width of the split threshold offset, in grid-step units.

        Reconstructs the offset used by the threshold-set formulation of the
        partition; the index-slice representation is authoritative.
        """
        return self.next_count - self.parent.axes[self.split_dim].count / 2.0


def split(region: GridRegion, alpha: float) -> Partition:
    """Split a region into two overlapping halves along its longest dimension.

    The split axis maximizes physical point extent, ties broken toward the
    lowest axis index.  Each side keeps ``overlap_count(n, alpha)`` indices.
    """
    extents = [ax.extent for ax in region.axes]
    split_dim = int(np.argmax(extents))
    axis = region.axes[split_dim]
    if axis.count < 2:
        raise CannotSplitError(
            f"region with shape {region.shape} has no axis with >= 2 points"
        )
    next_count = overlap_count(axis.count, alpha)

    left_axis = dataclasses.replace(axis, count=next_count)
    right_axis = dataclasses.replace(
        axis, origin=axis.origin + axis.count - next_count, count=next_count
    )
    left_axes = list(region.axes)
    right_axes = list(region.axes)
    left_axes[split_dim] = left_axis
    right_axes[split_dim] = right_axis

    return Partition(
        parent=region,
        left=GridRegion(tuple(left_axes)),
        right=GridRegion(tuple(right_axes)),
        split_dim=split_dim,
        midpoint=axis.midpoint,
        next_count=next_count,
        overlap_count=2 * next_count - axis.count,
    )


def symmetric_partner(point, region: GridRegion, split_dim: int) -> np.ndarray:
    """Reflect the split coordinate of ``point`` about the region midpoint.

    In region-local coordinates this is ``u -> L - u`` along the split axis;
    all other coordinates are unchanged.  Involutive.
    """
    p = np.atleast_1d(np.asarray(point, dtype=float))
    if not region.contains(p):
        raise ValueError(f"point {p} lies outside the region's bounding box")
    out = p.copy()
    out[split_dim] = 2.0 * region.axes[split_dim].midpoint - p[split_dim]
    return out


def enumerate_points(region: GridRegion) -> np.ndarray:
    """Materialize the region's grid points (row-major)."""
    return region.points()

"""Grids, overlapping partitions, and mirror partners.

The search space is a uniform grid of candidate target locations.  Each
search step splits the current region into two halves that share a tunable
fraction of points: alpha = 0 is classical disjoint bisection, larger alpha
keeps more points on both sides.
"""

import numpy as np

from overlap_search import (
    GridRegion,
    enumerate_points,
    overlap_count,
    split,
    symmetric_partner,
)

# An 8-point grid over a 500 m interval: points sit at cell centers.
region = GridRegion.initial_1d(8, 500.0)
print("grid points:", enumerate_points(region)[:, 0])

# How many points does each half keep?  The halving rule rounds (1/2 + alpha) * n
# to the nearest integer (ties to even) and never drops below ceil(n / 2).
print("\nretained points per side, n = 8:")
for alpha in (0.0, 0.1, 0.2, 0.25):
    print(f"  alpha = {alpha:4.2f} -> {overlap_count(8, alpha)} of 8")

# Anatomy of one split.
part = split(region, 0.2)
print("\nsplit with alpha = 0.2:")
print("  left  spans indices", part.left.axes[0].origin, "..",
      part.left.axes[0].origin + part.left.axes[0].count - 1)
print("  right spans indices", part.right.axes[0].origin, "..",
      part.right.axes[0].origin + part.right.axes[0].count - 1)
print("  shared points:", part.overlap_count)
print("  midpoint:", part.midpoint)

# Every point has a mirror partner across the midpoint; partners swap the
# exclusive sets, which is what makes the closed-form error analysis work.
for x in (31.25, 156.25, 250.0):
    partner = symmetric_partner([x], region, 0)[0]
    print(f"  partner of {x:7.2f} is {partner:7.2f}")

# In two dimensions the split always runs along the longer physical side.
region2 = GridRegion.initial_2d((16, 8), (500.0, 200.0))
part2 = split(region2, 0.1)
print("\n2D region 16x8 over 500m x 200m splits along axis", part2.split_dim)
print("child shapes:", part2.left.shape, part2.right.shape)

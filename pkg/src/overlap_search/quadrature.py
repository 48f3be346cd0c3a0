"""Small quadrature toolkit: adaptive Simpson and tensorized Gauss-Legendre."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when a quadrature scheme fails to reach its tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Scheme selection plus absolute tolerance for the error integrals."""

    scheme: str = "adaptive_simpson"
    nodes: int = 64
    abs_tolerance: float = 1e-8

    def __post_init__(self) -> None:
        if self.scheme not in ("adaptive_simpson", "gauss_legendre"):
            raise ValueError(f"unknown quadrature scheme: {self.scheme!r}")
        if self.abs_tolerance <= 0:
            raise ValueError("abs_tolerance must be positive")
        if self.nodes < 2:
            raise ValueError("nodes must be >= 2")


def _simpson(fa: float, fm: float, fb: float, a: float, b: float) -> float:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a}, {b}] "
            f"(residual {abs(delta):.3e} > {15.0 * tol:.3e})"
        )
    return _adaptive_simpson(
        f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1
    ) + _adaptive_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)


def adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    """Integrate a scalar function on [a, b] to absolute tolerance ``tol``."""
    if b <= a:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, a, b)
    return _adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol, max_depth)


def gauss_legendre_nodes(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def gauss_legendre_1d(f, a: float, b: float, n: int) -> float:
    if b <= a:
        return 0.0
    x, w = gauss_legendre_nodes(n, a, b)
    vals = np.array([f(xi) for xi in x])
    return float(w @ vals)


def integrate_1d(f, a: float, b: float, spec: QuadratureSpec) -> float:
    """Integrate a scalar function with the scheme selected by ``spec``.

    The Gauss-Legendre path doubles the node count until two successive
    estimates agree to ``abs_tolerance``.
    """
    if b <= a:
        return 0.0
    if spec.scheme == "adaptive_simpson":
        return adaptive_simpson(f, a, b, spec.abs_tolerance)
    n = spec.nodes
    prev = gauss_legendre_1d(f, a, b, n)
    while n <= 4096:
        n *= 2
        cur = gauss_legendre_1d(f, a, b, n)
        if abs(cur - prev) <= spec.abs_tolerance:
            return cur
        prev = cur
    raise QuadratureError(
        f"Gauss-Legendre did not stabilize to {spec.abs_tolerance:.3e} by {n} nodes"
    )


def integrate_2d(f2, ax: float, bx: float, ay: float, by: float, spec: QuadratureSpec) -> float:
    """Tensorized Gauss-Legendre integral of a vectorized 2-argument function.

    ``f2(X, Y)`` must accept broadcast coordinate grids.  Node counts double
    until two successive refinements agree to ``abs_tolerance``.
    """
    if bx <= ax or by <= ay:
        return 0.0

    def tensor_value(n: int) -> float:
        x, wx = gauss_legendre_nodes(n, ax, bx)
        y, wy = gauss_legendre_nodes(n, ay, by)
        vals = f2(x[:, None], y[None, :])
        return float(wx @ vals @ wy)

    n = spec.nodes
    prev = tensor_value(n)
    while n <= 1024:
        n *= 2
        cur = tensor_value(n)
        if abs(cur - prev) <= spec.abs_tolerance:
            return cur
        prev = cur
    raise QuadratureError(
        f"2D Gauss-Legendre did not stabilize to {spec.abs_tolerance:.3e} by {n} nodes/axis"
    )

"""Acceptance suite: one test per criterion, printing one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the table.  Each
test evaluates its criterion at the stated tolerance and reports the measured
values before asserting, so failures carry their diagnostics.
"""

import math

import numpy as np
import pytest

from overlap_search import (
    EAConfig,
    GridRegion,
    PropagationModel,
    QuadratureSpec,
    SensorPolicy,
    end_to_end_error,
    error_derivative_alpha,
    optimize_placement_ea,
    run_search,
    split,
    step_error_continuous_1d,
    step_error_monte_carlo,
    step_error_symmetric_discrete,
    success_rate,
    tree_depth_approx,
    tree_depth_exact,
    uniform_heuristic_placement,
)
from overlap_search.experiments import analytic_step_errors

L = 500.0
TABLE1 = PropagationModel(p0=20.0, eta=1.0, epsilon=10.0, sigma=1.0 / math.sqrt(2.0))
TABLE3 = PropagationModel(p0=20.0, eta=1.0, epsilon=1e-4, sigma=1.0)


def table1_sensors(n: int) -> np.ndarray:
    step = L / n
    s = math.floor(n / 4) * step
    return np.array([[s], [L - s]])


def _report(num: int, name: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"CRITERION {num} ({name}): {status}")
    for line in failures:
        print(f"    {line}")
    assert not failures, f"criterion {num} failed: {failures}"


def test_criterion_1_derivative_anchor():
    """Closed-form overlap derivative: exact -1 at alpha=0 and finite-difference
    agreement across the alpha grid (second-order one-sided at the boundary)."""
    failures = []
    at_zero = error_derivative_alpha(L, 0.0, TABLE1, L / 4.0)
    if abs(at_zero + 1.0) > 1e-9:
        failures.append(f"derivative(0) = {at_zero!r}, expected -1 within 1e-9")

    quad = QuadratureSpec("adaptive_simpson", abs_tolerance=1e-10)
    h = 1e-4

    def pe(a: float) -> float:
        return step_error_continuous_1d(L, a, TABLE1, L / 4.0, quad)

    for i in range(10):
        alpha = 0.05 * i
        deriv = error_derivative_alpha(L, alpha, TABLE1, L / 4.0)
        if alpha == 0.0:
            fd = (-3.0 * pe(alpha) + 4.0 * pe(alpha + h) - pe(alpha + 2.0 * h)) / (2.0 * h)
        else:
            fd = (pe(alpha + h) - pe(alpha - h)) / (2.0 * h)
        if abs(deriv - fd) > 1e-3:
            failures.append(f"alpha={alpha:.2f}: |closed form - fd| = {abs(deriv - fd):.2e} > 1e-3")
    _report(1, "overlap-derivative anchor", failures)


def test_criterion_2_closed_form_vs_monte_carlo():
    """Symmetric closed form agrees with the nearest-neighbour Monte Carlo
    oracle at one million trials for every tabulated configuration."""
    failures = []
    for n in (8, 16):
        for alpha in (0.0, 0.1, 0.25):
            region = GridRegion.initial_1d(n, L)
            part = split(region, alpha)
            sensors = table1_sensors(n)
            analytic = step_error_symmetric_discrete(region, part, TABLE1, sensors)
            report = step_error_monte_carlo(
                region, part, TABLE1, sensors, 1_000_000, master_seed=1_000 * n + int(100 * alpha)
            )
            gap = abs(analytic - report.mc_estimate)
            if gap > report.mc_half_width:
                failures.append(
                    f"n={n} alpha={alpha}: |{analytic:.3e} - {report.mc_estimate:.3e}| "
                    f"= {gap:.3e} > {report.mc_half_width:.3e}"
                )
    _report(2, "closed form vs Monte Carlo", failures)


def test_criterion_3_riemann_convergence():
    """Discrete-to-continuous convergence of the step error across the grid
    family: per-alpha non-increasing gaps and a 0.01 bound at n=128."""
    failures = []
    ns = (8, 16, 32, 64, 128)
    for i in range(11):
        alpha = round(0.05 * i, 10)
        cont = step_error_continuous_1d(L, alpha, TABLE1, L / 4.0)
        gaps = []
        for n in ns:
            region = GridRegion.initial_1d(n, L)
            part = split(region, alpha)
            disc = step_error_symmetric_discrete(region, part, TABLE1, table1_sensors(n))
            gaps.append(abs(disc - cont))
        if gaps[-1] > 0.01:
            failures.append(f"alpha={alpha}: |discrete(128) - continuous| = {gaps[-1]:.3e} > 0.01")
        if not all(b <= a for a, b in zip(gaps, gaps[1:])):
            pretty = " ".join(f"{g:.3e}" for g in gaps)
            failures.append(f"alpha={alpha}: gaps not non-increasing over n={ns}: {pretty}")
    _report(3, "Riemann convergence", failures)


def test_criterion_4_tree_depth():
    """Exact partition-iteration depth versus the log-ratio approximation."""
    failures = []
    exact_zero = tree_depth_exact(100_000, 1, 0.0)
    if exact_zero != 17:
        failures.append(f"exact depth at alpha=0 is {exact_zero}, expected 17")
    worst = 0
    worst_alpha = 0.0
    for i in range(25):
        alpha = 0.01 * i
        gap = abs(tree_depth_exact(100_000, 1, alpha) - tree_depth_approx(100_000, 1, alpha))
        if gap > worst:
            worst, worst_alpha = gap, alpha
    if worst > 1:
        failures.append(
            f"max |exact - approx| over the alpha grid = {worst} (> 1), at alpha={worst_alpha:.2f}"
        )
    _report(4, "tree depth approximation", failures)


def test_criterion_5_end_to_end_consistency():
    """Full-simulation success rate versus the product of closed-form step
    errors at one hundred thousand trials."""
    failures = []
    policy = SensorPolicy.symmetric_fixed_fraction(0.25)
    space = GridRegion.initial_1d(128, L)
    for alpha in (0.0, 0.1):
        step_errors = analytic_step_errors(128, 1, L, TABLE1, alpha, policy, max_steps=5)
        predicted = 1.0 - end_to_end_error(step_errors)
        estimate = success_rate(space, TABLE1, alpha, 5, policy, 100_000, 20_250_810)
        gap = abs(predicted - estimate.rate)
        if gap > estimate.half_width:
            failures.append(
                f"alpha={alpha}: |predicted {predicted:.6f} - simulated {estimate.rate:.6f}| "
                f"= {gap:.6f} > 3-sigma width {estimate.half_width:.6f}"
            )
    _report(5, "end-to-end consistency", failures)


def test_criterion_6_noise_limits():
    """Continuous step error approaches (1/2 - alpha) as noise dominates and
    vanishes as noise disappears.  The signal range is the largest
    measurement-space half-distance between mirrored positions."""
    failures = []
    xs = np.linspace(0.0, L / 2.0, 20_001)
    h1 = TABLE1.p0 - 10.0 * np.log10(np.abs(xs - L / 4.0) + TABLE1.epsilon)
    h2 = TABLE1.p0 - 10.0 * np.log10(np.abs(L - L / 4.0 - xs) + TABLE1.epsilon)
    signal_range = float(np.max(np.abs(h1 - h2)) / math.sqrt(2.0))
    for alpha in (0.0, 0.2):
        big = PropagationModel(TABLE1.p0, TABLE1.eta, TABLE1.epsilon, 1e4 * signal_range)
        value = step_error_continuous_1d(L, alpha, big, L / 4.0)
        if abs(value - (0.5 - alpha)) > 0.005:
            failures.append(
                f"alpha={alpha}, sigma=1e4*range: {value:.6f} vs {0.5 - alpha} (tol 0.005)"
            )
        small = PropagationModel(TABLE1.p0, TABLE1.eta, TABLE1.epsilon, 1e-3 * signal_range)
        value = step_error_continuous_1d(L, alpha, small, L / 4.0)
        if value > 1e-6:
            failures.append(f"alpha={alpha}, sigma=1e-3*range: {value:.3e} > 1e-6")
    _report(6, "noise limit cases", failures)


def test_criterion_7_ea_vs_heuristic():
    """Evolutionary placement never does meaningfully worse than the uniform
    heuristic, with a monotone incumbent."""
    failures = []
    for i, alpha in enumerate((0.05, 0.15, 0.25, 0.35, 0.45)):

        def objective(s: float, _a=alpha) -> float:
            return step_error_continuous_1d(L, _a, TABLE3, s)

        result = optimize_placement_ea(objective, (0.0, L / 2.0), EAConfig(seed=100 + i))
        heuristic = objective(uniform_heuristic_placement(L, alpha))
        if result.best_value > heuristic + 0.005:
            failures.append(
                f"alpha={alpha}: EA {result.best_value:.3e} > heuristic {heuristic:.3e} + 0.005"
            )
        incumbents = [g.incumbent_value for g in result.history]
        if not all(b <= a for a, b in zip(incumbents, incumbents[1:])):
            failures.append(f"alpha={alpha}: incumbent best is not monotone")
    _report(7, "EA vs heuristic placement", failures)


def test_criterion_8_noiseless_depths():
    """Noiseless searches on an 8-point grid: 3 disjoint halvings reach a
    single point, and the 5-3-2-1 overlap schedule takes 4 steps."""
    failures = []
    space = GridRegion.initial_1d(8, L)
    policy = SensorPolicy.symmetric_fixed_fraction(0.25)
    rng = np.random.default_rng(0)

    trace = run_search(space, TABLE1, 0.0, 3, policy, space.point(6), rng, noiseless=True)
    if trace.final_region.num_points != 1 or trace.realized_depth != 3 or not trace.success:
        failures.append(
            f"alpha=0: depth {trace.realized_depth}, final size {trace.final_region.num_points}, "
            f"success {trace.success}"
        )

    counts = [s.region_before.axes[0].count for s in trace.steps]
    trace = run_search(space, TABLE1, 0.1, 4, policy, space.point(6), rng, noiseless=True)
    counts = [s.partition.next_count for s in trace.steps]
    if counts != [5, 3, 2, 1]:
        failures.append(f"alpha=0.1 retained counts {counts}, expected [5, 3, 2, 1]")
    if trace.realized_depth != 4 or trace.final_region.num_points != 1 or not trace.success:
        failures.append(
            f"alpha=0.1: depth {trace.realized_depth}, final size "
            f"{trace.final_region.num_points}, success {trace.success}"
        )
    _report(8, "noiseless tree depths", failures)

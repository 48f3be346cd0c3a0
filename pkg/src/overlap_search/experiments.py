"""Named experiments over the library, driven by JSON config sections.

Each experiment resolves its section against documented defaults, runs the
relevant operations, and returns CSV tables (header plus rows).  All
randomness derives from the section seed, so outputs are byte-identical
across runs with the same config.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .analysis import (
    end_to_end_error,
    error_derivative_alpha,
    step_error_continuous_1d,
    step_error_monte_carlo,
    step_error_symmetric_discrete,
    tree_depth_approx,
    tree_depth_exact,
)
from .grid import GridRegion, overlap_count, split
from .measurement import PropagationModel
from .placement import EAConfig, optimize_placement_ea, uniform_heuristic_placement
from .quadrature import QuadratureSpec
from .search import SensorPolicy, sensors_for_step, success_rate


class ConfigError(ValueError):
    """Raised for unparseable or invalid experiment configuration."""


SIGMA_TABLE1 = 1.0 / math.sqrt(2.0)


def _grid(start: float, stop: float, step: float) -> list[float]:
    n = int(round((stop - start) / step))
    return [round(start + i * step, 10) for i in range(n + 1)]


DEFAULTS: dict[str, dict] = {
    "error_vs_alpha": {
        "length": 500.0,
        "n_values": [8, 16, 32, 64, 128],
        "p0": 20.0,
        "eta": 1.0,
        "sigma": SIGMA_TABLE1,
        "epsilon": 10.0,
        "alphas": _grid(0.0, 0.5, 0.025),
        "sensor_fraction": 0.25,
        "sensors": None,
        "trials": 100_000,
        "seed": 20250810,
    },
    "depth_vs_alpha": {
        "n0": 100_000,
        "n_beta": 1,
        "alphas": _grid(0.0, 0.24, 0.01),
        "seed": 20250810,
    },
    "error_vs_beta": {
        "length": 500.0,
        "p0": 20.0,
        "eta": 1.0,
        "sigma": 0.2,
        "epsilon": 10.0,
        "n0": 2**14,
        "n_beta": 2**7,
        "betas": list(range(14, 34)),
        "with_mc": False,
        "trials": 100_000,
        "seed": 20250810,
    },
    "optimize_placement": {
        "length": 500.0,
        "p0": 20.0,
        "eta": 1.0,
        "sigma": 1.0,
        "epsilon": 1e-4,
        "alphas": _grid(0.05, 0.45, 0.05),
        "population_size": 50,
        "generations": 50,
        "mutation_prob": 0.2,
        "mutation_sigma": 10.0,
        "mutation_per_gene_prob": 0.2,
        "crossover_prob": 0.5,
        "blend_alpha": 0.5,
        "tournament_size": 3,
        "coupled_sigma": SIGMA_TABLE1,
        "coupled_epsilon": 10.0,
        "coupled_n_values": [8, 16, 32, 64, 128],
        "coupled_alphas": _grid(0.0, 0.5, 0.025),
        "seed": 20250810,
    },
    "simulate": {
        "length": 500.0,
        "n0": 128,
        "p0": 20.0,
        "eta": 1.0,
        "sigma": SIGMA_TABLE1,
        "epsilon": 10.0,
        "alpha": 0.1,
        "beta": 5,
        "policy": "fixed_fraction",
        "fraction": 0.25,
        "selection_rule": "max",
        "noiseless": False,
        "true_location": None,
        "trials": 100_000,
        "seed": 20250810,
    },
    "validate": {
        "length": 500.0,
        "p0": 20.0,
        "eta": 1.0,
        "sigma": SIGMA_TABLE1,
        "epsilon": 10.0,
        "sensors": None,
        "trials": 100_000,
        "seed": 20250810,
    },
}

EXPERIMENTS = tuple(DEFAULTS)


def load_config_file(path) -> dict:
    try:
        raw = Path(path).read_text(encoding="utf-8")
        data = json.loads(raw)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object with experiment sections")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    return data


def resolve_config(experiment: str, file_config: dict | None = None, **overrides) -> dict:
    """Merge defaults, the experiment's config-file section, and CLI overrides."""
    if experiment not in DEFAULTS:
        raise ConfigError(f"unknown experiment: {experiment!r}")
    cfg = dict(DEFAULTS[experiment])
    section = (file_config or {}).get(experiment, {})
    if not isinstance(section, dict):
        raise ConfigError(f"config section {experiment!r} must be an object")
    unknown = set(section) - set(cfg)
    if unknown:
        raise ConfigError(f"unknown keys in section {experiment!r}: {sorted(unknown)}")
    cfg.update(section)
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in cfg:
            raise ConfigError(f"experiment {experiment!r} takes no override {key!r}")
        cfg[key] = value
    for key in ("alphas", "betas", "n_values", "coupled_alphas", "coupled_n_values"):
        if key in cfg and not cfg[key]:
            raise ConfigError(f"{experiment}.{key} must be a non-empty list")
    if "trials" in cfg and int(cfg["trials"]) < 1:
        raise ConfigError(f"{experiment}.trials must be >= 1")
    return cfg


def _model(cfg) -> PropagationModel:
    try:
        return PropagationModel(
            p0=float(cfg["p0"]),
            eta=float(cfg["eta"]),
            epsilon=float(cfg["epsilon"]),
            sigma=float(cfg["sigma"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid propagation model parameters: {exc}") from exc


def _row_seed(seed: int, *indices: int) -> int:
    return int(np.random.SeedSequence([int(seed), *indices]).generate_state(1)[0])


def _table1_sensor_pair(length: float, n: int, fraction: float) -> np.ndarray:
    step = length / n
    s = math.floor(fraction * n) * step
    return np.array([[s], [length - s]])


def _explicit_pair(sensors) -> np.ndarray:
    arr = np.asarray(sensors, dtype=float).reshape(-1)
    if arr.size != 2:
        raise ConfigError("explicit 'sensors' must hold exactly two positions")
    return arr[:, None]


def cmd_error_vs_alpha(cfg: dict) -> dict:
    """Discrete, continuous, and Monte Carlo step error across the alpha grid."""
    model = _model(cfg)
    length = float(cfg["length"])
    alphas = [float(a) for a in cfg["alphas"]]
    n_values = [int(n) for n in cfg["n_values"]]
    trials = int(cfg["trials"])
    fraction = float(cfg["sensor_fraction"])
    explicit = cfg["sensors"]

    rows = []
    for ia, alpha in enumerate(alphas):
        if explicit is not None:
            s_cont = float(np.asarray(explicit, dtype=float).reshape(-1)[0])
        else:
            s_cont = fraction * length
        pe_cont = step_error_continuous_1d(length, alpha, model, s_cont)
        rows.append([alpha, None, None, pe_cont, None, None])
        for i_n, n in enumerate(n_values):
            region = GridRegion.initial_1d(n, length)
            part = split(region, alpha)
            sensors = (
                _explicit_pair(explicit)
                if explicit is not None
                else _table1_sensor_pair(length, n, fraction)
            )
            pe_disc = step_error_symmetric_discrete(region, part, model, sensors)
            report = step_error_monte_carlo(
                region, part, model, sensors, trials, _row_seed(cfg["seed"], ia, i_n)
            )
            rows.append([alpha, n, pe_disc, None, report.mc_estimate, report.mc_half_width])
    header = ["alpha", "n", "pe_discrete", "pe_continuous", "pe_mc", "mc_half_width"]
    return {"error_vs_alpha.csv": (header, rows)}


def cmd_depth_vs_alpha(cfg: dict) -> dict:
    """Exact versus approximate tree depth across the alpha grid."""
    n0 = int(cfg["n0"])
    n_beta = int(cfg["n_beta"])
    rows = [
        [alpha, tree_depth_exact(n0, n_beta, float(alpha)), tree_depth_approx(n0, n_beta, float(alpha))]
        for alpha in cfg["alphas"]
    ]
    return {"depth_vs_alpha.csv": (["alpha", "beta_exact", "beta_approx"], rows)}


def find_alpha_for_depth(n0: int, n_beta: int, beta: int, resolution: float = 1e-4) -> float | None:
    """An overlap parameter whose exact partition iteration takes ``beta`` steps.

    Scans [0, 0.25) and returns the middle of the matching interval, or None
    when no overlap value achieves the requested depth.
    """
    matches = []
    steps = int(0.25 / resolution)
    for i in range(steps):
        alpha = i * resolution
        if tree_depth_exact(n0, n_beta, alpha) == beta:
            matches.append(alpha)
    if not matches:
        return None
    return matches[len(matches) // 2]


def analytic_step_errors(
    n0: int,
    n_beta: int,
    length: float,
    model: PropagationModel,
    alpha: float,
    policy: SensorPolicy,
    max_steps: int | None = None,
) -> list[float]:
    """Closed-form step errors along the deterministic shrink schedule.

    The step error does not depend on which side each step keeps, so the
    left child stands in for every trajectory with the same counts.
    """
    region = GridRegion.initial_1d(n0, length)
    errors: list[float] = []
    t = 0
    while region.axes[0].count > n_beta:
        if max_steps is not None and t >= max_steps:
            break
        part = split(region, alpha)
        sensors = sensors_for_step(policy, region, part.split_dim, alpha, t)
        errors.append(step_error_symmetric_discrete(region, part, model, sensors))
        region = part.left
        t += 1
    return errors


def cmd_error_vs_beta(cfg: dict) -> dict:
    """End-to-end error versus tree depth, with the overlap solved per depth.

    Rows whose depth no overlap value in [0, 0.25) can achieve are emitted
    with empty value fields.  The Monte Carlo column runs only when
    ``with_mc`` is set.
    """
    model = _model(cfg)
    length = float(cfg["length"])
    n0 = int(cfg["n0"])
    n_beta = int(cfg["n_beta"])
    policy = SensorPolicy.symmetric_edge_index()
    rows = []
    for ib, beta in enumerate(cfg["betas"]):
        beta = int(beta)
        alpha = find_alpha_for_depth(n0, n_beta, beta)
        if alpha is None:
            rows.append([beta, None, None, None, None])
            continue
        pe_total = end_to_end_error(
            analytic_step_errors(n0, n_beta, length, model, alpha, policy)
        )
        pe_mc = None
        half_width = None
        if cfg["with_mc"]:
            est = success_rate(
                GridRegion.initial_1d(n0, length),
                model,
                alpha,
                beta,
                policy,
                int(cfg["trials"]),
                _row_seed(cfg["seed"], ib),
            )
            pe_mc = 1.0 - est.rate
            half_width = est.half_width
        rows.append([beta, alpha, pe_total, pe_mc, half_width])
    header = ["beta", "alpha_used", "pe_total_analytic", "pe_total_mc", "mc_half_width"]
    return {"error_vs_beta.csv": (header, rows)}


def cmd_optimize_placement(cfg: dict) -> dict:
    """EA-optimized sensor offsets versus the uniform heuristic, per alpha.

    Also emits the step-error curve under the alpha-coupled placement rule
    (heuristic offsets applied to the fixed-sensor model family).
    """
    model = _model(cfg)
    length = float(cfg["length"])
    ea_rows = []
    for ia, alpha in enumerate(cfg["alphas"]):
        alpha = float(alpha)

        def objective(s, _a=alpha):
            return step_error_continuous_1d(length, _a, model, s)

        ea_cfg = EAConfig(
            population_size=int(cfg["population_size"]),
            generations=int(cfg["generations"]),
            mutation_prob=float(cfg["mutation_prob"]),
            mutation_sigma=float(cfg["mutation_sigma"]),
            mutation_per_gene_prob=float(cfg["mutation_per_gene_prob"]),
            crossover_prob=float(cfg["crossover_prob"]),
            blend_alpha=float(cfg["blend_alpha"]),
            tournament_size=int(cfg["tournament_size"]),
            seed=_row_seed(cfg["seed"], ia),
        )
        result = optimize_placement_ea(objective, (0.0, length / 2.0), ea_cfg)
        s_heur = uniform_heuristic_placement(length, alpha)
        ea_rows.append([alpha, result.best_position, s_heur, result.best_value, objective(s_heur)])

    coupled_model = PropagationModel(
        p0=float(cfg["p0"]),
        eta=float(cfg["eta"]),
        epsilon=float(cfg["coupled_epsilon"]),
        sigma=float(cfg["coupled_sigma"]),
    )
    coupled_rows = []
    for alpha in cfg["coupled_alphas"]:
        alpha = float(alpha)
        s = uniform_heuristic_placement(length, alpha)
        pe_cont = step_error_continuous_1d(length, alpha, coupled_model, s)
        coupled_rows.append([alpha, None, None, pe_cont])
        for n in cfg["coupled_n_values"]:
            region = GridRegion.initial_1d(int(n), length)
            part = split(region, alpha)
            sensors = np.array([[s], [length - s]])
            pe_disc = step_error_symmetric_discrete(region, part, coupled_model, sensors)
            coupled_rows.append([alpha, int(n), pe_disc, None])

    return {
        "optimize_placement.csv": (
            ["alpha", "ea_s", "heuristic_s", "pe_ea", "pe_heuristic"],
            ea_rows,
        ),
        "alpha_coupled_error.csv": (
            ["alpha", "n", "pe_discrete", "pe_continuous"],
            coupled_rows,
        ),
    }


def _policy_from_config(cfg: dict) -> SensorPolicy:
    kind = cfg["policy"]
    if kind == "fixed_fraction":
        return SensorPolicy.symmetric_fixed_fraction(float(cfg["fraction"]))
    if kind == "alpha_coupled":
        return SensorPolicy.symmetric_alpha_coupled()
    if kind == "edge_index":
        return SensorPolicy.symmetric_edge_index()
    raise ConfigError(f"unknown policy kind: {kind!r}")


def cmd_simulate(cfg: dict) -> dict:
    """Full search simulation: success rate plus the analytic prediction."""
    model = _model(cfg)
    length = float(cfg["length"])
    n0 = int(cfg["n0"])
    alpha = float(cfg["alpha"])
    beta = int(cfg["beta"])
    policy = _policy_from_config(cfg)
    space = GridRegion.initial_1d(n0, length)
    true_location = cfg["true_location"]
    est = success_rate(
        space,
        model,
        alpha,
        beta,
        policy,
        int(cfg["trials"]),
        int(cfg["seed"]),
        noiseless=bool(cfg["noiseless"]),
        true_location=true_location,
        selection_rule=cfg["selection_rule"],
    )
    pe_analytic = None
    if true_location is None and cfg["selection_rule"] == "max" and not cfg["noiseless"]:
        pe_analytic = end_to_end_error(
            analytic_step_errors(n0, n_beta=1, length=length, model=model,
                                 alpha=alpha, policy=policy, max_steps=beta)
        )
    header = [
        "alpha", "beta", "n0", "trials", "successes",
        "success_rate", "half_width", "pe_analytic",
    ]
    row = [alpha, beta, n0, est.trials, est.successes, est.rate, est.half_width, pe_analytic]
    return {"simulate.csv": (header, [row])}


def cmd_validate(cfg: dict) -> list[tuple[str, bool, str]]:
    """Cross-validation suite: each check compares two independent routes.

    Returns (name, passed, detail) triples; the CLI renders them and exits
    nonzero when any check fails.
    """
    model = _model(cfg)
    length = float(cfg["length"])
    trials = int(cfg["trials"])
    seed = int(cfg["seed"])
    explicit = cfg["sensors"]
    results: list[tuple[str, bool, str]] = []

    value = error_derivative_alpha(length, 0.0, model, length / 4.0)
    results.append(
        ("derivative-anchor", abs(value + 1.0) <= 1e-9, f"derivative at alpha=0: {value:.12f}")
    )

    quad = QuadratureSpec("adaptive_simpson", abs_tolerance=1e-10)
    h = 1e-4
    worst = 0.0
    for i in range(10):
        alpha = 0.05 * i
        deriv = error_derivative_alpha(length, alpha, model, length / 4.0)
        pe = lambda a: step_error_continuous_1d(length, a, model, length / 4.0, quad)
        if alpha == 0.0:
            fd = (-3.0 * pe(alpha) + 4.0 * pe(alpha + h) - pe(alpha + 2 * h)) / (2.0 * h)
        else:
            fd = (pe(alpha + h) - pe(alpha - h)) / (2.0 * h)
        worst = max(worst, abs(deriv - fd))
    results.append(
        ("derivative-vs-fd", worst <= 1e-3, f"max |closed form - finite difference| = {worst:.2e}")
    )

    worst_gap = 0.0
    all_ok = True
    for i_n, n in enumerate((8, 16)):
        for ia, alpha in enumerate((0.0, 0.1, 0.25)):
            region = GridRegion.initial_1d(n, length)
            part = split(region, alpha)
            sensors = (
                _explicit_pair(explicit)
                if explicit is not None
                else _table1_sensor_pair(length, n, 0.25)
            )
            analytic = step_error_symmetric_discrete(region, part, model, sensors)
            report = step_error_monte_carlo(
                region, part, model, sensors, trials, _row_seed(seed, i_n, ia)
            )
            gap = abs(analytic - report.mc_estimate)
            worst_gap = max(worst_gap, gap)
            if gap > report.mc_half_width:
                all_ok = False
    results.append(
        ("analytic-vs-mc", all_ok, f"worst |closed form - Monte Carlo| = {worst_gap:.2e}")
    )

    worst_res = 0.0
    for alpha in _grid(0.0, 0.5, 0.05):
        region = GridRegion.initial_1d(128, length)
        part = split(region, alpha)
        sensors = _table1_sensor_pair(length, 128, 0.25)
        disc = step_error_symmetric_discrete(region, part, model, sensors)
        cont = step_error_continuous_1d(length, alpha, model, length / 4.0)
        worst_res = max(worst_res, abs(disc - cont))
    results.append(
        ("discrete-vs-continuous", worst_res <= 0.01, f"worst |n=128 - integral| = {worst_res:.2e}")
    )

    worst_depth = max(
        abs(tree_depth_exact(100_000, 1, 0.01 * i) - tree_depth_approx(100_000, 1, 0.01 * i))
        for i in range(25)
    )
    results.append(
        ("depth-exact-vs-approx", worst_depth <= 2, f"max |exact - approx| = {worst_depth}")
    )
    return results


COMMANDS = {
    "error-vs-alpha": cmd_error_vs_alpha,
    "depth-vs-alpha": cmd_depth_vs_alpha,
    "error-vs-beta": cmd_error_vs_beta,
    "optimize-placement": cmd_optimize_placement,
    "simulate": cmd_simulate,
}

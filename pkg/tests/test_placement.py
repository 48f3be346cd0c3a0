import math

import numpy as np
import pytest

from overlap_search import (
    EAConfig,
    PropagationModel,
    optimize_placement_ea,
    step_error_continuous_1d,
    uniform_heuristic_placement,
)

L = 500.0


@pytest.mark.parametrize("alpha,expected", [(0.0, 125.0), (0.25, 62.5), (0.5, 0.0)])
def test_uniform_heuristic_examples(alpha, expected):
    assert uniform_heuristic_placement(L, alpha) == pytest.approx(expected)


def test_uniform_heuristic_domain():
    with pytest.raises(ValueError):
        uniform_heuristic_placement(L, 0.6)
    with pytest.raises(ValueError):
        uniform_heuristic_placement(-1.0, 0.1)


def test_ea_config_validation():
    with pytest.raises(ValueError):
        EAConfig(population_size=0)
    with pytest.raises(ValueError):
        EAConfig(mutation_prob=1.5)
    with pytest.raises(ValueError):
        EAConfig(mutation_sigma=0.0)


def test_ea_finds_convex_minimum():
    result = optimize_placement_ea(lambda s: (s - 100.0) ** 2, (0.0, 250.0), EAConfig(seed=3))
    assert abs(result.best_position - 100.0) <= 1.0


def test_ea_deterministic():
    cfg = EAConfig(seed=12)
    a = optimize_placement_ea(lambda s: abs(s - 40.0), (0.0, 250.0), cfg)
    b = optimize_placement_ea(lambda s: abs(s - 40.0), (0.0, 250.0), cfg)
    assert a == b


def test_ea_incumbent_monotone_and_beats_initial_population():
    result = optimize_placement_ea(lambda s: math.sin(s / 7.0) + 0.002 * s, (0.0, 250.0),
                                   EAConfig(seed=5))
    values = [g.incumbent_value for g in result.history]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert result.best_value <= result.history[0].population_best
    assert len(result.history) == 51


def test_ea_candidates_stay_in_bounds():
    seen = []

    def objective(s):
        seen.append(s)
        return (s - 60.0) ** 2

    optimize_placement_ea(objective, (10.0, 90.0), EAConfig(seed=8, generations=20))
    arr = np.array(seen)
    assert arr.min() >= 10.0
    assert arr.max() <= 90.0


def test_ea_rejects_bad_bounds():
    with pytest.raises(ValueError):
        optimize_placement_ea(lambda s: s, (5.0, 5.0), EAConfig(seed=1))


def test_ea_beats_heuristic_on_step_error():
    """Reduced-size version of the placement study: the optimizer should never
    do worse than the uniform heuristic."""
    model = PropagationModel(p0=20.0, eta=1.0, epsilon=1e-4, sigma=1.0)
    for alpha in (0.05, 0.25):
        objective = lambda s, a=alpha: step_error_continuous_1d(L, a, model, s)
        result = optimize_placement_ea(objective, (0.0, L / 2.0),
                                       EAConfig(seed=21, generations=25))
        heuristic = objective(uniform_heuristic_placement(L, alpha))
        assert result.best_value <= heuristic + 1e-12

"""Sensor placement optimization for the one-step error probability.

The error is a non-smooth function of the sensor offset, so it is minimized
with a small real-valued evolutionary algorithm (tournament selection, blend
crossover, Gaussian per-gene mutation) and compared against the uniform
heuristic s = (L / 2) * (1/2 - alpha).  A single gene encodes the first
sensor offset in [0, L / 2]; the pair is completed by mirroring, which keeps
the symmetric-placement closed form applicable by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def uniform_heuristic_placement(length: float, alpha: float) -> float:
    """Heuristic sensor offset (L / 2) * (1/2 - alpha); the pair is {s, L - s}."""
    if length <= 0:
        raise ValueError("length must be positive")
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha must be in [0, 0.5], got {alpha}")
    return 0.5 * length * (0.5 - alpha)


@dataclass(frozen=True)
class EAConfig:
    """Evolutionary algorithm parameters."""

    population_size: int = 50
    generations: int = 50
    mutation_prob: float = 0.2
    mutation_sigma: float = 10.0
    mutation_per_gene_prob: float = 0.2
    crossover_prob: float = 0.5
    blend_alpha: float = 0.5
    tournament_size: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 1 or self.generations < 1 or self.tournament_size < 1:
            raise ValueError("population, generations, and tournament size must be >= 1")
        for name in ("mutation_prob", "mutation_per_gene_prob", "crossover_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.mutation_sigma <= 0:
            raise ValueError("mutation_sigma must be positive")


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    population_best: float
    incumbent_value: float
    incumbent_position: float


@dataclass(frozen=True)
class EAResult:
    best_position: float
    best_value: float
    history: tuple[GenerationStats, ...]


def optimize_placement_ea(objective, bounds: tuple[float, float], config: EAConfig) -> EAResult:
    """Minimize ``objective`` over ``bounds`` with a seeded evolutionary run.

    The incumbent best individual is carried forward each generation
    (elitism), so the reported best value never worsens.  Identical seeds give
    identical histories.
    """
    lo, hi = bounds
    if not hi > lo:
        raise ValueError(f"invalid bounds: ({lo}, {hi})")
    rng = np.random.default_rng(config.seed)
    cache: dict[float, float] = {}

    def evaluate(x: float) -> float:
        if x not in cache:
            cache[x] = float(objective(x))
        return cache[x]

    pop = list(lo + (hi - lo) * rng.random(config.population_size))
    fitness = [evaluate(x) for x in pop]
    best_i = int(np.argmin(fitness))
    incumbent, incumbent_value = pop[best_i], fitness[best_i]
    history = [GenerationStats(0, fitness[best_i], incumbent_value, incumbent)]

    for gen in range(1, config.generations + 1):
        offspring = []
        for _ in range(config.population_size):
            contenders = rng.integers(0, config.population_size, size=config.tournament_size)
            winner = contenders[int(np.argmin([fitness[i] for i in contenders]))]
            offspring.append(pop[winner])
        for i in range(0, config.population_size - 1, 2):
            if rng.random() < config.crossover_prob:
                gamma = (1.0 + 2.0 * config.blend_alpha) * rng.random() - config.blend_alpha
                x1, x2 = offspring[i], offspring[i + 1]
                offspring[i] = (1.0 - gamma) * x1 + gamma * x2
                offspring[i + 1] = gamma * x1 + (1.0 - gamma) * x2
        for i in range(config.population_size):
            if rng.random() < config.mutation_prob:
                if rng.random() < config.mutation_per_gene_prob:
                    offspring[i] += rng.normal(0.0, config.mutation_sigma)
        offspring = [min(max(x, lo), hi) for x in offspring]

        fitness = [evaluate(x) for x in offspring]
        worst_i = int(np.argmax(fitness))
        if incumbent_value < fitness[worst_i]:
            offspring[worst_i] = incumbent
            fitness[worst_i] = incumbent_value
        pop = offspring

        best_i = int(np.argmin(fitness))
        if fitness[best_i] < incumbent_value:
            incumbent, incumbent_value = pop[best_i], fitness[best_i]
        history.append(GenerationStats(gen, fitness[best_i], incumbent_value, incumbent))

    return EAResult(best_position=incumbent, best_value=incumbent_value, history=tuple(history))

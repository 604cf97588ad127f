"""Simple genetic algorithm with polynomial mutation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .base import ConfigMixin, Objective, RunRecord, Tracker, check_x0, spawn_rngs

__all__ = ["SgaConfig", "sga_minimize", "polynomial_mutation"]


@dataclass
class SgaConfig(ConfigMixin):
    population: int = 50
    tournament: int = 2
    crossover: float = 0.9
    mutation: float = 0.02
    eta: float = 20.0
    iterations: int = 500
    seed: int = 0
    max_evaluations: Optional[int] = None

    def validate(self) -> None:
        if self.population < 2:
            raise ValueError("population needs at least two chromosomes")
        if not (0 <= self.crossover <= 1 and 0 <= self.mutation <= 1):
            raise ValueError("crossover and mutation probabilities must lie in [0, 1]")
        if self.tournament < 1 or self.eta < 0:
            raise ValueError("invalid tournament size or distribution index")


def polynomial_mutation(
    x: np.ndarray, lo: np.ndarray, hi: np.ndarray, prob: float, eta: float, rng: np.random.Generator
) -> np.ndarray:
    """Mutate each gene with probability ``prob`` by a polynomially distributed step.

    The step ``delta`` in [-1, 1] has density proportional to
    ``(1 - |delta|)^eta`` and is scaled by the box width.
    """
    mask = rng.random(x.size) < prob
    u = rng.random(x.size)
    delta = np.where(
        u < 0.5,
        (2 * u) ** (1 / (eta + 1)) - 1,
        1 - (2 * (1 - u)) ** (1 / (eta + 1)),
    )
    out = x.copy()
    out[mask] += delta[mask] * (hi - lo)[mask]
    return np.clip(out, lo, hi)


def _tournament(f: np.ndarray, size: int, rng: np.random.Generator) -> int:
    entrants = rng.integers(len(f), size=size)
    return int(entrants[np.argmin(f[entrants])])


def sga_minimize(
    objective: Objective, cfg: SgaConfig, x0: Sequence[float] | None = None
) -> RunRecord:
    """Selection, crossover, mutation and elitist reinsertion each generation.

    Child ``i`` picks two parents by size-``s`` tournaments, copies the
    first and takes each gene from the second with probability
    ``crossover``, then mutates. Parents and children are merged and the
    ``population`` best survive (parents win ties).
    """
    cfg.validate()
    x0 = check_x0(objective, x0)
    n, dim = cfg.population, objective.dimension
    lo, hi = objective.lower, objective.upper
    rngs = spawn_rngs(cfg.seed, n)
    tr = Tracker(objective, "sga")

    pop = np.array([lo + r.random(dim) * (hi - lo) for r in rngs])
    if x0 is not None:
        pop[0] = x0
    f = tr.evaluate(pop)
    tr.mark()
    for _ in range(cfg.iterations):
        if cfg.max_evaluations is not None and tr.evaluations + n > cfg.max_evaluations:
            break
        children = np.empty_like(pop)
        for i, r in enumerate(rngs):
            a = pop[_tournament(f, cfg.tournament, r)]
            b = pop[_tournament(f, cfg.tournament, r)]
            child = np.where(r.random(dim) < cfg.crossover, b, a)
            children[i] = polynomial_mutation(child, lo, hi, cfg.mutation, cfg.eta, r)
        fc = tr.evaluate(children)
        merged = np.vstack([pop, children])
        fm = np.concatenate([f, fc])
        keep = np.argsort(fm, kind="stable")[:n]
        pop, f = merged[keep], fm[keep]
        tr.mark()
    return tr.record(cfg.seed)

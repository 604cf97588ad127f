"""Artificial bee colony."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .base import ConfigMixin, Objective, RunRecord, Tracker, check_x0, spawn_rngs

__all__ = ["AbcConfig", "abc_minimize", "abc_fitness"]


@dataclass
class AbcConfig(ConfigMixin):
    employers: int = 20
    limit: int = 20
    iterations: int = 500
    seed: int = 0
    max_evaluations: Optional[int] = None

    def validate(self) -> None:
        if self.employers < 2:
            raise ValueError("ABC needs at least two food sources")
        if self.limit < 1:
            raise ValueError("scout limit must be positive")
        if self.iterations < 0:
            raise ValueError("iteration budget must be non-negative")


def abc_fitness(f: np.ndarray) -> np.ndarray:
    """1/(1+f) for f >= 0, 1 + |f| below zero, 0 for +inf."""
    f = np.asarray(f, dtype=float)
    out = np.zeros_like(f)
    fin = np.isfinite(f)
    pos = fin & (f >= 0)
    out[pos] = 1.0 / (1.0 + f[pos])
    neg = fin & (f < 0)
    out[neg] = 1.0 - f[neg]
    return out


def _neighbor(x: np.ndarray, i: int, rng: np.random.Generator) -> np.ndarray:
    """x_i with one random coordinate j moved by r (x_ij - x_kj), r in [-1, 1]."""
    n, dim = x.shape
    k = int(rng.integers(n - 1))
    k += k >= i
    j = int(rng.integers(dim))
    r = rng.uniform(-1.0, 1.0)
    cand = x[i].copy()
    cand[j] += r * (x[i, j] - x[k, j])
    return cand


def abc_minimize(
    objective: Objective, cfg: AbcConfig, x0: Sequence[float] | None = None
) -> RunRecord:
    """Employer, onlooker and scout phases per cycle.

    Candidates within a phase are generated from a snapshot of the food
    sources, which makes each phase a single batch of evaluations. Bee ``i``
    (employer or onlooker) draws from its own stream. Onlookers pick a
    source with probability proportional to its fitness and their greedy
    updates are applied in bee order. Each cycle, the source with the most
    failed trials beyond ``limit`` is replaced by a random scout.
    """
    cfg.validate()
    x0 = check_x0(objective, x0)
    n, dim = cfg.employers, objective.dimension
    lo, hi = objective.lower, objective.upper
    rngs = spawn_rngs(cfg.seed, n + 1)
    scout_rng = rngs[n]
    tr = Tracker(objective, "abc")

    x = np.array([lo + r.random(dim) * (hi - lo) for r in rngs[:n]])
    if x0 is not None:
        x[0] = x0
    f = tr.evaluate(x)
    trials = np.zeros(n, dtype=int)
    tr.mark()

    def budget_left(needed: int) -> bool:
        return cfg.max_evaluations is None or tr.evaluations + needed <= cfg.max_evaluations

    for _ in range(cfg.iterations):
        if not budget_left(2 * n + 1):
            break
        cand = np.array([objective.clip(_neighbor(x, i, rngs[i])) for i in range(n)])
        fc = tr.evaluate(cand)
        improved = fc < f
        x[improved], f[improved] = cand[improved], fc[improved]
        trials = np.where(improved, 0, trials + 1)

        fit = abc_fitness(f)
        prob = fit / fit.sum() if fit.sum() > 0 else np.full(n, 1.0 / n)
        picks = [int(rngs[b].choice(n, p=prob)) for b in range(n)]
        cand = np.array([objective.clip(_neighbor(x, i, rngs[b])) for b, i in enumerate(picks)])
        fc = tr.evaluate(cand)
        for i, c, v in zip(picks, cand, fc):
            if v < f[i]:
                x[i], f[i], trials[i] = c, v, 0
            else:
                trials[i] += 1

        worst = int(np.argmax(trials))
        if trials[worst] > cfg.limit:
            x[worst] = lo + scout_rng.random(dim) * (hi - lo)
            f[worst] = tr.evaluate(x[worst][None, :])[0]
            trials[worst] = 0
        tr.mark()
    return tr.record(cfg.seed)

"""Particle swarm optimization with the plain inertia-weight update."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .base import ConfigMixin, Objective, RunRecord, Tracker, check_x0, spawn_rngs

__all__ = ["PsoConfig", "pso_minimize"]


@dataclass
class PsoConfig(ConfigMixin):
    """Swarm settings.

    ``neighborhood`` is the size of a static ring neighborhood used in the
    social term; ``None`` (or a value >= ``swarm_size``) means the global
    best. ``per_dimension`` draws r_beta, r_gamma per coordinate instead of
    one scalar per particle and step.
    """

    swarm_size: int = 100
    inertia: float = 0.7298
    cognitive: float = 1.49618
    social: float = 1.49618
    neighborhood: Optional[int] = None
    iterations: int = 500
    seed: int = 0
    per_dimension: bool = False
    max_evaluations: Optional[int] = None

    def validate(self) -> None:
        if self.swarm_size < 1:
            raise ValueError("swarm needs at least one particle")
        if min(self.inertia, self.cognitive, self.social) <= 0:
            raise ValueError("alpha, beta and gamma must be positive")
        if self.iterations < 1:
            raise ValueError("PSO needs an iteration budget of at least 1")


def _neighborhood_best(pbest: np.ndarray, pval: np.ndarray, size: Optional[int]) -> np.ndarray:
    n = len(pval)
    if size is None or size >= n:
        return np.broadcast_to(pbest[int(np.argmin(pval))], pbest.shape)
    half = size // 2
    offsets = np.arange(-half, size - half)
    idx = (np.arange(n)[:, None] + offsets[None, :]) % n
    best = idx[np.arange(n), np.argmin(pval[idx], axis=1)]
    return pbest[best]


def pso_minimize(
    objective: Objective, cfg: PsoConfig, x0: Sequence[float] | None = None
) -> RunRecord:
    """Minimize with v <- a v + b r_b (p_i - x) + g r_g (g - x), x <- clip(x + v).

    Each particle owns a random stream spawned from ``cfg.seed``. All
    particles move against the same (previous-iteration) social best, so a
    whole iteration is one batch of independent evaluations. A coordinate
    clipped to the box has its velocity zeroed. If ``x0`` is given it
    replaces the first particle's starting point.
    """
    cfg.validate()
    x0 = check_x0(objective, x0)
    n, dim = cfg.swarm_size, objective.dimension
    lo, hi = objective.lower, objective.upper
    span = hi - lo
    rngs = spawn_rngs(cfg.seed, n)
    tr = Tracker(objective, "pso")

    x = np.array([lo + r.random(dim) * span for r in rngs])
    v = np.array([(2 * r.random(dim) - 1) * span for r in rngs])
    if x0 is not None:
        x[0] = x0
    f = tr.evaluate(x)
    pbest, pval = x.copy(), f.copy()
    tr.mark()

    rshape = dim if cfg.per_dimension else 1
    for _ in range(cfg.iterations):
        if cfg.max_evaluations is not None and tr.evaluations + n > cfg.max_evaluations:
            break
        g = _neighborhood_best(pbest, pval, cfg.neighborhood)
        rb = np.array([r.random(rshape) for r in rngs])
        rg = np.array([r.random(rshape) for r in rngs])
        v = cfg.inertia * v + cfg.cognitive * rb * (pbest - x) + cfg.social * rg * (g - x)
        x_new = x + v
        x = np.clip(x_new, lo, hi)
        v[x != x_new] = 0.0
        f = tr.evaluate(x)
        better = f < pval
        pbest[better], pval[better] = x[better], f[better]
        tr.mark()
    return tr.record(cfg.seed)

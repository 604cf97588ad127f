"""Pattern search: GPS with fixed poll sets and MADS with random ones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .base import ConfigMixin, Objective, RunRecord, Tracker, check_x0

__all__ = ["PatternSearchConfig", "pattern_search_minimize", "poll_directions", "VARIANTS"]

VARIANTS = ("GPS_2D", "GPS_Dplus1", "MADS_2D", "MADS_Dplus1")


@dataclass
class PatternSearchConfig(ConfigMixin):
    variant: str = "GPS_2D"
    initial_mesh: float = 1.0
    min_mesh: float = 1e-9
    iterations: int = 10_000
    seed: int = 0
    max_evaluations: Optional[int] = None

    def validate(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown pattern search variant {self.variant!r}")
        if self.initial_mesh <= 0 or self.min_mesh <= 0:
            raise ValueError("mesh sizes must be positive")


def poll_directions(variant: str, dim: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Rows are poll directions.

    ``2D`` sets are ``{+-v_i}``, ``Dplus1`` sets are ``{v_i} + {-sum v_i}``.
    GPS uses the unit vectors; MADS uses a random orthonormal basis.
    """
    if variant.startswith("GPS"):
        basis = np.eye(dim)
    else:
        q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
        basis = (q * np.sign(np.diag(r))).T
    if variant.endswith("2D"):
        return np.vstack([basis, -basis])
    return np.vstack([basis, -basis.sum(axis=0, keepdims=True)])


def pattern_search_minimize(
    objective: Objective, cfg: PatternSearchConfig, x0: Sequence[float]
) -> RunRecord:
    """Complete polls around the incumbent; double the mesh on success, halve it otherwise.

    Poll points are clipped to the box and points that clip back onto the
    centre are skipped. The move goes to the best poll point if it strictly
    improves. ``extras["mesh"]`` records the mesh size after every poll.
    """
    cfg.validate()
    x = check_x0(objective, x0)
    if x is None:
        raise ValueError("pattern search needs a starting point")
    rng = np.random.default_rng(cfg.seed)
    tr = Tracker(objective, "pattern_search")
    fx = tr.evaluate(x[None, :])[0]
    tr.mark()
    delta = cfg.initial_mesh
    dirs = poll_directions(cfg.variant, objective.dimension, rng)
    meshes: list[float] = []
    for _ in range(cfg.iterations):
        if delta < cfg.min_mesh:
            break
        pts = objective.clip(x[None, :] + delta * dirs)
        pts = pts[np.any(pts != x[None, :], axis=1)]
        if cfg.max_evaluations is not None and tr.evaluations + len(pts) > cfg.max_evaluations:
            break
        success = False
        if len(pts):
            vals = tr.evaluate(pts)
            i = int(np.argmin(vals))
            if vals[i] < fx:
                x, fx, success = pts[i], vals[i], True
        if success:
            delta *= 2.0
            if cfg.variant.startswith("MADS"):
                dirs = poll_directions(cfg.variant, objective.dimension, rng)
        else:
            delta *= 0.5
        meshes.append(delta)
        tr.mark()
    return tr.record(cfg.seed, {"mesh": meshes})

"""Run optimizers back to back, each starting from the previous incumbent."""

from __future__ import annotations

import time
from typing import Any, Sequence

import numpy as np

from .abc import AbcConfig, abc_minimize
from .base import Objective, RunRecord
from .pattern import PatternSearchConfig, pattern_search_minimize
from .pso import PsoConfig, pso_minimize
from .sga import SgaConfig, sga_minimize

__all__ = ["OPTIMIZERS", "run_stage", "chain", "stage_from_dict"]

OPTIMIZERS = {
    "pso": (PsoConfig, pso_minimize),
    "abc": (AbcConfig, abc_minimize),
    "pattern_search": (PatternSearchConfig, pattern_search_minimize),
    "sga": (SgaConfig, sga_minimize),
}


def stage_from_dict(data: dict[str, Any]) -> tuple[str, Any]:
    """``{"optimizer": name, **config}`` to a ``(name, config)`` pair."""
    data = dict(data)
    name = data.pop("optimizer", None)
    if name not in OPTIMIZERS:
        raise ValueError(f"unknown optimizer {name!r}")
    return name, OPTIMIZERS[name][0].from_dict(data)


def run_stage(objective: Objective, name: str, cfg, x0=None) -> RunRecord:
    try:
        _, fn = OPTIMIZERS[name]
    except KeyError:
        raise ValueError(f"unknown optimizer {name!r}") from None
    if name == "pattern_search" and x0 is None:
        x0 = objective.lower + 0.5 * (objective.upper - objective.lower)
    return fn(objective, cfg, x0)


def chain(
    objective: Objective, stages: Sequence[tuple[str, Any]], x0: Sequence[float] | None = None
) -> RunRecord:
    """Concatenate stage traces; stage ``i + 1`` starts from stage ``i``'s best point.

    Trace entries carry ``"<index>:<optimizer>"`` labels. A stage never
    raises the running best, so the combined trace is non-increasing.
    """
    if not stages:
        raise ValueError("chain needs at least one stage")
    start = time.perf_counter()
    best_x = None if x0 is None else np.asarray(x0, dtype=float)
    best_value = float("inf")
    trace: list[float] = []
    labels: list[str] = []
    evals = 0
    parts = []
    for idx, (name, cfg) in enumerate(stages):
        rec = run_stage(objective, name, cfg, best_x)
        for v in rec.trace:
            best_value = min(best_value, v)
            trace.append(best_value)
            labels.append(f"{idx}:{name}")
        if rec.best_value <= best_value or best_x is None:
            best_x = rec.best_x
        evals += rec.evaluations
        parts.append({"optimizer": name, "config": cfg.to_dict(), "best_value": rec.best_value})
    return RunRecord(
        best_x=best_x,
        best_value=best_value,
        trace=trace,
        stages=labels,
        evaluations=evals,
        wall_time=time.perf_counter() - start,
        seed=getattr(stages[0][1], "seed", None),
        optimizer="chain",
        extras={"stages": parts},
    )

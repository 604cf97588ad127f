"""Shared optimizer plumbing: objectives, run records and bookkeeping."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Sequence

import numpy as np

__all__ = ["Objective", "RunRecord", "ConfigMixin", "spawn_rngs"]


@dataclass
class Objective:
    """Box-constrained minimization target.

    ``evaluate`` must be deterministic. ``workers > 1`` evaluates batches
    on a thread pool; results are collected by index, so the outcome does
    not depend on the worker count.
    """

    evaluate: Callable[[np.ndarray], float]
    bounds: np.ndarray
    workers: int = 1

    def __post_init__(self):
        self.bounds = np.asarray(self.bounds, dtype=float).reshape(-1, 2)
        if np.any(self.bounds[:, 0] > self.bounds[:, 1]):
            raise ValueError("lower bounds must not exceed upper bounds")

    @classmethod
    def box(cls, evaluate, dimension: int, lo: float, hi: float, workers: int = 1) -> "Objective":
        return cls(evaluate, np.tile([lo, hi], (dimension, 1)), workers)

    @property
    def dimension(self) -> int:
        return self.bounds.shape[0]

    @property
    def lower(self) -> np.ndarray:
        return self.bounds[:, 0]

    @property
    def upper(self) -> np.ndarray:
        return self.bounds[:, 1]

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def __call__(self, x) -> float:
        v = float(self.evaluate(np.asarray(x, dtype=float)))
        return v if not np.isnan(v) else float("inf")

    def batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.workers > 1 and len(X) > 1:
            with ThreadPoolExecutor(self.workers) as pool:
                vals = list(pool.map(self, X))
        else:
            vals = [self(x) for x in X]
        return np.array(vals, dtype=float)


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators, one per population member."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


class ConfigMixin:
    """JSON round trip for flat dataclass configs."""

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]):
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown {cls.__name__} fields: {sorted(unknown)}")
        return cls(**data)


@dataclass
class RunRecord:
    """Outcome of one optimizer run (or chain of runs).

    ``trace[i]`` is the best value known after iteration ``i`` (entry 0 is
    the initial evaluation) and ``stages[i]`` names the stage it came from.
    """

    best_x: np.ndarray
    best_value: float
    trace: list[float]
    stages: list[str]
    evaluations: int
    wall_time: float
    seed: int | None
    optimizer: str
    extras: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "optimizer": self.optimizer,
            "seed": self.seed,
            "best_value": self.best_value,
            "best_x": [float(v) for v in np.asarray(self.best_x)],
            "evaluations": self.evaluations,
            "trace": [float(v) for v in self.trace],
            "stages": list(self.stages),
            "extras": self.extras,
            "metadata": {"wall_time": self.wall_time},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunRecord":
        return cls(
            best_x=np.asarray(data["best_x"], dtype=float),
            best_value=float(data["best_value"]),
            trace=[float(v) for v in data["trace"]],
            stages=list(data["stages"]),
            evaluations=int(data["evaluations"]),
            wall_time=float(data.get("metadata", {}).get("wall_time", 0.0)),
            seed=data.get("seed"),
            optimizer=data["optimizer"],
            extras=dict(data.get("extras", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "stage", "best_value"])
        for i, (s, v) in enumerate(zip(self.stages, self.trace)):
            w.writerow([i, s, repr(float(v))])
        return buf.getvalue()


class Tracker:
    """Incumbent and best-so-far trace for a single run."""

    def __init__(self, objective: Objective, label: str):
        self.objective = objective
        self.label = label
        self.best_x: np.ndarray | None = None
        self.best_value = float("inf")
        self.evaluations = 0
        self.trace: list[float] = []
        self.start = time.perf_counter()

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        vals = self.objective.batch(X)
        self.evaluations += len(vals)
        i = int(np.argmin(vals))
        if vals[i] < self.best_value or self.best_x is None:
            self.best_value = float(vals[i])
            self.best_x = np.array(X[i], dtype=float)
        return vals

    def offer(self, x: np.ndarray, value: float) -> None:
        if value < self.best_value or self.best_x is None:
            self.best_value = float(value)
            self.best_x = np.array(x, dtype=float)

    def mark(self) -> None:
        self.trace.append(self.best_value)

    def record(self, seed: int | None, extras: dict | None = None) -> RunRecord:
        return RunRecord(
            best_x=self.best_x,
            best_value=self.best_value,
            trace=list(self.trace),
            stages=[self.label] * len(self.trace),
            evaluations=self.evaluations,
            wall_time=time.perf_counter() - self.start,
            seed=seed,
            optimizer=self.label,
            extras=extras or {},
        )


def check_x0(objective: Objective, x0: Sequence[float] | None) -> np.ndarray | None:
    if x0 is None:
        return None
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.size != objective.dimension:
        raise ValueError(f"x0 has {x0.size} entries, objective has {objective.dimension}")
    if np.any(x0 < objective.lower) or np.any(x0 > objective.upper):
        raise ValueError("x0 lies outside the bounds")
    return x0

"""Objectives for absolutely maximally entangled (AME) states.

An AME(n, d) state has every ``floor(n/2)``-qudit marginal maximally mixed.
``Q_m`` averages the normalized linear entropy of all m-qudit marginals and
``D_m`` their trace distance from ``I / d^m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator

import numpy as np

from .linalg import DegenerateStateError, StateVector, normalize, trace_norm

__all__ = [
    "AmeProblem",
    "marginals",
    "average_linear_entropy",
    "average_trace_distance",
    "dm_upper_bound",
    "ame_reference_state",
    "ame_objective",
]


@dataclass(frozen=True)
class AmeProblem:
    n: int
    d: int
    m: int | None = None

    def __post_init__(self):
        if self.d < 2 or self.n < 2:
            raise ValueError("need n >= 2 qudits of dimension d >= 2")
        if self.m is None:
            object.__setattr__(self, "m", self.n // 2)
        if not 1 <= self.m <= self.n // 2:
            raise ValueError(f"marginal size m={self.m} outside [1, {self.n // 2}]")

    def subsets(self) -> Iterator[tuple[int, ...]]:
        """All m-subsets of the qudits in lexicographic order."""
        return combinations(range(self.n), self.m)


def _tensor(psi: StateVector, prob: AmeProblem) -> np.ndarray:
    if psi.dim != prob.d**prob.n:
        raise ValueError(f"state of dimension {psi.dim} is not {prob.n} qudits of dimension {prob.d}")
    return normalize(psi).amplitudes.reshape((prob.d,) * prob.n)


def marginals(psi: StateVector, prob: AmeProblem) -> Iterator[np.ndarray]:
    """Reduced density matrices on every m-subset, in :meth:`AmeProblem.subsets` order.

    For a pure state the marginal on S is ``M M^dagger`` where ``M`` is the
    amplitude tensor reshaped to (S, complement).
    """
    t = _tensor(psi, prob)
    dm = prob.d**prob.m
    for s in prob.subsets():
        rest = [i for i in range(prob.n) if i not in s]
        mat = t.transpose(list(s) + rest).reshape(dm, -1)
        yield mat @ mat.conj().T


def average_linear_entropy(psi: StateVector, prob: AmeProblem) -> float:
    """Q_m: mean of d^m/(d^m-1) (1 - tr rho_S^2) over all m-subsets."""
    dm = prob.d**prob.m
    vals = [1.0 - float(np.sum(np.abs(rho) ** 2)) for rho in marginals(psi, prob)]
    return dm / (dm - 1) * float(np.mean(vals))


def average_trace_distance(psi: StateVector, prob: AmeProblem) -> float:
    """D_m: mean trace norm of rho_S - I/d^m over all m-subsets."""
    dm = prob.d**prob.m
    mixed = np.eye(dm) / dm
    return float(np.mean([trace_norm(rho - mixed) for rho in marginals(psi, prob)]))


def dm_upper_bound(Qm: float, d: int, m: int) -> float:
    """sqrt(2 log2(d^m - (d^m - 1) Q_m)), an upper bound on D_m."""
    dm = d**m
    arg = dm - (dm - 1) * Qm
    if arg < 1.0 - 1e-12:
        raise ValueError(f"Q_m={Qm} exceeds 1; no state has this linear entropy")
    return float(np.sqrt(2.0 * np.log2(max(arg, 1.0))))


def ame_reference_state(n: int, d: int) -> StateVector:
    """Known AME states: GHZ for (3, 2) and the two-dit code state for (4, 3)."""
    if (n, d) == (3, 2):
        amps = np.zeros(8, dtype=complex)
        amps[0] = amps[7] = 1 / np.sqrt(2)
        return StateVector(amps, (2, 2, 2))
    if (n, d) == (4, 3):
        t = np.zeros((3, 3, 3, 3), dtype=complex)
        for i in range(3):
            for j in range(3):
                t[i, j, (i + j) % 3, (i + 2 * j) % 3] = 1 / 3
        return StateVector(t.reshape(-1), (3,) * 4)
    if (n, d) == (4, 2):
        raise ValueError("no AME(4,2) state exists")
    raise ValueError(f"no reference AME state for (n, d) = ({n}, {d})")


def ame_objective(spec, prob: AmeProblem) -> Callable[[np.ndarray], float]:
    """1 - Q_m of the assembled state; degenerate parameters score +inf."""
    from .ansatz import assemble_state

    if spec.dim != prob.d**prob.n:
        raise ValueError("ansatz state dimension does not match the AME problem")

    def f(params) -> float:
        try:
            psi = assemble_state(spec, np.asarray(params, dtype=float))
        except DegenerateStateError:
            return float("inf")
        return 1.0 - average_linear_entropy(psi, prob)

    return f

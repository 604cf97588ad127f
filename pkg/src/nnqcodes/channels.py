"""Kraus representations of the noise models and their tensor powers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .linalg import DensityMatrix, StateVector

__all__ = [
    "KrausChannel",
    "depolarizing",
    "gadc",
    "dephrasure",
    "identity",
    "channel_from_dict",
    "joint_output_vectors",
    "apply_joint",
]

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

COMPLETENESS_ATOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by Kraus operators of shape ``(out_dim, in_dim)``.

    ``kind`` and ``params`` describe how the channel was built so it can be
    written back to JSON with :meth:`to_dict`.
    """

    kraus_ops: np.ndarray
    kind: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        ops = np.asarray(self.kraus_ops, dtype=complex)
        if ops.ndim != 3:
            raise ValueError("kraus_ops must be a stack of matrices")
        object.__setattr__(self, "kraus_ops", ops)
        gram = np.einsum("kji,kjl->il", ops.conj(), ops)
        if np.max(np.abs(gram - np.eye(ops.shape[2]))) > COMPLETENESS_ATOL:
            raise ValueError("Kraus operators are not trace preserving")

    @property
    def in_dim(self) -> int:
        return self.kraus_ops.shape[2]

    @property
    def out_dim(self) -> int:
        return self.kraus_ops.shape[1]

    @property
    def num_kraus(self) -> int:
        return self.kraus_ops.shape[0]

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return np.einsum("kij,jl,kml->im", self.kraus_ops, rho, self.kraus_ops.conj())

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "custom":
            raise ValueError("custom channels have no JSON descriptor")
        return {"kind": self.kind, **{k: float(v) for k, v in self.params.items()}}


def _check_unit(name: str, value: float, hi: float = 1.0) -> float:
    value = float(value)
    if not (0.0 <= value <= hi):
        raise ValueError(f"{name}={value} outside [0, {hi:g}]")
    return value


def depolarizing(p: float) -> KrausChannel:
    """Qubit depolarizing channel (1-p) rho + p tr(rho) I/2, p in [0, 4/3]."""
    p = _check_unit("p", p, 4.0 / 3.0)
    ops = [np.sqrt(max(0.0, 1.0 - 3.0 * p / 4.0)) * PAULI_I]
    ops += [np.sqrt(p / 4.0) * P for P in (PAULI_X, PAULI_Y, PAULI_Z)]
    return KrausChannel(np.array(ops), "depolarizing", {"p": p})


def gadc(gamma: float, N: float) -> KrausChannel:
    """Generalized amplitude damping with decay ``gamma`` and bath population ``N``."""
    g = _check_unit("gamma", gamma)
    N = _check_unit("N", N)
    a1 = np.sqrt(1 - N) * np.array([[1, 0], [0, np.sqrt(1 - g)]])
    a2 = np.sqrt(g * (1 - N)) * np.array([[0, 1], [0, 0]])
    a3 = np.sqrt(N) * np.array([[np.sqrt(1 - g), 0], [0, 1]])
    a4 = np.sqrt(g * N) * np.array([[0, 0], [1, 0]])
    return KrausChannel(np.array([a1, a2, a3, a4]), "gadc", {"gamma": g, "N": N})


def dephrasure(p: float, q: float) -> KrausChannel:
    """Dephase with probability ``p``, then erase to the flag |2> with probability ``q``.

    Maps a qubit to a qutrit; the third output level is the erasure flag.
    """
    p = _check_unit("p", p)
    q = _check_unit("q", q)
    embed = np.zeros((3, 2))
    embed[0, 0] = embed[1, 1] = 1.0
    flag0 = np.zeros((3, 2))
    flag0[2, 0] = 1.0
    flag1 = np.zeros((3, 2))
    flag1[2, 1] = 1.0
    ops = [
        np.sqrt((1 - q) * (1 - p)) * embed,
        np.sqrt((1 - q) * p) * embed @ PAULI_Z,
        np.sqrt(q) * flag0,
        np.sqrt(q) * flag1,
    ]
    return KrausChannel(np.array(ops), "dephrasure", {"p": p, "q": q})


def identity(dim: int = 2) -> KrausChannel:
    return KrausChannel(np.eye(dim)[None, :, :], "identity", {"dim": dim})


_FACTORIES = {
    "depolarizing": lambda d: depolarizing(d["p"]),
    "gadc": lambda d: gadc(d["gamma"], d["N"]),
    "dephrasure": lambda d: dephrasure(d["p"], d["q"]),
    "identity": lambda d: identity(int(d.get("dim", 2))),
}


def channel_from_dict(desc: Mapping[str, Any]) -> KrausChannel:
    """Build a channel from ``{"kind": ..., <params>}``."""
    try:
        factory = _FACTORIES[desc["kind"]]
    except KeyError:
        raise ValueError(f"unknown channel descriptor: {dict(desc)!r}") from None
    try:
        return factory(desc)
    except KeyError as exc:
        raise ValueError(f"channel descriptor missing parameter {exc}") from None


def _reference_dim(channel: KrausChannel, k: int, dim: int) -> int:
    block = channel.in_dim**k
    if k < 1 or dim % block:
        raise ValueError(
            f"state of dimension {dim} cannot feed {k} copies of a {channel.in_dim}-dim channel"
        )
    return dim // block


def joint_output_vectors(channel: KrausChannel, k: int, amplitudes: np.ndarray) -> np.ndarray:
    """Columns (I_R x A_i1 x ... x A_ik)|psi> for every Kraus index tuple.

    Returns a matrix ``V`` of shape ``(dim_R * out_dim**k, num_kraus**k)``
    with sigma_RB = V V^dagger. The channel acts on the trailing ``k``
    subsystems of ``amplitudes``; everything in front is the reference.
    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    dim_r = _reference_dim(channel, k, amplitudes.size)
    t = amplitudes.reshape((dim_r,) + (channel.in_dim,) * k)
    ops = channel.kraus_ops
    for j in range(k):
        ndim = t.ndim
        t = np.tensordot(ops, t, axes=([2], [1 + j]))
        # kraus index to the back, output leg back into slot j
        t = np.moveaxis(t, [0, 1], [ndim, 1 + j])
    return t.reshape(dim_r * channel.out_dim**k, channel.num_kraus**k)


def apply_joint(channel: KrausChannel, k: int, code: StateVector) -> DensityMatrix:
    """(id_R x N^{x k})(|psi><psi|) as a dense matrix.

    The code is taken as is (callers normalize). Output dims are
    ``[dim_R] + [out_dim] * k``.
    """
    v = joint_output_vectors(channel, k, code.amplitudes)
    dim_r = v.shape[0] // channel.out_dim**k
    return DensityMatrix(v @ v.conj().T, [dim_r] + [channel.out_dim] * k)

"""Dense complex linear algebra for states, marginals and entropies.

Matrices are plain ``numpy`` arrays in row-major order. States and density
matrices carry their subsystem dimensions so marginals can be taken by
subsystem index. All logarithms are base 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DegenerateStateError",
    "StateVector",
    "DensityMatrix",
    "tensor_product",
    "partial_trace",
    "hermitian_eigenvalues",
    "entropy_from_spectrum",
    "von_neumann_entropy",
    "trace_norm",
    "normalize",
    "binary_entropy",
    "xlogx",
]

HERMITIAN_ATOL = 1e-9
NEGATIVE_EIG_ATOL = 1e-10


class DegenerateStateError(ValueError):
    """Raised when a state vector has no nonzero amplitude."""


def _check_dims(dims: Sequence[int], total: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims, dtype=np.int64)) != total:
        raise ValueError(f"subsystem dims {dims} do not multiply to {total}")
    return dims


@dataclass(frozen=True)
class StateVector:
    """Pure state amplitudes over a product basis.

    Amplitudes may be stored unnormalized; :func:`normalize` returns the
    unit-norm version. ``dims`` lists the local dimension of each subsystem
    in tensor order (first entry is the most significant digit).
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amplitudes, dims: Sequence[int] | None = None):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if dims is None:
            dims = (amps.size,)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", _check_dims(dims, amps.size))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def with_dims(self, dims: Sequence[int]) -> "StateVector":
        """Same amplitudes, regrouped subsystems."""
        return StateVector(self.amplitudes, dims)

    def projector(self) -> "DensityMatrix":
        psi = normalize(self).amplitudes
        return DensityMatrix(np.outer(psi, psi.conj()), self.dims)

    def overlap(self, other: "StateVector") -> complex:
        if other.dim != self.dim:
            raise ValueError("states live in different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        """|<a|b>|^2 of the normalized states."""
        a = normalize(self).amplitudes
        b = normalize(other).amplitudes
        return float(abs(np.vdot(a, b)) ** 2)


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims: Sequence[int] | None = None):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if dims is None:
            dims = (m.shape[0],)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", _check_dims(dims, m.shape[0]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_valid(self, atol: float = 1e-10) -> bool:
        """Hermitian, unit trace and PSD within ``atol``."""
        m = self.matrix
        if np.max(np.abs(m - m.conj().T), initial=0.0) > atol:
            return False
        if abs(np.trace(m) - 1.0) > atol:
            return False
        return bool(np.linalg.eigvalsh(m)[0] >= -atol)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; works on matrices and vectors alike."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems stay in their original relative order. An empty
    ``keep`` returns the 1x1 matrix holding the trace.
    """
    dims = rho.dims
    n = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= n for i in keep):
        raise ValueError(f"subsystem index out of range for dims {dims}: {keep}")
    rest = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep], dtype=np.int64))
    dr = int(np.prod([dims[i] for i in rest], dtype=np.int64))
    t = rho.matrix.reshape(dims + dims)
    perm = keep + rest + [n + i for i in keep] + [n + i for i in rest]
    t = t.transpose(perm).reshape(dk, dr, dk, dr)
    out = np.einsum("ijkj->ik", t)
    return DensityMatrix(out, [dims[i] for i in keep] or [1])


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)


def xlogx(x) -> np.ndarray:
    """Elementwise x*log2(x) with the 0*log(0) = 0 convention."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def entropy_from_spectrum(eigenvalues) -> float:
    w = np.asarray(eigenvalues, dtype=float)
    if w.size and w.min() < -NEGATIVE_EIG_ATOL:
        raise ValueError(
            f"eigenvalue {w.min():.3e} below -{NEGATIVE_EIG_ATOL}: not a valid density matrix"
        )
    return float(-np.sum(xlogx(np.clip(w, 0.0, None))))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -tr(rho log2 rho) in bits."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return entropy_from_spectrum(hermitian_eigenvalues(m))


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues; input must be square and Hermitian."""
    m = m.matrix if isinstance(m, DensityMatrix) else np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"trace norm needs a square matrix, got shape {m.shape}")
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def normalize(psi: StateVector) -> StateVector:
    nrm = np.linalg.norm(psi.amplitudes)
    if not np.isfinite(nrm) or nrm == 0.0:
        raise DegenerateStateError("cannot normalize a state with no nonzero amplitude")
    return StateVector(psi.amplitudes / nrm, psi.dims)


def binary_entropy(x) -> float:
    x = float(x)
    return float(-xlogx(x) - xlogx(1.0 - x))

"""Ansatz descriptors, flat parameter vectors and state assembly."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Optional, Union

import numpy as np

from ..linalg import StateVector, normalize
from .encoding import Encoding
from .networks import (
    DBMParams,
    FFParams,
    RBMParams,
    dbm_log_amplitude_batch,
    ff_amplitude_batch,
    rbm_log_amplitude_batch,
)

__all__ = [
    "ANSATZ_KINDS",
    "AnsatzSpec",
    "param_count",
    "param_bounds",
    "flatten",
    "unflatten",
    "amplitude_vector",
    "assemble_state",
    "basis_inputs",
]

ANSATZ_KINDS = ("FF", "RBM", "DBM", "FFSchmidt", "RBMSchmidt", "Raw")
DEFAULT_BOUND = 10.0

Params = Union[FFParams, RBMParams, DBMParams, np.ndarray]


@dataclass(frozen=True)
class AnsatzSpec:
    """Which amplitude function, on how many qudits, with which architecture.

    Parameters
    ----------
    kind : one of ``ANSATZ_KINDS``
    n : total number of qudits in the assembled state
    d : local dimension
    n_ref : leading qudits that form the reference system (metadata used
        when printing codes; assembly does not depend on it)
    encoding : input encoding, scaled by default
    hidden : FF layer widths, or ``(m,)`` hidden units for RBM/DBM kinds
    activations : one activation name per FF hidden layer
    output : FF output mode, ``"cartesian"`` or ``"polar"``
    check_binary : reject non-0/1 inputs to Boltzmann machines
    """

    kind: str
    n: int
    d: int = 2
    n_ref: int = 0
    encoding: Optional[Encoding] = None
    hidden: tuple[int, ...] = ()
    activations: tuple[str, ...] = ()
    output: str = "cartesian"
    check_binary: bool = True

    def __post_init__(self):
        if self.kind not in ANSATZ_KINDS:
            raise ValueError(f"unknown ansatz kind {self.kind!r}")
        if self.n < 1 or self.d < 2:
            raise ValueError("need n >= 1 qudits of dimension d >= 2")
        if self.encoding is None:
            object.__setattr__(self, "encoding", Encoding("scaled", self.d))
        if self.encoding.d != self.d:
            raise ValueError("encoding dimension differs from d")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        object.__setattr__(self, "activations", tuple(self.activations))
        if self.kind.endswith("Schmidt") and (self.n % 2 or self.d != 2):
            raise ValueError("Schmidt ansatz needs an even number of qubits")
        if self.kind.startswith("FF") and len(self.activations) != len(self.hidden):
            raise ValueError("FF ansatz needs one activation per hidden layer")
        if self.kind in ("RBM", "DBM", "RBMSchmidt") and len(self.hidden) != 1:
            raise ValueError("Boltzmann machine ansatz takes hidden=(m,)")

    @property
    def amplitude_qudits(self) -> int:
        """Length of the strings the network is evaluated on."""
        return self.n // 2 if self.kind.endswith("Schmidt") else self.n

    @property
    def input_width(self) -> int:
        return self.amplitude_qudits * self.encoding.width

    @property
    def dim(self) -> int:
        return self.d**self.n

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "n": self.n,
            "d": self.d,
            "n_ref": self.n_ref,
            "encoding": self.encoding.kind,
            "hidden": list(self.hidden),
            "activations": list(self.activations),
            "output": self.output,
            "check_binary": self.check_binary,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AnsatzSpec":
        data = dict(data)
        d = int(data.get("d", 2))
        enc = Encoding(data.pop("encoding", "scaled"), d)
        return cls(
            kind=data["kind"],
            n=int(data["n"]),
            d=d,
            n_ref=int(data.get("n_ref", 0)),
            encoding=enc,
            hidden=tuple(data.get("hidden", ())),
            activations=tuple(data.get("activations", ())),
            output=data.get("output", "cartesian"),
            check_binary=bool(data.get("check_binary", True)),
        )


def _ff_shapes(spec: AnsatzSpec) -> list[tuple[int, int]]:
    widths = [spec.input_width, *spec.hidden, 2]
    return [(widths[j + 1], widths[j]) for j in range(len(widths) - 1)]


def _complex_sizes(spec: AnsatzSpec) -> list[int]:
    nv, m = spec.input_width, spec.hidden[0]
    sizes = [nv, m, m * nv]
    if spec.kind == "DBM":
        sizes += [nv * (nv - 1) // 2, m * (m - 1) // 2]
    return sizes


def param_count(spec: AnsatzSpec) -> int:
    """Number of real parameters of the ansatz.

    >>> param_count(AnsatzSpec("FF", 6, hidden=(6,) * 4, activations=("cos",) * 4))
    182
    """
    if spec.kind == "Raw":
        return 2 * spec.dim
    if spec.kind.startswith("FF"):
        return sum((fan_in + 1) * width for width, fan_in in _ff_shapes(spec))
    return 2 * sum(_complex_sizes(spec))


def param_bounds(spec: AnsatzSpec, bound: float = DEFAULT_BOUND) -> np.ndarray:
    """Box constraints as a ``(count, 2)`` array."""
    c = param_count(spec)
    return np.tile([-float(bound), float(bound)], (c, 1))


def unflatten(spec: AnsatzSpec, vec) -> Params:
    """Structured parameters from a flat real vector.

    Complex parameter sets are laid out as all real parts, then all
    imaginary parts. Raw parameters become a complex amplitude array.
    """
    vec = np.asarray(vec, dtype=float).reshape(-1)
    if vec.size != param_count(spec):
        raise ValueError(f"expected {param_count(spec)} parameters, got {vec.size}")
    if spec.kind == "Raw":
        half = vec.size // 2
        return vec[:half] + 1j * vec[half:]
    if spec.kind.startswith("FF"):
        weights, biases, pos = [], [], 0
        for width, fan_in in _ff_shapes(spec):
            weights.append(vec[pos : pos + width * fan_in].reshape(width, fan_in))
            pos += width * fan_in
            biases.append(vec[pos : pos + width])
            pos += width
        return FFParams(tuple(weights), tuple(biases), spec.activations, spec.output)
    half = vec.size // 2
    z = vec[:half] + 1j * vec[half:]
    parts, pos = [], 0
    for s in _complex_sizes(spec):
        parts.append(z[pos : pos + s])
        pos += s
    nv, m = spec.input_width, spec.hidden[0]
    rbm = RBMParams(parts[0], parts[1], parts[2].reshape(m, nv))
    if spec.kind != "DBM":
        return rbm
    C = np.zeros((nv, nv), complex)
    C[np.triu_indices(nv, 1)] = parts[3]
    D = np.zeros((m, m), complex)
    D[np.triu_indices(m, 1)] = parts[4]
    return DBMParams(rbm, C, D)


def flatten(params: Params) -> np.ndarray:
    """Inverse of :func:`unflatten`."""
    if isinstance(params, FFParams):
        chunks = []
        for w, b in zip(params.weights, params.biases):
            chunks += [w.ravel(), b]
        return np.concatenate(chunks)
    if isinstance(params, RBMParams):
        z = np.concatenate([params.a, params.b, params.W.ravel()])
    elif isinstance(params, DBMParams):
        r = params.rbm
        z = np.concatenate(
            [
                r.a,
                r.b,
                r.W.ravel(),
                params.C[np.triu_indices(r.n, 1)],
                params.D[np.triu_indices(r.m, 1)],
            ]
        )
    else:
        z = np.asarray(params, dtype=complex).reshape(-1)
    return np.concatenate([z.real, z.imag])


@lru_cache(maxsize=64)
def _basis_inputs(q: int, d: int, enc_kind: str) -> np.ndarray:
    idx = np.arange(d**q)
    digits = (idx[:, None] // d ** np.arange(q - 1, -1, -1)[None, :]) % d
    table = Encoding(enc_kind, d).table()
    out = table[digits].reshape(d**q, -1)
    out.setflags(write=False)
    return out


def basis_inputs(spec: AnsatzSpec) -> np.ndarray:
    """Encoded inputs for every basis string, in lexicographic order."""
    return _basis_inputs(spec.amplitude_qudits, spec.d, spec.encoding.kind)


def amplitude_vector(spec: AnsatzSpec, params: Params) -> np.ndarray:
    """Unnormalized amplitudes in the full ``d**n`` basis.

    Boltzmann machine amplitudes are rescaled by a common factor (which
    normalization removes) so that large energies cannot overflow.
    """
    if spec.kind == "Raw":
        return np.asarray(params, dtype=complex)
    X = basis_inputs(spec)
    if spec.kind.startswith("FF"):
        amps = ff_amplitude_batch(params, X)
    else:
        if spec.kind == "DBM":
            log_amps = dbm_log_amplitude_batch(params, X, spec.check_binary)
        else:
            log_amps = rbm_log_amplitude_batch(params, X, spec.check_binary)
        finite = np.isfinite(log_amps.real)
        shift = log_amps.real[finite].max() if finite.any() else 0.0
        amps = np.exp(log_amps - shift)
    if spec.kind.endswith("Schmidt"):
        half = 2 ** spec.amplitude_qudits
        full = np.zeros(half * half, dtype=complex)
        diag = np.arange(half)
        full[diag * half + diag] = amps
        return full
    return amps


def assemble_state(spec: AnsatzSpec, params) -> StateVector:
    """Normalized state of the ansatz at a flat (or structured) parameter point.

    Raises
    ------
    DegenerateStateError
        If every amplitude vanishes or an amplitude is not finite.
    """
    if not isinstance(params, (FFParams, RBMParams, DBMParams)):
        arr = np.asarray(params)
        params = arr if np.iscomplexobj(arr) else unflatten(spec, arr)
    amps = amplitude_vector(spec, params)
    return normalize(StateVector(amps, (spec.d,) * spec.n))

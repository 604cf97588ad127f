"""Amplitude functions: feed-forward networks and (deep) Boltzmann machines.

Every function has a single-input form and a ``*_batch`` form that takes a
matrix with one input vector per row; state assembly uses the batch forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "ACTIVATIONS",
    "FFParams",
    "RBMParams",
    "DBMParams",
    "ff_amplitude",
    "ff_amplitude_batch",
    "rbm_amplitude",
    "rbm_amplitude_batch",
    "rbm_log_amplitude_batch",
    "dbm_amplitude",
    "dbm_amplitude_batch",
    "dbm_log_amplitude_batch",
    "POLAR_CLAMP",
    "DBM_MAX_HIDDEN",
]

POLAR_CLAMP = 30.0
DBM_MAX_HIDDEN = 20


def _relu(x):
    return np.maximum(x, 0.0)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


ACTIVATIONS = {
    "cos": np.cos,
    "tanh": np.tanh,
    "relu": _relu,
    "sigmoid": _sigmoid,
    "identity": lambda x: x,
}


@dataclass(frozen=True)
class FFParams:
    """Real weights of a dense network with a two-node linear output.

    ``weights[j]`` has shape ``(M_j, fan_in)``; the last entry is the output
    layer with two rows. ``activations`` has one name per hidden layer.
    """

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    activations: tuple[str, ...]
    output: str = "cartesian"

    def __post_init__(self):
        ws = tuple(np.asarray(w, dtype=float) for w in self.weights)
        bs = tuple(np.asarray(b, dtype=float).reshape(-1) for b in self.biases)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "biases", bs)
        object.__setattr__(self, "activations", tuple(self.activations))
        if len(ws) != len(bs) or len(ws) != len(self.activations) + 1:
            raise ValueError("need one bias per layer and one activation per hidden layer")
        for j, (w, b) in enumerate(zip(ws, bs)):
            if w.ndim != 2 or w.shape[0] != b.size:
                raise ValueError(f"layer {j}: weight/bias shapes {w.shape}, {b.shape} disagree")
            if j and w.shape[1] != ws[j - 1].shape[0]:
                raise ValueError(f"layer {j}: fan-in {w.shape[1]} != width {ws[j - 1].shape[0]}")
        if ws[-1].shape[0] != 2:
            raise ValueError("output layer must have two nodes")
        for a in self.activations:
            if a not in ACTIVATIONS:
                raise ValueError(f"unknown activation {a!r}")
        if self.output not in ("cartesian", "polar"):
            raise ValueError(f"unknown output mode {self.output!r}")

    @property
    def input_width(self) -> int:
        return self.weights[0].shape[1]


def ff_amplitude_batch(params: FFParams, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != params.input_width:
        raise ValueError(f"inputs of shape {X.shape} do not fit width {params.input_width}")
    h = X
    for w, b, act in zip(params.weights[:-1], params.biases[:-1], params.activations):
        h = ACTIVATIONS[act](h @ w.T + b)
    o = h @ params.weights[-1].T + params.biases[-1]
    if params.output == "cartesian":
        return o[:, 0] + 1j * o[:, 1]
    return np.exp(np.minimum(o[:, 0], POLAR_CLAMP) + 1j * o[:, 1])


def ff_amplitude(params: FFParams, x) -> complex:
    """Forward pass; Cartesian gives ``o1 + i o2``, polar gives ``exp(o1 + i o2)``."""
    return complex(ff_amplitude_batch(params, np.asarray(x, dtype=float)[None, :])[0])


@dataclass(frozen=True)
class RBMParams:
    """Complex visible bias ``a`` (n), hidden bias ``b`` (m), coupling ``W`` (m x n)."""

    a: np.ndarray
    b: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).reshape(-1)
        b = np.asarray(self.b, dtype=complex).reshape(-1)
        W = np.asarray(self.W, dtype=complex).reshape(b.size, a.size)
        for name, v in (("a", a), ("b", b), ("W", W)):
            object.__setattr__(self, name, v)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"RBM parameter {name} has non-finite entries")

    @property
    def n(self) -> int:
        return self.a.size

    @property
    def m(self) -> int:
        return self.b.size

    def max_abs(self) -> float:
        return float(max(np.abs(np.concatenate([self.a, self.b, self.W.ravel()])).max(), 0.0))


def _check_visible(X, n: int, check_binary: bool) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != n:
        raise ValueError(f"inputs of shape {X.shape} do not match {n} visible units")
    if check_binary and not np.all((X == 0) | (X == 1)):
        raise ValueError("Boltzmann machine inputs must be 0/1")
    return X


def rbm_log_amplitude_batch(params: RBMParams, X, check_binary: bool = True) -> np.ndarray:
    """Complex log of the RBM amplitudes; the branch is irrelevant after exp."""
    X = _check_visible(X, params.n, check_binary)
    theta = params.b[None, :] + X @ params.W.T
    with np.errstate(divide="ignore"):
        return -X @ params.a + np.sum(np.log1p(np.exp(-theta)), axis=1)


def rbm_amplitude_batch(params: RBMParams, X, check_binary: bool = True) -> np.ndarray:
    return np.exp(rbm_log_amplitude_batch(params, X, check_binary))


def rbm_amplitude(params: RBMParams, x, check_binary: bool = True) -> complex:
    """exp(-a.x) prod_l (1 + exp(-b_l - sum_k W_lk x_k)), hidden units summed out."""
    X = np.asarray(x, dtype=float)[None, :]
    return complex(rbm_amplitude_batch(params, X, check_binary)[0])


@dataclass(frozen=True)
class DBMParams:
    """RBM core plus strictly upper-triangular couplings within each layer."""

    rbm: RBMParams
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        n, m = self.rbm.n, self.rbm.m
        C = np.triu(np.asarray(self.C, dtype=complex).reshape(n, n), 1)
        D = np.triu(np.asarray(self.D, dtype=complex).reshape(m, m), 1)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        if m > DBM_MAX_HIDDEN:
            raise ValueError(f"DBM enumeration limited to {DBM_MAX_HIDDEN} hidden units")


def _hidden_configs(m: int) -> np.ndarray:
    return np.array(list(itertools.product((0.0, 1.0), repeat=m)), dtype=float).reshape(-1, m)


def dbm_log_amplitude_batch(params: DBMParams, X, check_binary: bool = True) -> np.ndarray:
    r = params.rbm
    if r.m > DBM_MAX_HIDDEN:
        raise ValueError(f"DBM enumeration limited to {DBM_MAX_HIDDEN} hidden units")
    X = _check_visible(X, r.n, check_binary)
    Hs = _hidden_configs(r.m)
    e_vis = X @ r.a + np.einsum("xk,kl,xl->x", X, params.C, X)
    e_hid = Hs @ r.b + np.einsum("hk,kl,hl->h", Hs, params.D, Hs)
    e_cpl = X @ r.W.T @ Hs.T
    neg = -(e_vis[:, None] + e_hid[None, :] + e_cpl)
    shift = neg.real.max(axis=1)
    with np.errstate(divide="ignore"):
        return shift + np.log(np.exp(neg - shift[:, None]).sum(axis=1))


def dbm_amplitude_batch(params: DBMParams, X, check_binary: bool = True) -> np.ndarray:
    return np.exp(dbm_log_amplitude_batch(params, X, check_binary))


def dbm_amplitude(params: DBMParams, x, check_binary: bool = True) -> complex:
    """Sum over all hidden configurations of exp(-H_DBM(x, h))."""
    X = np.asarray(x, dtype=float)[None, :]
    return complex(dbm_amplitude_batch(params, X, check_binary)[0])


"""Closed-form benchmarks for repetition codes and explicit network constructions.

All ``*_repcode_ci`` functions return the total coherent information
``S(B^k) - S(RB^k)`` in bits; divide by the number of channel uses for a rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .ansatz import AnsatzSpec, FFParams, RBMParams
from .linalg import StateVector, binary_entropy, xlogx

__all__ = [
    "RepCodeSpec",
    "ProductRepSpec",
    "weighted_repetition_state",
    "product_repetition_state",
    "block_positions",
    "gadc_repcode_ci",
    "dephrasure_repcode_ci",
    "depolarizing_single_letter_ci",
    "depolarizing_repcode_ci",
    "product_repcode_ci",
    "best_weighted_repcode",
    "bisect_threshold",
    "depolarizing_threshold",
    "integer_partitions",
    "best_product_repcode",
    "ff_repetition_construction",
    "rbm_repetition_construction",
    "construction_spec",
    "MAX_QUBITS",
]

MAX_QUBITS = 20
REFERENCE_LAYOUTS = ("mirrored", "minimal")


def _xlx(x: float) -> float:
    return float(xlogx(x))


@dataclass(frozen=True)
class RepCodeSpec:
    """sqrt(lam)|0>_R|0..0> + sqrt(1-lam)|1>_R|1..1> on 1+k qubits."""

    k: int
    lam: float = 0.5

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("blocklength must be at least 1")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda={self.lam} outside [0, 1]")


@dataclass(frozen=True)
class ProductRepSpec:
    """Tensor product of unweighted repetition codes of the given lengths.

    ``reference="mirrored"`` gives block ``i`` a reference of ``n_i`` qubits
    (|0..0>|0..0> + |1..1>|1..1>); ``"minimal"`` uses a single reference
    qubit per block. Both have the same coherent information under any
    channel because the two references differ by a local isometry.
    """

    partition: tuple[int, ...]
    reference: str = "mirrored"

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(int(n) for n in self.partition))
        if not self.partition or any(n < 1 for n in self.partition):
            raise ValueError("partition blocks must have length >= 1")
        if self.reference not in REFERENCE_LAYOUTS:
            raise ValueError(f"unknown reference layout {self.reference!r}")

    @property
    def channel_uses(self) -> int:
        return sum(self.partition)

    def ref_sizes(self) -> list[int]:
        return list(self.partition) if self.reference == "mirrored" else [1] * len(self.partition)

    @property
    def n_qubits(self) -> int:
        return sum(self.ref_sizes()) + self.channel_uses


def _as_product_spec(partition) -> ProductRepSpec:
    if isinstance(partition, ProductRepSpec):
        return partition
    return ProductRepSpec(tuple(partition))


def weighted_repetition_state(spec: RepCodeSpec) -> StateVector:
    k = spec.k
    amps = np.zeros(2 ** (k + 1), dtype=complex)
    amps[0] = np.sqrt(spec.lam)
    amps[-1] = np.sqrt(1.0 - spec.lam)
    return StateVector(amps, (2,) * (k + 1))


def block_positions(spec: ProductRepSpec) -> list[list[int]]:
    """Qubit indices of each block in the layout [all R slots][all A slots]."""
    refs = spec.ref_sizes()
    n_ref = sum(refs)
    out, r0, a0 = [], 0, n_ref
    for r, n in zip(refs, spec.partition):
        out.append(list(range(r0, r0 + r)) + list(range(a0, a0 + n)))
        r0 += r
        a0 += n
    return out


def product_repetition_state(spec) -> StateVector:
    """Product of repetition codes, reordered so all reference qubits come first."""
    spec = _as_product_spec(spec)
    nq = spec.n_qubits
    if nq > MAX_QUBITS:
        raise ValueError(f"{nq} qubits exceeds the {MAX_QUBITS}-qubit limit")
    positions = block_positions(spec)
    psi = np.ones(1, dtype=complex)
    for pos in positions:
        b = len(pos)
        block = np.zeros(2**b, dtype=complex)
        block[0] = block[-1] = 1 / np.sqrt(2)
        psi = np.kron(psi, block)
    # kron order lists qubits block by block; move each to its final slot
    order = [q for pos in positions for q in pos]
    t = psi.reshape((2,) * nq)
    t = np.moveaxis(t, list(range(nq)), order)
    return StateVector(t.reshape(-1), (2,) * nq)


def gadc_repcode_ci(spec: RepCodeSpec, gamma: float, N: float) -> float:
    """Closed-form coherent information of the weighted repetition code under the GADC.

    Output eigenvalues come in binomial families labelled by the Hamming
    weight of the channel outputs; only the all-zeros / all-ones pair of
    reference branches interferes, through a 2x2 block.
    """
    k, lam, g = spec.k, spec.lam, gamma
    a0, a1 = 1 - g * N, g * N
    b0, b1 = g - g * N, 1 - g + g * N
    s_b = 0.0
    s_rb = 0.0
    for m in range(k + 1):
        c = comb(k, m)
        r_m = lam * a0 ** (k - m) * a1**m
        t_m = (1 - lam) * b0 ** (k - m) * b1**m
        s_b -= c * _xlx(r_m + t_m)
        if m > 0:
            s_rb -= c * _xlx(r_m)
        if m < k:
            s_rb -= c * _xlx(t_m)
    d0, d1 = lam * a0**k, (1 - lam) * b1**k
    mu0 = d0 + d1
    if mu0 > 0:
        off = np.sqrt(lam * (1 - lam)) * (1 - g) ** (k / 2)
        r = np.linalg.eigvalsh(np.array([[d0, off], [off, d1]]) / mu0)[0]
        s_rb += mu0 * binary_entropy(min(max(r, 0.0), 1.0)) - _xlx(mu0)
    return s_b - s_rb


def dephrasure_repcode_ci(spec: RepCodeSpec, p: float, q: float) -> float:
    """((1-q)^k - q^k) h(lam) - (1-q)^k h((1+u)/2).

    ``u = sqrt(1 - x)`` with ``x = 4 lam (1-lam) (1 - (1-2p)^(2k))``; the
    small tail ``(1-u)/2`` is formed as ``x / (2 (1+u))`` so nothing cancels
    as ``u -> 1``.
    """
    k, lam = spec.k, spec.lam
    x = 4 * lam * (1 - lam) * (1 - (1 - 2 * p) ** (2 * k))
    x = min(max(x, 0.0), 1.0)
    u = np.sqrt(1 - x)
    tail = x / (2 * (1 + u))
    return ((1 - q) ** k - q**k) * binary_entropy(lam) - (1 - q) ** k * binary_entropy(tail)


def depolarizing_single_letter_ci(p: float) -> float:
    """Bell-state coherent information 1 + (1-3p/4) log(1-3p/4) + (3p/4) log(p/4)."""
    if not 0.0 <= p <= 4.0 / 3.0:
        raise ValueError(f"p={p} outside [0, 4/3]")
    return 1.0 + _xlx(1 - 3 * p / 4) + 3 * _xlx(p / 4)


def depolarizing_repcode_ci(k: int, p: float) -> float:
    """Total coherent information of the unweighted k-repetition code under D_p.

    With a = 1 - p/2 and b = p/2 the output on B has eigenvalues
    (a^(k-w) b^w + b^(k-w) a^w)/2 with multiplicity C(k, w); the joint
    output has (a^(k-w) b^w)/2 twice for each of the C(k, w) weight-w
    strings with w >= 1, plus (a^k +- (1-p)^k)/2.
    """
    a, b = 1 - p / 2, p / 2
    s_b = -sum(comb(k, w) * _xlx(0.5 * (a ** (k - w) * b**w + b ** (k - w) * a**w)) for w in range(k + 1))
    s_rb = -sum(2 * comb(k, w) * _xlx(0.5 * a ** (k - w) * b**w) for w in range(1, k + 1))
    s_rb -= _xlx(0.5 * (a**k + (1 - p) ** k)) + _xlx(0.5 * (a**k - (1 - p) ** k))
    return s_b - s_rb


def product_repcode_ci(partition: Sequence[int], p: float) -> float:
    """Coherent information is additive over tensor-product codes and channels."""
    return sum(depolarizing_repcode_ci(n, p) for n in partition)


def best_weighted_repcode(ci: Callable[[float], float], grid: int = 2001) -> tuple[float, float]:
    """Maximize a λ-dependent coherent information; returns (lam_opt, value).

    A uniform grid locates the best cell, then a bounded scalar search
    refines inside it. The endpoints are included (both give product states).
    """
    lams = np.linspace(0.0, 1.0, grid)
    vals = np.array([ci(float(l)) for l in lams])
    i = int(np.argmax(vals))
    lo, hi = lams[max(i - 1, 0)], lams[min(i + 1, grid - 1)]
    best_l, best_v = float(lams[i]), float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda l: -ci(float(l)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-10})
        if -res.fun > best_v:
            best_l, best_v = float(res.x), float(-res.fun)
    return best_l, best_v


def bisect_threshold(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-6) -> float:
    """Zero of ``f`` on ``[lo, hi]`` by bisection, given ``f(lo) > 0 >= f(hi)``."""
    flo, fhi = f(lo), f(hi)
    if not (flo > 0 >= fhi):
        raise ValueError(f"no sign change on [{lo}, {hi}]: f={flo:.3e}, {fhi:.3e}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def depolarizing_threshold(k: int, lo: float = 0.2, hi: float = 0.3, tol: float = 1e-6) -> float:
    """Noise level where the k-repetition code stops carrying coherent information."""
    return bisect_threshold(lambda p: depolarizing_repcode_ci(k, p), lo, hi, tol)


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` as non-increasing tuples, largest parts first."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def best_product_repcode(k: int, p: float) -> tuple[ProductRepSpec | None, int, float]:
    """Best rate over products of repetition codes on ``k`` depolarizing channels.

    Channel inputs not covered by a block are frozen to a fixed pure state
    and contribute nothing, so the rate is the total over blocks divided by
    ``k``. Returns ``(spec, frozen, rate)``; ``spec`` is ``None`` when every
    input is frozen (no block has positive coherent information).
    """
    if not 1 <= k <= 10:
        raise ValueError("exhaustive search supports 1 <= k <= 10")
    block = {n: depolarizing_repcode_ci(n, p) for n in range(1, k + 1)}
    best, best_total = (), 0.0
    for j in range(k, 0, -1):
        for part in integer_partitions(j):
            total = sum(block[n] for n in part)
            if total > best_total:
                best, best_total = part, total
    spec = ProductRepSpec(best) if best else None
    return spec, k - sum(best), best_total / k


def construction_spec(spec, kind: str = "FF") -> AnsatzSpec:
    """Ansatz descriptor matching the explicit repetition-code networks."""
    spec = _as_product_spec(spec)
    n = spec.n_qubits
    n_ref = sum(spec.ref_sizes())
    if kind == "FF":
        l = len(spec.partition)
        return AnsatzSpec("FF", n, n_ref=n_ref, hidden=(l, l, 1), activations=("cos", "relu", "relu"))
    if kind == "RBM":
        m = sum(len(pos) - 1 for pos in block_positions(spec))
        return AnsatzSpec("RBM", n, n_ref=n_ref, hidden=(m,))
    raise ValueError(f"no construction for ansatz kind {kind!r}")


def ff_repetition_construction(spec) -> FFParams:
    """Feed-forward network whose amplitude is 1 on product-repetition codewords, 0 elsewhere.

    Layer 1 puts ``cos(2 pi s_i / b_i)`` on block ``i`` (``s_i`` = number of
    ones among its ``b_i`` bits), which equals 1 exactly when the block is
    constant. Layer 2 maps values at most ``cos(2 pi / b_i)`` to 0 and 1 to
    1, and the last hidden node is an AND gate ``relu(sum z - l + 1)``.
    """
    spec = _as_product_spec(spec)
    positions = block_positions(spec)
    n, l = spec.n_qubits, len(positions)
    w1 = np.zeros((l, n))
    w2 = np.zeros((l, l))
    b2 = np.zeros(l)
    for i, pos in enumerate(positions):
        theta = 2 * np.pi / len(pos)
        w1[i, pos] = theta
        c = np.cos(theta)
        w2[i, i] = 1 / (1 - c)
        b2[i] = -c / (1 - c)
    w3 = np.ones((1, l))
    b3 = np.array([1.0 - l])
    w_out = np.array([[1.0], [0.0]])
    return FFParams(
        (w1, w2, w3, w_out),
        (np.zeros(l), b2, b3, np.zeros(2)),
        ("cos", "relu", "relu"),
        "cartesian",
    )


def rbm_repetition_construction(spec) -> RBMParams:
    """RBM whose amplitude is constant on product-repetition codewords and zero elsewhere.

    A block of ``b`` bits with ``s`` ones gets ``b - 1`` hidden units with
    factors ``1 - w^(s - t)``, ``w = exp(2 pi i / b)``, ``t = 1..b-1``.
    Their product is a multiple of ``1 + z + ... + z^(b-1)`` at ``z = w^s``,
    which vanishes unless ``s`` is 0 or ``b``. All parameters have modulus
    at most pi.
    """
    spec = _as_product_spec(spec)
    positions = block_positions(spec)
    n = spec.n_qubits
    b_hidden, rows = [], []
    for pos in positions:
        b = len(pos)
        for t in range(1, b):
            row = np.zeros(n, dtype=complex)
            row[pos] = -2j * np.pi / b
            rows.append(row)
            b_hidden.append(-1j * np.pi + 2j * np.pi * t / b)
    return RBMParams(np.zeros(n, dtype=complex), np.array(b_hidden), np.array(rows))

"""Coherent information of a code state sent through k copies of a channel.

Codes live on ``R ⊗ A_1 ⊗ ... ⊗ A_k`` with the reference first. Printed
table codes use the opposite display order ``A^k|R``; :func:`parse_basis_string`
is the one place where the two conventions meet.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Sequence

import numpy as np

from .channels import KrausChannel, channel_from_dict, joint_output_vectors
from .linalg import (
    DegenerateStateError,
    StateVector,
    entropy_from_spectrum,
    hermitian_eigenvalues,
    normalize,
)

__all__ = [
    "CodeEvaluation",
    "coherent_information",
    "parse_basis_string",
    "table_code_state",
    "evaluate_table_code",
    "TableCode",
    "load_table_codes",
    "ci_objective",
]

DISPLAY_CONVENTION = "basis strings written A^k|R (channel inputs, then reference)"


@dataclass(frozen=True)
class CodeEvaluation:
    k: int
    ci_total: float
    ci_per_use: float
    entropy_B: float
    entropy_RB: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "ci_total": self.ci_total,
            "ci_per_use": self.ci_per_use,
            "entropy_B": self.entropy_B,
            "entropy_RB": self.entropy_RB,
        }


def _output_entropies(v: np.ndarray, dim_r: int) -> tuple[float, float]:
    """S(B^k) and S(RB^k) for sigma_RB = V V^dagger.

    sigma_RB shares its nonzero spectrum with the Gram matrix V^dagger V,
    so the smaller of the two is diagonalized.
    """
    rows, cols = v.shape
    gram = v.conj().T @ v if cols < rows else v @ v.conj().T
    s_rb = entropy_from_spectrum(hermitian_eigenvalues(gram))
    vr = v.reshape(dim_r, rows // dim_r, cols)
    sigma_b = np.einsum("rbk,rck->bc", vr, vr.conj())
    s_b = entropy_from_spectrum(hermitian_eigenvalues(sigma_b))
    return s_b, s_rb


def coherent_information(code: StateVector, channel: KrausChannel, k: int) -> CodeEvaluation:
    """Evaluate I(R>B^k) = S(sigma_B) - S(sigma_RB) for the code.

    The reference dimension is whatever is left after the trailing ``k``
    channel inputs; the code is normalized first.

    Examples
    --------
    >>> from nnqcodes.channels import depolarizing
    >>> bell = StateVector([1, 0, 0, 1])
    >>> round(coherent_information(bell, depolarizing(0.0), 1).ci_total, 12)
    1.0
    """
    psi = normalize(code)
    v = joint_output_vectors(channel, k, psi.amplitudes)
    dim_r = psi.dim // channel.in_dim**k
    s_b, s_rb = _output_entropies(v, dim_r)
    total = s_b - s_rb
    return CodeEvaluation(int(k), total, total / k, s_b, s_rb)


def _local_dim(total: int, length: int) -> int:
    if length == 0:
        if total != 1:
            raise ValueError(f"empty reference label but dim_R={total}")
        return 1
    d = int(round(total ** (1.0 / length)))
    for cand in (d - 1, d, d + 1):
        if cand >= 1 and cand**length == total:
            return cand
    raise ValueError(f"dim_R={total} is not a power with {length} digits")


def parse_basis_string(label: str, dim_R: int, dim_A: int, k: int) -> int:
    """Index in the internal (R, A_1..A_k) layout of a label written ``A^k|R``.

    The channel part has ``k`` digits in base ``dim_A``; the reference part
    has one digit per reference qudit, its base inferred from ``dim_R``.
    """
    a_part, sep, r_part = label.strip().partition("|")
    if not sep:
        if len(a_part) != 2 * k:
            raise ValueError(f"basis string {label!r} must have length {2 * k}")
        a_part, r_part = a_part[:k], a_part[k:]
    if len(a_part) != k:
        raise ValueError(f"basis string {label!r}: expected {k} channel digits")
    d_r = _local_dim(dim_R, len(r_part))
    try:
        a_digits = [int(c) for c in a_part]
        r_digits = [int(c) for c in r_part]
    except ValueError:
        raise ValueError(f"basis string {label!r} has non-digit symbols") from None
    if any(x >= dim_A for x in a_digits) or any(x >= d_r for x in r_digits):
        raise ValueError(f"basis string {label!r} has digits outside the alphabet")
    r_idx = 0
    for x in r_digits:
        r_idx = r_idx * d_r + x
    a_idx = 0
    for x in a_digits:
        a_idx = a_idx * dim_A + x
    return r_idx * dim_A**k + a_idx


def table_code_state(
    entries: Iterable[tuple[str, complex]], dim_R: int, dim_A: int, k: int
) -> StateVector:
    """Sparse (label, amplitude) list to a normalized internal-order state."""
    amps = np.zeros(dim_R * dim_A**k, dtype=complex)
    seen = set()
    for label, value in entries:
        idx = parse_basis_string(label, dim_R, dim_A, k)
        if idx in seen:
            raise ValueError(f"duplicate basis string {label!r}")
        seen.add(idx)
        amps[idx] = complex(value)
    return normalize(StateVector(amps, [dim_R] + [dim_A] * k))


def evaluate_table_code(
    entries: Iterable[tuple[str, complex]],
    dim_R: int,
    dim_A: int,
    k: int,
    channel: KrausChannel,
) -> CodeEvaluation:
    """Coherent information of a printed code.

    Amplitudes not listed are taken to be exactly zero.
    """
    return coherent_information(table_code_state(entries, dim_R, dim_A, k), channel, k)


@dataclass(frozen=True)
class TableCode:
    id: str
    channel: KrausChannel
    k: int
    ci_per_use: float
    entries: tuple[tuple[str, complex], ...]
    note: str = ""

    @property
    def dim_R(self) -> int:
        return 2**self.k

    def state(self) -> StateVector:
        return table_code_state(self.entries, self.dim_R, self.channel.in_dim, self.k)

    def evaluate(self) -> CodeEvaluation:
        return evaluate_table_code(
            self.entries, self.dim_R, self.channel.in_dim, self.k, self.channel
        )


def _code_from_record(rec: dict) -> TableCode:
    entries = tuple((s, complex(re, im)) for s, re, im in rec["entries"])
    return TableCode(
        rec["id"],
        channel_from_dict(rec["channel"]),
        int(rec["k"]),
        float(rec["ci_per_use"]),
        entries,
        rec.get("note", ""),
    )


def load_table_codes(section: str = "codes") -> list[TableCode]:
    """Bundled printed codes; ``section="errata"`` gives the corrected readings."""
    text = resources.files("nnqcodes").joinpath("data/published_codes.json").read_text()
    data = json.loads(text)
    return [_code_from_record(r) for r in data.get(section, [])]


def ci_objective(spec, channel: KrausChannel, k: int) -> Callable[[np.ndarray], float]:
    """Minimization objective ``-ci_per_use`` over flat ansatz parameters.

    Parametrizations that produce the zero vector (or non-finite values)
    score ``+inf`` so a search never crashes on them.
    """
    from .ansatz import assemble_state

    def f(params: Sequence[float]) -> float:
        try:
            psi = assemble_state(spec, np.asarray(params, dtype=float))
            val = -coherent_information(psi, channel, k).ci_per_use
        except DegenerateStateError:
            return float("inf")
        return val if np.isfinite(val) else float("inf")

    return f

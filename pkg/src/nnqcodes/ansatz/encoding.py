"""Maps from d-ary symbol strings to real network inputs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["Encoding", "encode_input", "decode_input"]

ENCODING_KINDS = ("scaled", "binary", "one_hot")


@dataclass(frozen=True)
class Encoding:
    """How one qudit value in ``[0, d)`` becomes network inputs.

    ``scaled`` gives one input ``i/(d-1)``, ``binary`` gives ``ceil(log2 d)``
    bits (most significant first) and ``one_hot`` gives ``d`` bits with the
    bit for symbol ``i`` at position ``d-1-i`` counted from the left.
    """

    kind: str = "scaled"
    d: int = 2

    def __post_init__(self):
        if self.kind not in ENCODING_KINDS:
            raise ValueError(f"unknown encoding {self.kind!r}")
        if self.d < 2:
            raise ValueError("local dimension must be at least 2")

    @property
    def width(self) -> int:
        """Input nodes per symbol."""
        if self.kind == "scaled":
            return 1
        if self.kind == "binary":
            return int(np.ceil(np.log2(self.d)))
        return self.d

    def table(self) -> np.ndarray:
        """Row ``i`` is the encoding of symbol ``i``."""
        d = self.d
        if self.kind == "scaled":
            return (np.arange(d, dtype=float) / (d - 1))[:, None]
        if self.kind == "binary":
            w = self.width
            return np.array([[(i >> (w - 1 - j)) & 1 for j in range(w)] for i in range(d)], float)
        return np.fliplr(np.eye(d))


def encode_input(symbols: Sequence[int], enc: Encoding) -> np.ndarray:
    """Concatenate the per-symbol encodings of a d-ary string.

    >>> encode_input([5], Encoding("binary", 6))
    array([1., 0., 1.])
    """
    s = np.asarray(symbols, dtype=int).reshape(-1)
    if s.size and (s.min() < 0 or s.max() >= enc.d):
        raise ValueError(f"symbols must lie in [0, {enc.d})")
    return enc.table()[s].reshape(-1)


def decode_input(x: Sequence[float], enc: Encoding) -> np.ndarray:
    """Inverse of :func:`encode_input` on its image."""
    x = np.asarray(x, dtype=float).reshape(-1, enc.width)
    table = enc.table()
    dist = np.abs(x[:, None, :] - table[None, :, :]).sum(axis=2)
    out = dist.argmin(axis=1)
    if np.any(dist[np.arange(len(out)), out] > 1e-9):
        raise ValueError("vector is not a valid encoding")
    return out

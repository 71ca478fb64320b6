"""Exact transition law of the insertion channel for short words.

Output words have variable length, so they are keyed by an integer code:
the bits read as a binary number with a leading sentinel 1 bit, which makes
``(length, bits)`` recoverable and distinct lengths never collide.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

import numpy as np

from .channel import as_bitword

__all__ = [
    "GuardError",
    "OutputDistribution",
    "channel_law",
    "conditional_output_entropy",
    "decode_word",
    "encode_word",
    "full_alphabet_guard",
    "output_distribution",
    "word_guard",
]

WORD_GUARD = 16
FULL_ALPHABET_GUARD = 8
GUARD_ENV = "SYNCAP_GUARD_N"


class GuardError(ValueError):
    """Raised when an enumeration would exceed its blocklength guard."""


def full_alphabet_guard() -> int:
    """Largest blocklength for workflows enumerating all of ``{0,1}^n``.

    ``SYNCAP_GUARD_N`` overrides the default of 8 (memory grows like 6^n).
    """
    value = os.environ.get(GUARD_ENV)
    return int(value) if value else FULL_ALPHABET_GUARD


def word_guard() -> int:
    return max(WORD_GUARD, full_alphabet_guard())


def _check_alpha(alpha: float):
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")


def encode_word(y) -> int:
    code = 1
    for b in y:
        code = (code << 1) | int(b)
    return code


def decode_word(code: int) -> np.ndarray:
    code = int(code)
    length = code.bit_length() - 1
    return np.array([(code >> (length - 1 - k)) & 1 for k in range(length)], dtype=np.uint8)


def channel_law(x, y, alpha: float) -> float:
    """P(y | x) by dynamic programming over (input prefix, output prefix).

    ``f[i, j]`` is the probability that the first ``i`` input bits produce
    exactly the first ``j`` output bits; bit ``i`` either passes alone or is
    followed by one inserted bit (probability alpha/2 per value).
    """
    _check_alpha(alpha)
    x = as_bitword(x, "x")
    y = as_bitword(y, "y")
    n, m = x.size, y.size
    if not (n <= m <= 2 * n):
        return 0.0
    keep, ins = 1.0 - alpha, alpha / 2.0
    f = np.zeros(m + 1)
    f[0] = 1.0
    for xi in x:
        g = np.zeros(m + 1)
        # x_i lands at output j-1 (0-based) and nothing follows it
        g[1:] += keep * (y == xi) * f[:-1]
        # x_i lands at output j-2 and any bit follows it
        g[2:] += ins * (y[:-1] == xi) * f[:-2]
        f = g
    return float(f[m])


@dataclass(frozen=True, eq=False)
class OutputDistribution:
    """Law of Y given a fixed input word, over sentinel-coded output words."""

    codes: np.ndarray
    probs: np.ndarray
    n: int
    alpha: float

    def __len__(self):
        return self.codes.size

    def __getitem__(self, y) -> float:
        code = encode_word(as_bitword(y, "y"))
        i = np.searchsorted(self.codes, code)
        if i < self.codes.size and self.codes[i] == code:
            return float(self.probs[i])
        return 0.0

    def items(self) -> Iterator[Tuple[Tuple[int, ...], float]]:
        for c, p in zip(self.codes, self.probs):
            yield tuple(int(b) for b in decode_word(c)), float(p)

    def as_dict(self) -> Dict[Tuple[int, ...], float]:
        return dict(self.items())

    @property
    def total(self) -> float:
        return float(self.probs.sum())

    def entropy(self) -> float:
        p = self.probs[self.probs > 0]
        return float(-(p * np.log2(p)).sum())


def _merge(codes, probs):
    uniq, inverse = np.unique(codes, return_inverse=True)
    return uniq, np.bincount(inverse.ravel(), weights=probs, minlength=uniq.size)


def output_distribution(x, alpha: float, guard: int = None) -> OutputDistribution:
    """Enumerate the three per-bit outcomes (none, insert 0, insert 1).

    Equal output prefixes are merged after every input bit, which keeps the
    frontier far below 3^n for typical words while summing the same mass.
    """
    _check_alpha(alpha)
    x = as_bitword(x, "x")
    guard = word_guard() if guard is None else guard
    if x.size > guard:
        raise GuardError(f"blocklength {x.size} exceeds the enumeration guard {guard} "
                         f"(set {GUARD_ENV} to override)")
    codes = np.ones(1, dtype=np.int64)
    probs = np.ones(1)
    keep, ins = 1.0 - alpha, alpha / 2.0
    for xi in x:
        base = codes * 2 + int(xi)
        if alpha == 0.0:
            codes = base
            continue
        codes = np.concatenate((base, base * 2, base * 2 + 1))
        probs = np.concatenate((probs * keep, probs * ins, probs * ins))
        codes, probs = _merge(codes, probs)
    return OutputDistribution(codes, probs, x.size, alpha)


def conditional_output_entropy(x, alpha: float, guard: int = None) -> float:
    """H(Y | X = x) in bits."""
    return output_distribution(x, alpha, guard).entropy()

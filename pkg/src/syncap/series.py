"""Series constants of the small-alpha capacity expansion, with tail bounds.

All truncated sums are accumulated sequentially from the smallest term to
the largest, so rounding error stays far below the 1e-12 level at which the
identities between these constants are checked.  Every tail bound uses
``h(.) <= 1`` and ``log2(l) <= l`` and is summed in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExpansionPoint",
    "SeriesValue",
    "a1",
    "binary_entropy",
    "capacity_expansion",
    "e_log_l0",
    "epsilon2_bound",
    "g1",
    "hyx_asymptote",
    "hzv_converse_bound",
]

LOG2E = math.log2(math.e)
DEFAULT_L = 1000


@dataclass(frozen=True)
class SeriesValue:
    value: float
    L: int
    tail_bound: float

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class ExpansionPoint:
    alpha: float
    value: float
    remainder_order: str = "O(alpha^(3/2 - eps)), uncontrolled"
    g1: SeriesValue = None


def binary_entropy(p: float) -> float:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _h_vec(p: np.ndarray) -> np.ndarray:
    return -p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p)


def _check_L(L):
    if int(L) != L or L < 1:
        raise ValueError(f"truncation L must be a positive integer, got {L!r}")
    return int(L)


def _pow2(e: np.ndarray) -> np.ndarray:
    return np.ldexp(1.0, e.astype(np.int64))


def _sum(terms) -> float:
    terms = np.asarray(terms, dtype=float).ravel()
    terms = terms[terms != 0.0]
    if terms.size == 0:
        return 0.0
    # sequential accumulation, smallest magnitude first
    return float(np.cumsum(terms[np.argsort(np.abs(terms), kind="stable")])[-1])


def _log_l_terms(L: int) -> np.ndarray:
    l = np.arange(1, L + 1, dtype=float)
    return _pow2(-np.arange(2, L + 2)) * l * np.log2(l)


def _boundary_terms(L: int) -> np.ndarray:
    """(b+1) 2^-b h(1/(b+1)) for b = 1..L."""
    b = np.arange(1, L + 1, dtype=float)
    return (b + 1) * _pow2(-np.arange(1, L + 1)) * _h_vec(1.0 / (b + 1))


def e_log_l0(L: int = DEFAULT_L) -> SeriesValue:
    """E[log2 L0] for the length-biased run length, P(L0 = l) = l 2^{-l-1}."""
    L = _check_L(L)
    tail = math.ldexp(L * L + 4 * L + 6, -L - 1)
    return SeriesValue(_sum(_log_l_terms(L)), L, tail)


def a1(L: int = DEFAULT_L) -> SeriesValue:
    """Half the double series sum_{a,b<=L} (b+1) 2^{-a-b} h(1/(b+1))."""
    L = _check_L(L)
    a = _pow2(-np.arange(1, L + 1))
    terms = 0.5 * np.outer(a, _boundary_terms(L))
    tail = math.ldexp(L + 6, -L - 1)
    return SeriesValue(_sum(terms), L, tail)


def g1(L: int = DEFAULT_L) -> SeriesValue:
    """First-order coefficient G1, truncated at L, with the closed-form tail.

    The three parts (the -log2(e) constant, half the length-biased log-run
    series and the boundary double series) are summed as one term list.
    """
    L = _check_L(L)
    a = _pow2(-np.arange(1, L + 1))
    terms = np.concatenate((
        [-LOG2E],
        0.5 * _log_l_terms(L),
        0.5 * np.outer(a, _boundary_terms(L)).ravel(),
    ))
    tail = math.ldexp(L * L + 8 * L + 24, -L - 2)
    return SeriesValue(_sum(terms), L, tail)


def capacity_expansion(alpha: float, L: int = DEFAULT_L) -> ExpansionPoint:
    """1 + alpha log2(alpha) + G1 alpha; an approximation, never a bound."""
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")
    coeff = g1(L)
    if alpha == 0.0:
        return ExpansionPoint(0.0, 1.0, g1=coeff)
    return ExpansionPoint(alpha, 1.0 + alpha * math.log2(alpha) + coeff.value * alpha, g1=coeff)


def hyx_asymptote(alpha: float, L: int = DEFAULT_L) -> float:
    """Per-symbol H(Y | X^n) to first order in alpha, without the error interval."""
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")
    return binary_entropy(alpha) + alpha * (1.0 - 0.5 * e_log_l0(L).value - a1(L).value)


def epsilon2_bound(alpha: float, L: int = DEFAULT_L) -> SeriesValue:
    """(alpha^2/2) sum_{a,b} (a+b)(b+1) 2^{-a-b} h(1/(b+1)), truncated at L."""
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")
    L = _check_L(L)
    idx = np.arange(1, L + 1, dtype=float)
    w = _pow2(-np.arange(1, L + 1))
    hb = _h_vec(1.0 / (idx + 1)) * (idx + 1)
    # sum_{a,b} (a+b) w_a w_b hb_b = (sum a w_a)(sum w_b hb_b) + (sum w_a)(sum b w_b hb_b)
    s = (_sum(idx * w) * _sum(w * hb) + _sum(w) * _sum(idx * w * hb))
    scale = 0.5 * alpha * alpha
    tail = scale * math.ldexp(L * L + 10 * L + 28, -L)
    return SeriesValue(scale * s, L, tail)


def hzv_converse_bound(alpha: float, epsilon: float, l_star: int) -> float:
    """0.5 alpha^{2-eps} (2 + 0.5 sqrt(alpha) L*), the run-capped h(z, v) budget."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if l_star < 1:
        raise ValueError("l_star must be positive")
    return 0.5 * alpha ** (2.0 - epsilon) * (2.0 + 0.5 * math.sqrt(alpha) * l_star)

"""Exact finite-blocklength information quantities.

Everything here enumerates the joint space of input words and per-bit
insertion outcomes, so blocklengths are limited by
:func:`~syncap.law.full_alphabet_guard` (8 by default, about 1.7M atoms).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from .law import GuardError, full_alphabet_guard, GUARD_ENV

__all__ = [
    "BaTrace",
    "ConvergenceWarning",
    "InputLaw",
    "MIResult",
    "blahut_arimoto",
    "channel_matrix",
    "mutual_information",
    "upper_bound_sequence",
]


class ConvergenceWarning(RuntimeWarning):
    pass


def _check_n(n: int):
    if n < 1:
        raise ValueError("blocklength must be positive")
    guard = full_alphabet_guard()
    if n > guard:
        raise GuardError(f"blocklength {n} exceeds the full-alphabet guard {guard} "
                         f"(set {GUARD_ENV} to override)")


def _word_bits(n: int) -> np.ndarray:
    """Row w holds the bits of word w, first channel input in column 0."""
    w = np.arange(2**n)
    return ((w[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class InputLaw:
    """Distribution of the input block, materialised as a table over {0,1}^n.

    Table index ``w`` encodes the word whose first bit is the most
    significant bit of ``w``.
    """

    kind: str
    n: int
    params: Tuple[float, ...] = ()
    table: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def iid(cls, n: int, p: float = 0.5) -> "InputLaw":
        """Independent bits with P(X_i = 1) = p."""
        _check_prob(p, "p")
        return cls("iid", n, (float(p),), _iid_table(n, p))

    @classmethod
    def markov(cls, n: int, p01: float, p10: float) -> "InputLaw":
        """Stationary binary Markov chain with flip probabilities p01 (0->1), p10 (1->0)."""
        _check_prob(p01, "p01")
        _check_prob(p10, "p10")
        return cls("markov", n, (float(p01), float(p10)), _markov_table(n, p01, p10))

    @classmethod
    def explicit(cls, table) -> "InputLaw":
        table = np.asarray(table, dtype=float)
        n = int(round(np.log2(table.size))) if table.size else 0
        if table.ndim != 1 or table.size != 2**n or n < 1:
            raise ValueError("explicit table must have length 2^n with n >= 1")
        if np.any(table < 0) or abs(table.sum() - 1.0) > 1e-12:
            raise ValueError("explicit table must be nonnegative and sum to 1")
        return cls("explicit", n, (), table.copy())

    def probabilities(self) -> np.ndarray:
        return self.table

    def complement(self) -> "InputLaw":
        """Law of the bitwise complement of the input."""
        return InputLaw.explicit(self.table[::-1])

    def entropy(self) -> float:
        return _entropy(self.table)


def _check_prob(p, name):
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")


def _iid_table(n, p):
    ones = _word_bits(n).sum(axis=1)
    return p**ones * (1.0 - p) ** (n - ones)


def _markov_table(n, p01, p10):
    bits = _word_bits(n)
    total = p01 + p10
    pi1 = 0.5 if total == 0 else p01 / total
    prob = np.where(bits[:, 0] == 1, pi1, 1.0 - pi1)
    trans = np.array([[1.0 - p01, p01], [p10, 1.0 - p10]])
    for i in range(1, n):
        prob = prob * trans[bits[:, i - 1], bits[:, i]]
    return prob


def _entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _grouped_entropy(keys, weights) -> float:
    _, inverse = np.unique(keys, return_inverse=True)
    return _entropy(np.bincount(inverse.ravel(), weights=weights.ravel()))


@lru_cache(maxsize=4)
def _atoms(n: int):
    """Output and segment-length codes for every (input word, outcome) pair.

    Outcomes are indexed base 3 per position: 0 no insertion, 1 insert a 0,
    2 insert a 1.  Returns ``(ycode, kcode)``, both of shape (2^n, 3^n).
    """
    x = _word_bits(n).astype(np.int64)
    t = np.arange(3**n)
    digits = (t[:, None] // 3 ** np.arange(n - 1, -1, -1)) % 3
    inserted = digits > 0

    ycode = np.ones((2**n, 3**n), dtype=np.int64)
    for i in range(n):
        ycode = ycode * 2 + x[:, i, None]
        ycode = np.where(inserted[None, :, i], ycode * 2 + (digits[None, :, i] - 1), ycode)

    # segment-length vector K as a mixed-radix number; run j of length r
    # takes digit values 0..r (its insertion count)
    run = np.concatenate((np.zeros((2**n, 1), dtype=np.int64),
                          np.cumsum(x[:, 1:] != x[:, :-1], axis=1)), axis=1)
    lengths = np.stack([np.bincount(r, minlength=n) for r in run])
    radix = np.concatenate((np.ones((2**n, 1), dtype=np.int64),
                            np.cumprod(lengths[:, :-1] + 1, axis=1)), axis=1)
    stride = np.take_along_axis(radix, run, axis=1)
    kcode = stride @ inserted.T.astype(np.int64)
    for arr in (ycode, kcode):
        arr.setflags(write=False)
    return ycode, kcode


def _outcome_probs(n: int, alpha: float) -> np.ndarray:
    per = np.array([1.0 - alpha, alpha / 2.0, alpha / 2.0])
    prob = np.ones(1)
    for _ in range(n):
        prob = np.outer(prob, per).ravel()
    return prob


@dataclass(frozen=True)
class MIResult:
    n: int
    alpha: float
    h_y: float
    h_y_given_x: float
    h_ab: float
    h_ab_given_xyk: float
    h_k_given_xy: float
    mutual_information: float

    @property
    def residual_direct(self) -> float:
        return self.mutual_information - (self.h_y - self.h_y_given_x)

    @property
    def residual_decomposition(self) -> float:
        return self.mutual_information - (self.h_y - self.h_ab + self.h_ab_given_xyk
                                          + self.h_k_given_xy)

    @property
    def rate(self) -> float:
        return self.mutual_information / self.n


def mutual_information(law: InputLaw, alpha: float) -> MIResult:
    """Exact I(X^n; Y) and its run-segment entropy decomposition.

    (Y, K) are functions of (X, A, B) and (A, B) is independent of X, so
    H(A,B | X,Y,K) = H(X) + H(A,B) - H(X,Y,K) and H(K | X,Y) = H(X,Y,K) - H(X,Y).
    """
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")
    n = law.n
    _check_n(n)
    ycode, kcode = _atoms(n)
    px = law.probabilities()
    pt = _outcome_probs(n, alpha)

    rows = np.flatnonzero(px > 0)
    cols = np.flatnonzero(pt > 0)
    y = ycode[np.ix_(rows, cols)]
    k = kcode[np.ix_(rows, cols)]
    w = np.outer(px[rows], pt[cols])

    shift = 2 * n + 1
    xy = (rows[:, None].astype(np.int64) << shift) | y
    xyk = (xy << n) | k  # K code < 2^n since r + 1 <= 2^r

    h_x = _entropy(px)
    h_ab = _entropy(pt)
    h_y = _grouped_entropy(y, w)
    h_xy = _grouped_entropy(xy, w)
    h_xyk = _grouped_entropy(xyk, w)
    h_y_given_x = h_xy - h_x
    return MIResult(
        n=n,
        alpha=alpha,
        h_y=h_y,
        h_y_given_x=h_y_given_x,
        h_ab=h_ab,
        h_ab_given_xyk=h_x + h_ab - h_xyk,
        h_k_given_xy=h_xyk - h_xy,
        mutual_information=h_y - h_y_given_x,
    )


def channel_matrix(n: int, alpha: float) -> sparse.csr_matrix:
    """Sparse P(y | x) with rows over {0,1}^n and columns over reachable outputs."""
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")
    _check_n(n)
    ycode, _ = _atoms(n)
    pt = _outcome_probs(n, alpha)
    cols = np.flatnonzero(pt > 0)
    y = ycode[:, cols]
    shift = 2 * n + 1
    key = (np.arange(2**n, dtype=np.int64)[:, None] << shift) | y
    key, inverse = np.unique(key, return_inverse=True)
    mass = np.bincount(inverse.ravel(), weights=np.broadcast_to(pt[cols], y.shape).ravel())
    row = key >> shift
    outputs, col = np.unique(key & ((1 << shift) - 1), return_inverse=True)
    return sparse.csr_matrix((mass, (row, col.ravel())), shape=(2**n, outputs.size))


@dataclass
class BaTrace:
    n: int
    alpha: float
    values: List[float]
    capacity: float
    upper: float
    law: np.ndarray = field(repr=False)
    iterations: int
    gap: float
    converged: bool

    @property
    def certified_upper(self) -> float:
        """Per-symbol bound that C_n provably does not exceed."""
        return self.upper


def _divergences(W: sparse.csr_matrix, log_w: np.ndarray, q: np.ndarray) -> np.ndarray:
    terms = W.data * (log_w - np.log2(q[W.indices]))
    return np.add.reduceat(terms, W.indptr[:-1])


def blahut_arimoto(n: int, alpha: float, tol: float = 1e-6, max_iter: int = 10000,
                   init: Optional[Sequence[float]] = None) -> BaTrace:
    """Maximise I(X^n; Y) over input laws by alternating maximisation.

    Each iteration records the lower bound ``log sum_x p(x) 2^{D(x)}`` and the
    upper bound ``max_x D(x)``, where ``D(x)`` is the divergence of row x
    from the current output marginal.  Both are in bits per input symbol.
    Iteration stops when the gap falls below ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    W = channel_matrix(n, alpha)
    log_w = np.log2(W.data)
    p = np.full(2**n, 2.0**-n) if init is None else np.asarray(init, dtype=float)
    if p.size != 2**n or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("init must be a probability vector over {0,1}^n")

    values: List[float] = []
    upper = gap = np.inf
    for it in range(1, int(max_iter) + 1):
        q = W.T @ p
        d = _divergences(W, log_w, q)
        weighted = p * np.exp2(d - d.max())
        z = weighted.sum()
        lower = (np.log2(z) + d.max()) / n
        upper = d.max() / n
        if values and lower < values[-1] - 1e-12:
            raise RuntimeError(f"Blahut-Arimoto lower bound decreased at iteration {it}: "
                               f"{values[-1]!r} -> {lower!r}")
        values.append(float(lower))
        gap = upper - lower
        if gap < tol:
            break
        p = weighted / z

    converged = gap < tol
    if not converged:
        warnings.warn(f"Blahut-Arimoto did not converge for n={n}, alpha={alpha}: "
                      f"gap {gap:.3e} after {len(values)} iterations", ConvergenceWarning)
    return BaTrace(n=n, alpha=alpha, values=values, capacity=values[-1], upper=float(upper),
                   law=p, iterations=len(values), gap=float(gap), converged=converged)


def upper_bound_sequence(alpha: float, n_max: int, tol: float = 1e-6,
                         max_iter: int = 10000) -> List[Tuple[int, BaTrace]]:
    """Blahut-Arimoto traces for n = 1..n_max.

    Every ``trace.upper`` bounds the capacity from above, so the smallest one
    over n is the best available bound.
    """
    _check_n(n_max)
    return [(n, blahut_arimoto(n, alpha, tol, max_iter)) for n in range(1, n_max + 1)]


def best_upper_bound(seq: List[Tuple[int, BaTrace]]) -> float:
    return min(trace.upper for _, trace in seq)

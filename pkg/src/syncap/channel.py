"""Binary random-insertion channel: realizations, runs, and derived processes.

A word of length ``n`` is sent through the channel; after input bit ``i`` an
independent uniform bit is inserted with probability ``alpha``.  A single use
of the channel is described by two length-``n`` vectors: the insertion
pattern (1 where an insertion happened after that bit) and the inserted bit
values (zero-filled where nothing was inserted).

Bit words are plain ``uint8`` numpy arrays, made read-only by
:func:`as_bitword`.  Every operation here is a pure function of its inputs;
randomness only enters through an explicit :class:`numpy.random.Generator`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

__all__ = [
    "ChannelParams",
    "InsertionRealization",
    "ProcessDiff",
    "RunDecomposition",
    "apply_channel",
    "as_bitword",
    "decompose_runs",
    "modified_realization",
    "perturbed_realization",
    "run_index",
    "sample_realization",
    "segment_lengths",
    "truncate_runs",
]


def as_bitword(bits, name: str = "word") -> np.ndarray:
    """Validate ``bits`` and return it as a read-only ``uint8`` array.

    Accepts any 1-d sequence of 0/1 values or a string such as ``"0110"``.
    """
    if isinstance(bits, str):
        bits = [int(c) for c in bits.strip()]
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 symbols")
    out = arr.astype(np.uint8, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ChannelParams:
    alpha: float
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(int(self.seed))


@dataclass(frozen=True, eq=False)
class InsertionRealization:
    """Insertion pattern and inserted bit values for one channel use."""

    pattern: np.ndarray
    inserted: np.ndarray

    def __post_init__(self):
        pattern = as_bitword(self.pattern, "pattern")
        inserted = as_bitword(self.inserted, "inserted")
        if pattern.shape != inserted.shape:
            raise ValueError("pattern and inserted must have the same length")
        if np.any(inserted & (pattern ^ 1)):
            raise ValueError("inserted bits must be 0 where no insertion occurred")
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "inserted", inserted)

    @property
    def n(self) -> int:
        return self.pattern.size

    @property
    def count(self) -> int:
        return int(self.pattern.sum())

    def __eq__(self, other):
        if not isinstance(other, InsertionRealization):
            return NotImplemented
        return (np.array_equal(self.pattern, other.pattern)
                and np.array_equal(self.inserted, other.inserted))

    __hash__ = None

    @classmethod
    def none(cls, n: int) -> "InsertionRealization":
        zeros = np.zeros(n, dtype=np.uint8)
        return cls(zeros, zeros)


@dataclass(frozen=True, eq=False)
class ProcessDiff:
    """Positions where a derived realization differs from the original.

    ``z`` flags removed insertions, ``v`` flags removed inserted 1-bits.
    """

    z: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        z = as_bitword(self.z, "z")
        v = as_bitword(self.v, "v")
        if z.shape != v.shape:
            raise ValueError("z and v must have the same length")
        if np.any(v & (z ^ 1)):
            raise ValueError("v may only be set where z is set")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True, eq=False)
class RunDecomposition:
    """Maximal constant blocks of a word, as parallel symbol/length arrays."""

    symbols: np.ndarray
    lengths: np.ndarray

    @property
    def M(self) -> int:
        return int(self.lengths.size)

    @property
    def runs(self) -> List[Tuple[int, int]]:
        return [(int(s), int(l)) for s, l in zip(self.symbols, self.lengths)]

    @property
    def starts(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.lengths)[:-1]))

    def expand(self) -> np.ndarray:
        return np.repeat(self.symbols, self.lengths).astype(np.uint8)


def sample_realization(n: int, params: ChannelParams,
                       rng: Optional[np.random.Generator] = None) -> InsertionRealization:
    """Draw an insertion realization of length ``n``.

    Without ``rng`` a fresh generator is seeded from ``params.seed``, so the
    same ``(n, params)`` always reproduces the same realization.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if rng is None:
        rng = params.rng()
    pattern, inserted = _draw_insertions(n, params.alpha, rng)
    return InsertionRealization(pattern, inserted)


def _draw_insertions(n, alpha, rng):
    pattern = (rng.random(n) < alpha).astype(np.uint8)
    inserted = rng.integers(0, 2, size=n, dtype=np.uint8) & pattern
    return pattern, inserted


def _check_lengths(x, r: InsertionRealization) -> np.ndarray:
    x = as_bitword(x, "x")
    if x.size != r.n:
        raise ValueError(f"word length {x.size} does not match realization length {r.n}")
    return x


def apply_channel(x, r: InsertionRealization) -> np.ndarray:
    """Interleave the inserted bits after the input bits they follow."""
    x = _check_lengths(x, r)
    return _interleave(x, r.pattern, r.inserted)


def _interleave(x, pattern, inserted):
    # output slot of input bit i is i + (number of insertions before it)
    pos = np.arange(x.size) + np.cumsum(pattern, dtype=np.int64) - pattern
    y = np.empty(x.size + int(pattern.sum()), dtype=np.uint8)
    y[pos] = x
    hit = pattern.astype(bool)
    y[pos[hit] + 1] = inserted[hit]
    y.setflags(write=False)
    return y


def run_index(x: np.ndarray) -> np.ndarray:
    """Zero-based run number of every position of a non-empty word."""
    change = np.empty(x.size, dtype=np.int64)
    change[0] = 0
    np.not_equal(x[1:], x[:-1], out=change[1:], casting="unsafe")
    return np.cumsum(change)


def _run_starts(x: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.concatenate(([True], x[1:] != x[:-1])))


def decompose_runs(x) -> RunDecomposition:
    x = as_bitword(x, "x")
    if x.size == 0:
        raise ValueError("cannot decompose an empty word")
    starts = _run_starts(x)
    lengths = np.diff(np.concatenate((starts, [x.size])))
    return RunDecomposition(x[starts].copy(), lengths)


def _insertions_per_run(x, pattern):
    starts = _run_starts(x)
    return starts, np.add.reduceat(pattern.astype(np.int64), starts)


def segment_lengths(x, r: InsertionRealization) -> np.ndarray:
    """Output bits attributed to each input run.

    An inserted bit belongs to the run holding the input bit it follows,
    whatever its value, so the result is a function of ``(x, pattern)``.
    """
    x = _check_lengths(x, r)
    starts, counts = _insertions_per_run(x, r.pattern)
    lengths = np.diff(np.concatenate((starts, [x.size])))
    return lengths + counts


def _remove(r: InsertionRealization, mask: np.ndarray):
    z = r.pattern & mask
    v = r.inserted & mask
    kept = InsertionRealization(r.pattern ^ z, r.inserted ^ v)
    return kept, z, v


def modified_realization(x, r: InsertionRealization) -> Tuple[InsertionRealization, ProcessDiff]:
    """Reverse every insertion of any run that received two or more.

    Insertions are counted toward the (extended) run whose core contains the
    bit they follow, so each insertion is counted exactly once.
    """
    x = _check_lengths(x, r)
    if x.size == 0:
        return r, ProcessDiff(r.pattern, r.inserted)
    counts = _insertions_per_run(x, r.pattern)[1]
    crowded = (counts >= 2).astype(np.uint8)
    kept, z, v = _remove(r, crowded[run_index(x)])
    return kept, ProcessDiff(z, v)


def perturbed_realization(x, r: InsertionRealization) -> Tuple[InsertionRealization, np.ndarray]:
    """Drop the first run's insertions in every run pair holding two or more.

    Returns the perturbed realization and the 0/1 vector of removed
    insertion positions.
    """
    x = _check_lengths(x, r)
    if x.size == 0:
        return r, r.pattern
    counts = _insertions_per_run(x, r.pattern)[1]
    crowded = np.zeros(counts.size, dtype=np.uint8)
    crowded[:-1] = (counts[:-1] + counts[1:]) >= 2
    kept, z, _ = _remove(r, crowded[run_index(x)])
    z.setflags(write=False)
    return kept, z


def truncate_runs(x, l_star: int) -> np.ndarray:
    """Cap run lengths at ``l_star`` by flipping overlong bits.

    Scanning the *output* left to right, a bit that would be the
    ``l_star + 1``-th equal bit in a row is flipped, and counting restarts
    from the flipped bit.
    """
    if int(l_star) != l_star or l_star < 1:
        raise ValueError("l_star must be a positive integer")
    x = as_bitword(x, "x")
    if x.size == 0:
        return x
    return _truncate(x, int(l_star))


def _truncate(x: np.ndarray, l_star: int) -> np.ndarray:
    m = l_star + 1
    starts = _run_starts(x)
    res = np.diff(np.concatenate((starts, [x.size]))) % m
    # A run ending on a flipped bit hands one matching bit to the next run
    # ("carry").  Per run: residue 0 toggles the carry, residue m-1 keeps it,
    # anything else clears it.
    toggle = res == 0
    reset = ~toggle & (res != m - 1)
    idx = np.arange(res.size)
    toggles = np.cumsum(toggle)
    last_reset = np.maximum.accumulate(np.where(reset, idx, -1))
    base = np.where(last_reset >= 0, toggles[np.maximum(last_reset, 0)], 0)
    carry_out = np.where(reset, 0, (toggles - base) & 1)
    carry_in = np.concatenate(([0], carry_out[:-1]))

    rid = run_index(x)
    k = np.arange(x.size) - starts[rid] + 1
    flip = ((carry_in[rid] + k) % m == 0).astype(np.uint8)
    out = x ^ flip
    out.setflags(write=False)
    return out

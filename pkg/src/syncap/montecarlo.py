"""Seeded Monte Carlo checks of per-symbol entropy terms at large blocklength.

Each estimator runs ``cfg.trials`` independent trials of length ``cfg.n``.
Trial ``k`` draws from its own generator, spawned from ``cfg.seed`` with
:class:`numpy.random.SeedSequence`, and results are reduced in trial order,
so estimates are bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .channel import _draw_insertions, _run_starts, run_index

__all__ = [
    "Estimate",
    "McConfig",
    "estimate_ab_entropy_rate",
    "estimate_boundary_ambiguity",
    "estimate_length_biased_log_run",
    "estimate_output_length",
    "estimate_zv_stats",
]

DEFAULT_BUDGET = 500_000_000


@dataclass(frozen=True)
class McConfig:
    alpha: float
    n: int
    trials: int
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    workers: int = 1

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        if self.n < 1 or self.trials < 1:
            raise ValueError("n and trials must be positive")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n * self.trials > self.budget:
            raise ValueError(f"n * trials = {self.n * self.trials} exceeds the sample budget "
                             f"{self.budget}")

    def generators(self) -> List[np.random.Generator]:
        seqs = np.random.SeedSequence(self.seed).spawn(self.trials)
        return [np.random.default_rng(s) for s in seqs]


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    samples: int

    @classmethod
    def from_samples(cls, values) -> "Estimate":
        values = np.asarray(values, dtype=float)
        k = values.size
        if k == 0:
            return cls(0.0, 0.0, 0)
        se = float(values.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
        return cls(float(values.mean()), se, k)

    @property
    def std(self) -> float:
        """Sample standard deviation of the per-trial values."""
        return self.std_error * math.sqrt(self.samples)

    def within(self, target: float, k: float) -> bool:
        return abs(self.mean - target) <= k * self.std_error


def _run(cfg: McConfig, trial: Callable[[np.random.Generator], object]) -> list:
    gens = cfg.generators()
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            return list(pool.map(trial, gens))
    return [trial(g) for g in gens]


def _plugin_entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum())


def _input(rng, n):
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def estimate_ab_entropy_rate(cfg: McConfig) -> Estimate:
    """Plug-in entropy of the iid pair (A_i, B_i); target h(alpha) + alpha."""
    def trial(rng):
        a, b = _draw_insertions(cfg.n, cfg.alpha, rng)
        ones = int(a.sum())
        high = int(b.sum())
        return _plugin_entropy([cfg.n - ones, ones - high, high])

    return Estimate.from_samples(_run(cfg, trial))


def estimate_output_length(cfg: McConfig) -> Estimate:
    """Relative length excess (|y| - n) / n; target alpha."""
    def trial(rng):
        a, _ = _draw_insertions(cfg.n, cfg.alpha, rng)
        return a.sum() / cfg.n

    return Estimate.from_samples(_run(cfg, trial))


def _crowded_runs(x, pattern, pairs: bool):
    starts = _run_starts(x)
    counts = np.add.reduceat(pattern.astype(np.int64), starts)
    if pairs:
        crowded = np.zeros(counts.size, dtype=np.uint8)
        crowded[:-1] = (counts[:-1] + counts[1:]) >= 2
    else:
        crowded = (counts >= 2).astype(np.uint8)
    return crowded[run_index(x)]


def estimate_zv_stats(cfg: McConfig) -> Tuple[Estimate, Estimate]:
    """Per-position frequencies of (z=1, v=0) and (z=1, v=1) under iid inputs.

    z marks insertions reversed by the at-most-one-per-run modification and
    v marks those whose inserted bit was 1.
    """
    def trial(rng):
        x = _input(rng, cfg.n)
        a, b = _draw_insertions(cfg.n, cfg.alpha, rng)
        mask = _crowded_runs(x, a, pairs=False)
        z = a & mask
        v = b & mask
        ones = int(v.sum())
        return (int(z.sum()) - ones) / cfg.n, ones / cfg.n

    out = np.array(_run(cfg, trial), dtype=float).reshape(-1, 2)
    return Estimate.from_samples(out[:, 0]), Estimate.from_samples(out[:, 1])


def _h(p):
    return -p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p)


def boundary_ambiguity_trial(x: np.ndarray, a: np.ndarray, b: np.ndarray):
    """Total segment-length ambiguity over interior run pairs of one trial.

    After the pair perturbation, a pair (j, j+1) contributes h(1/(r+1)),
    r = |run j+1|, when its only insertion carries run j+1's symbol and sits
    after the last bit of run j or after any bit of run j+1; the r + 1
    placements give identical outputs.  The output run j must also keep its
    input length, so an insertion after run j-1 that extends it is excluded.
    First and last runs are never part of a counted pair.

    Returns ``(sum of contributions, number of eligible pairs)``.
    """
    starts = _run_starts(x)
    m = starts.size
    if m < 4:
        return 0.0, 0
    lengths = np.diff(np.concatenate((starts, [x.size])))
    sym = x[starts]

    keep = a & (1 - _crowded_runs(x, a, pairs=True))
    val = b & keep
    counts = np.add.reduceat(keep.astype(np.int64), starts)
    # insertions carrying their own run's symbol
    matching = np.add.reduceat((keep & (1 - (val ^ x))).astype(np.int64), starts)
    ends = starts[1:] - 1
    # insertion after the last bit of run j carrying run j+1's symbol
    into_next = np.zeros(m, dtype=bool)
    into_next[:-1] = (keep[ends] == 1) & (val[ends] == sym[1:])

    j = np.arange(1, m - 2)
    single = counts[j] + counts[j + 1] == 1
    v1 = (counts[j] == 1) & into_next[j]
    v2 = (counts[j + 1] == 1) & (matching[j + 1] == 1)
    hit = single & (v1 | v2) & ~into_next[j - 1]
    r = lengths[j + 1][hit].astype(float)
    return float(_h(1.0 / (r + 1.0)).sum()), j.size


def estimate_boundary_ambiguity(cfg: McConfig, per: str = "symbol") -> Estimate:
    """Segment-length ambiguity H(K | X, Y) per unit of alpha, iid inputs.

    ``per="symbol"`` divides each trial total by ``n * alpha``;
    ``per="pair"`` divides by ``(eligible run pairs) * alpha``.  For
    ``alpha = 0`` the estimate is 0 with zero samples.
    """
    if per not in ("symbol", "pair"):
        raise ValueError("per must be 'symbol' or 'pair'")
    if cfg.alpha == 0.0:
        return Estimate(0.0, 0.0, 0)

    def trial(rng):
        x = _input(rng, cfg.n)
        a, b = _draw_insertions(cfg.n, cfg.alpha, rng)
        total, pairs = boundary_ambiguity_trial(x, a, b)
        units = cfg.n if per == "symbol" else max(pairs, 1)
        return total / (units * cfg.alpha)

    return Estimate.from_samples(_run(cfg, trial))


def estimate_length_biased_log_run(cfg: McConfig, mode: str = "iid") -> Estimate:
    """Average log2 length of the run containing each position.

    Every position is used, which is the exact average over a uniformly
    chosen position.  ``mode`` selects the input: ``"iid"`` uniform bits, or
    the diagnostic ``"zeros"`` and ``"alternating"`` words.
    """
    def trial(rng):
        if mode == "iid":
            x = _input(rng, cfg.n)
        elif mode == "zeros":
            x = np.zeros(cfg.n, dtype=np.uint8)
        elif mode == "alternating":
            x = (np.arange(cfg.n) & 1).astype(np.uint8)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        starts = _run_starts(x)
        lengths = np.diff(np.concatenate((starts, [x.size]))).astype(float)
        return float((lengths * np.log2(lengths)).sum() / cfg.n)

    return Estimate.from_samples(_run(cfg, trial))

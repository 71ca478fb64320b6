"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports the package: words are tuples, realizations are
enumerated with itertools, and entropies come from plain dictionaries.
"""

import itertools
import math
from collections import defaultdict


def h2(p):
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy(masses):
    return -sum(p * math.log2(p) for p in masses if p > 0)


def outcomes(n):
    """Per-position outcomes: None (no insertion) or the inserted bit."""
    return itertools.product((None, 0, 1), repeat=n)


def outcome_prob(t, alpha):
    p = 1.0
    for o in t:
        p *= (1 - alpha) if o is None else alpha / 2
    return p


def transmit(x, t):
    y = []
    for xi, o in zip(x, t):
        y.append(xi)
        if o is not None:
            y.append(o)
    return tuple(y)


def runs_of(x):
    out = []
    for b in x:
        if out and out[-1][0] == b:
            out[-1][1] += 1
        else:
            out.append([b, 1])
    return [tuple(r) for r in out]


def segments(x, t):
    """Per-run output length, insertions attributed to the preceding bit's run."""
    k = []
    prev = None
    for xi, o in zip(x, t):
        if xi != prev:
            k.append(0)
            prev = xi
        k[-1] += 1 + (o is not None)
    return tuple(k)


def brute_law(x, y, alpha):
    x, y = tuple(x), tuple(y)
    return sum(outcome_prob(t, alpha) for t in outcomes(len(x)) if transmit(x, t) == y)


def brute_distribution(x, alpha):
    d = defaultdict(float)
    for t in outcomes(len(x)):
        d[transmit(tuple(x), t)] += outcome_prob(t, alpha)
    return dict(d)


def brute_mi(px, alpha):
    """Exact entropies for a law given as {word tuple: prob}."""
    n = len(next(iter(px)))
    hy, hxy, hxyk = defaultdict(float), defaultdict(float), defaultdict(float)
    pab = [outcome_prob(t, alpha) for t in outcomes(n)]
    for x, p in px.items():
        if p == 0:
            continue
        for t in outcomes(n):
            w = p * outcome_prob(t, alpha)
            if w == 0:
                continue
            y = transmit(x, t)
            hy[y] += w
            hxy[(x, y)] += w
            hxyk[(x, y, segments(x, t))] += w
    h_x = entropy(px.values())
    h_ab = entropy(pab)
    h_xy = entropy(hxy.values())
    h_xyk = entropy(hxyk.values())
    h_y = entropy(hy.values())
    return {
        "h_y": h_y,
        "h_y_given_x": h_xy - h_x,
        "h_ab": h_ab,
        "h_ab_given_xyk": h_x + h_ab - h_xyk,
        "h_k_given_xy": h_xyk - h_xy,
        "mutual_information": h_y + h_x - h_xy,
    }


def uniform_law(n):
    return {x: 2.0 ** -n for x in itertools.product((0, 1), repeat=n)}


def sequential_truncate(x, l_star):
    out = []
    count = 0
    for b in x:
        if out and b == out[-1]:
            if count == l_star:
                b ^= 1
                count = 1
            else:
                count += 1
        else:
            count = 1
        out.append(b)
    return out

"""Exact euclidean TSP with a length window.

Tours are undirected cycles written canonically: they start at point 0 and
the second entry is smaller than the last.  The length of a tour is the
left-to-right floating-point sum of its edges in that canonical order, so
equal tours always report bit-identical lengths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import _backend
from .errors import InvalidInstance, TooLarge

MAX_EXACT = 14


@dataclass(frozen=True)
class EtspSolution:
    sequence: tuple
    length: float


@dataclass(frozen=True)
class EtspQuery:
    points: tuple
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty window: lower={self.lower!r} upper={self.upper!r}")
        if len(self.points) < 3:
            raise InvalidInstance("need at least 3 points")


def distance_matrix(points) -> np.ndarray:
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])


def canonical(sequence) -> tuple:
    """Rotate to start at 0 and orient so the second entry is the smaller neighbour."""
    seq = list(sequence)
    k = seq.index(0)
    seq = seq[k:] + seq[:k]
    if len(seq) > 2 and seq[1] > seq[-1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


def cycle_length(D, sequence) -> float:
    total = 0.0
    n = len(sequence)
    for k in range(n):
        total += D[sequence[k], sequence[(k + 1) % n]]
    return float(total)


def _nearest_neighbour_two_opt(D):
    n = len(D)
    tour = [0]
    left = set(range(1, n))
    while left:
        cur = tour[-1]
        nxt = min(left, key=lambda j: (D[cur, j], j))
        tour.append(nxt)
        left.remove(nxt)
    improved = True
    while improved:
        improved = False
        for i in range(1, n - 1):
            for j in range(i + 1, n):
                a, b = tour[i - 1], tour[i]
                c, d = tour[j], tour[(j + 1) % n]
                if D[a, c] + D[b, d] < D[a, b] + D[c, d] - 1e-12:
                    tour[i:j + 1] = reversed(tour[i:j + 1])
                    improved = True
    return canonical(tour)


def _search(points, lower, upper) -> Optional[EtspSolution]:
    n = len(points)
    if n < 3:
        raise InvalidInstance("need at least 3 points")
    if n > MAX_EXACT:
        raise TooLarge(f"exact ETSP search supports at most {MAX_EXACT} points, got {n}")
    D = distance_matrix(points)
    inc = _nearest_neighbour_two_opt(D)
    inc_len = cycle_length(D, inc)
    if lower < inc_len <= upper:
        found = _backend.kernels.etsp_search(D, lower, upper, inc_len, list(inc))
    else:
        found = _backend.kernels.etsp_search(D, lower, upper, math.inf, None)
    if found is None:
        return None
    length, seq = found
    return EtspSolution(tuple(int(v) for v in seq), float(length))


def solve_etsp(points) -> EtspSolution:
    """Globally shortest tour through at most :data:`MAX_EXACT` points."""
    return _search(points, -math.inf, math.inf)


def solve_etsp_window(query: EtspQuery) -> Optional[EtspSolution]:
    """Shortest tour with ``query.lower < length <= query.upper``, if any."""
    return _search(query.points, query.lower, query.upper)


def iter_tours(points, epsilon: Optional[float] = None) -> Iterator[EtspSolution]:
    """Distinct tours in non-decreasing length, each ``epsilon`` past the last."""
    best = solve_etsp(points)
    if epsilon is None:
        epsilon = 1e-9 * best.length
    yield best
    lower = best.length + epsilon
    while True:
        sol = _search(points, lower, math.inf)
        if sol is None:
            return
        yield sol
        lower = sol.length + epsilon

"""Sequence search for the Dubins TSP.

:func:`solve_dtsp` walks euclidean tours in increasing length, descends the
headings of each one, and stops once no unexplored euclidean tour is shorter
than the best Dubins tour found so far.
"""
from __future__ import annotations

import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NonConvergence, TooManyFlips
from .etsp import EtspQuery, EtspSolution, solve_etsp_window
from .geometry import DirectedPoint, cs_path
from .tour import (
    DescentResult,
    DescentSettings,
    Instance,
    TourConfig,
    check_sequence,
    evaluate,
    gradient_descent,
    seed_angles,
)

log = logging.getLogger(__name__)

DEFAULT_FLIP_CAP = 12


@dataclass(frozen=True)
class SharpTurn:
    triplet: tuple
    angle: float
    witness_distance: float
    witness: int


def _segment_distance(p, a, b):
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    q = a + t * ab
    return float(np.hypot(*(p - q)))


def find_sharp_turns(instance: Instance, sequence) -> list[SharpTurn]:
    """Consecutive triplets turning by at least a right angle near a witness.

    A triplet ``(i, j, k)`` qualifies when the angle at ``j`` is at most
    ``pi/2`` and some point of the three lies within ``4 * rho`` of the
    segment joining the other two.  The closest such witness is reported.
    """
    seq = check_sequence(sequence, instance.n)
    n = len(seq)
    P = instance.array
    limit = 4.0 * instance.rho
    out = []
    for m in range(n):
        i, j, k = seq[m - 1], seq[m], seq[(m + 1) % n]
        a, b = P[i] - P[j], P[k] - P[j]
        if float(a @ b) < 0.0:
            continue
        cosphi = float(a @ b) / (np.hypot(*a) * np.hypot(*b))
        phi = math.acos(min(1.0, max(-1.0, cosphi)))
        dists = (
            (_segment_distance(P[i], P[j], P[k]), i),
            (_segment_distance(P[j], P[i], P[k]), j),
            (_segment_distance(P[k], P[i], P[j]), k),
        )
        d, w = min(dists)
        if d <= limit:
            out.append(SharpTurn((i, j, k), phi, d, w))
    return out


def descend_with_flips(
    instance: Instance,
    sequence,
    settings: Optional[DescentSettings] = None,
    flip_cap: int = DEFAULT_FLIP_CAP,
) -> DescentResult:
    """Best descent over every combination of reversed headings at sharp turns.

    The middle point of each sharp turn may start with its seed heading
    turned by ``pi``.  All ``2**k`` combinations are descended and the
    shortest result is returned, with the flipped points in ``.flips``.
    """
    seq = check_sequence(sequence, instance.n)
    turns = find_sharp_turns(instance, seq)
    middles = sorted({t.triplet[1] for t in turns})
    if len(middles) > flip_cap:
        raise TooManyFlips(f"{len(middles)} sharp turns exceed the cap of {flip_cap}")
    seed = seed_angles(instance, seq)
    best = None
    for r in range(len(middles) + 1):
        for subset in itertools.combinations(middles, r):
            start = seed.copy()
            start[list(subset)] += math.pi
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NonConvergence)
                res = gradient_descent(instance, seq, settings, start_angles=start)
            if best is None or res.length < best.length:
                best = DescentResult(res.config, res.evaluation, res.trace, res.converged, subset)
    return best


def alternating_tour(instance: Instance, etsp: EtspSolution):
    """Feasible tour keeping every second euclidean edge straight.

    Returns ``(config, length)``.  For odd ``n`` the heading at the first
    point comes from the shortest CS curve arriving from the last point.
    """
    instance.require_tour()
    seq = check_sequence(etsp.sequence, instance.n)
    n = len(seq)
    P = instance.array
    angles = np.zeros(n)

    def direction(a, b):
        return math.atan2(P[b, 1] - P[a, 1], P[b, 0] - P[a, 0])

    start = 0 if n % 2 == 0 else 1
    for m in range(start, n - 1, 2):
        a, b = seq[m], seq[m + 1]
        angles[a] = angles[b] = direction(a, b)
    if n % 2 == 1:
        last, first = seq[-1], seq[0]
        cs = cs_path(DirectedPoint(P[last], angles[last]), P[first], instance.rho,
                     strict=instance.strict)
        angles[first] = cs.straight_heading
    config = TourConfig(seq, angles)
    return config, evaluate(instance, config).length


@dataclass(frozen=True)
class SequenceRecord:
    etsp: EtspSolution
    length: float
    flips: tuple
    converged: bool
    upper_after: float


@dataclass(frozen=True)
class DtspSettings:
    descent: DescentSettings = field(default_factory=DescentSettings)
    flip_cap: int = DEFAULT_FLIP_CAP
    # Distinctness gap between successive euclidean tours, relative to the optimum.
    distinct_rel: float = 1e-9
    max_sequences: Optional[int] = None


@dataclass(frozen=True)
class DtspResult:
    best: DescentResult
    per_sequence: tuple
    etsp_optimum: float

    @property
    def best_config(self) -> TourConfig:
        return self.best.config

    @property
    def best_eval(self):
        return self.best.evaluation

    @property
    def sequences_explored(self) -> int:
        return len(self.per_sequence)

    @property
    def certificate(self) -> Optional[float]:
        return self.best.evaluation.gap_bound

    def search_radius(self, instance: Instance) -> float:
        """Crude a-priori limit on euclidean tours worth exploring."""
        return (1.0 + math.pi / instance.scale) * self.etsp_optimum


def solve_dtsp(instance: Instance, settings: Optional[DtspSettings] = None) -> DtspResult:
    """Shortest Dubins tour over all visiting sequences.

    Euclidean tours are requested in the window ``(L_E + eps, L_D]`` where
    ``L_E`` is the last euclidean length explored and ``L_D`` the best Dubins
    length so far; the loop ends when the window is empty.
    """
    settings = settings or DtspSettings()
    instance.require_tour()
    cache: dict = {}
    records = []
    best: Optional[DescentResult] = None
    lower, upper = -math.inf, math.inf
    eps = None
    etsp_opt = None
    while settings.max_sequences is None or len(records) < settings.max_sequences:
        if lower >= upper:
            break
        sol = solve_etsp_window(EtspQuery(instance.points, lower, upper))
        if sol is None:
            break
        if eps is None:
            etsp_opt = sol.length
            eps = settings.distinct_rel * sol.length
        res = cache.get(sol.sequence)
        if res is None:
            res = descend_with_flips(instance, sol.sequence, settings.descent, settings.flip_cap)
            cache[sol.sequence] = res
        if not res.converged:
            log.warning("descent on sequence %s did not converge", sol.sequence)
        if best is None or res.length < best.length:
            best = res
        upper = min(upper, res.length)
        records.append(SequenceRecord(sol, res.length, res.flips, res.converged, upper))
        log.debug("sequence %s: etsp %.6f dubins %.6f", sol.sequence, sol.length, res.length)
        lower = sol.length + eps
    return DtspResult(best, tuple(records), etsp_opt)

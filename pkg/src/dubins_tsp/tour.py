"""Tour length over heading angles, its torque gradient, and descent.

Angles and torques are indexed by point; edges are indexed by position in
the visiting sequence (edge ``k`` runs from ``sequence[k]`` to
``sequence[k + 1]``, wrapping around).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import _backend
from .errors import (
    DegenerateSeed,
    InvalidInstance,
    InvalidSequence,
    NonConvergence,
    NotUnit,
    SeparationTooSmall,
)
from .geometry import LONG_PATH_FACTOR, DirectedPoint, DubinsPath, csc_path, normalize_angle


@dataclass(frozen=True)
class Instance:
    """Planar points with a minimum turning radius.

    With ``strict`` (the default) every pair of points must be at least
    ``4 * rho`` apart.  Non-strict instances are only meant for geometric
    queries such as sharp-turn detection.
    """

    points: tuple
    rho: float = 1.0
    box: Optional[float] = None
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rho", float(self.rho))
        if not (self.rho > 0.0 and math.isfinite(self.rho)):
            raise InvalidInstance(f"rho must be positive and finite, got {self.rho!r}")
        if not pts:
            raise InvalidInstance("instance has no points")
        if not all(math.isfinite(c) for p in pts for c in p):
            raise InvalidInstance("point coordinates must be finite")
        if self.strict and len(pts) > 1:
            i, j, d = self._closest_pair()
            if d < LONG_PATH_FACTOR * self.rho:
                raise SeparationTooSmall(
                    f"points {i} and {j} are {d:.6g} apart; the long-path case "
                    f"needs at least {LONG_PATH_FACTOR * self.rho:.6g}"
                )

    def _closest_pair(self):
        best = (-1, -1, math.inf)
        pts = self.points
        for i in range(len(pts)):
            xi, yi = pts[i]
            for j in range(i + 1, len(pts)):
                d = math.hypot(pts[j][0] - xi, pts[j][1] - yi)
                if d < best[2]:
                    best = (i, j, d)
        return best

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 2)

    @cached_property
    def min_distance(self) -> float:
        return self._closest_pair()[2]

    @property
    def scale(self) -> float:
        """Minimum pairwise distance in units of the turning radius."""
        return self.min_distance / self.rho

    def require_tour(self):
        if self.n < 3:
            raise InvalidInstance(f"a tour needs at least 3 points, got {self.n}")


def check_sequence(sequence, n) -> tuple:
    seq = tuple(int(i) for i in sequence)
    if sorted(seq) != list(range(n)):
        raise InvalidSequence(f"sequence {list(seq)} is not a permutation of 0..{n - 1}")
    return seq


@dataclass(frozen=True)
class TourConfig:
    sequence: tuple
    angles: tuple

    def __post_init__(self):
        seq = tuple(int(i) for i in self.sequence)
        ang = tuple(normalize_angle(float(a)) for a in self.angles)
        if len(ang) != len(seq):
            raise InvalidSequence("need exactly one angle per point")
        check_sequence(seq, len(seq))
        object.__setattr__(self, "sequence", seq)
        object.__setattr__(self, "angles", ang)

    def ordered(self, instance: Instance):
        """Coordinates and headings rearranged into visiting order."""
        idx = np.asarray(self.sequence)
        pts = instance.array[idx]
        return pts[:, 0].copy(), pts[:, 1].copy(), np.asarray(self.angles)[idx]


@dataclass(frozen=True)
class TourEvaluation:
    length: float
    edges: tuple
    torques: tuple
    max_arc: float
    gap_bound: Optional[float]

    @property
    def subtypes(self) -> tuple:
        return tuple(e.subtype for e in self.edges)


def _validate(instance: Instance, config: TourConfig):
    instance.require_tour()
    if len(config.sequence) != instance.n:
        raise InvalidSequence(
            f"configuration has {len(config.sequence)} points, instance has {instance.n}"
        )


def certificate(n: int, grad_norm: float) -> float:
    """Upper bound on the distance to the local optimum: ``2 sqrt(n) pi |grad|``."""
    return 2.0 * math.sqrt(n) * math.pi * grad_norm


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def evaluate(instance: Instance, config: TourConfig) -> TourEvaluation:
    """Build every edge of the tour and the torque acting at each node."""
    _validate(instance, config)
    n = instance.n
    seq = config.sequence
    pts = instance.points
    dps = [DirectedPoint(pts[i], config.angles[i]) for i in range(n)]
    edges = []
    torques = [0.0] * n
    for k in range(n):
        a, b = seq[k], seq[(k + 1) % n]
        path = csc_path(dps[a], dps[b], instance.rho, strict=instance.strict)
        edges.append(path)
        dx, dy = path.t2[0] - path.t1[0], path.t2[1] - path.t1[1]
        ell = math.hypot(dx, dy)
        if ell > 1e-9 * instance.rho:
            u = (dx / ell, dy / ell)
        else:
            u = (math.cos(path.straight_heading), math.sin(path.straight_heading))
        r_out = (path.t1[0] - pts[a][0], path.t1[1] - pts[a][1])
        r_in = (path.t2[0] - pts[b][0], path.t2[1] - pts[b][1])
        torques[a] += _cross(r_out, u)
        torques[b] -= _cross(r_in, u)
    length = sum(e.total_length for e in edges)
    max_arc = max(e.max_arc for e in edges)
    gap = None
    if max_arc < math.pi:
        gap = certificate(n, math.sqrt(sum(t * t for t in torques)))
    return TourEvaluation(length, tuple(edges), tuple(torques), max_arc, gap)


def _unpermute(values, seq):
    out = np.empty(len(seq))
    out[np.asarray(seq)] = values
    return out


def gradient(instance: Instance, config: TourConfig) -> np.ndarray:
    """Partial derivatives of tour length with respect to each heading."""
    _validate(instance, config)
    xs, ys, th = config.ordered(instance)
    _, tau, _ = _backend.kernels.tour_eval(xs, ys, th, instance.rho)
    return -_unpermute(tau, config.sequence)


def tour_length(instance: Instance, config: TourConfig) -> float:
    _validate(instance, config)
    xs, ys, th = config.ordered(instance)
    return _backend.kernels.tour_eval(xs, ys, th, instance.rho)[0]


def gap_bound(instance: Instance, config: TourConfig) -> Optional[float]:
    """Optimality-gap certificate, or ``None`` when some arc reaches pi."""
    _validate(instance, config)
    xs, ys, th = config.ordered(instance)
    _, tau, max_arc = _backend.kernels.tour_eval(xs, ys, th, instance.rho)
    if max_arc >= math.pi:
        return None
    return certificate(instance.n, float(np.linalg.norm(tau)))


def seed_angles(instance: Instance, sequence: Sequence[int]) -> np.ndarray:
    """Headings from the zero-radius limit: bisect incoming and outgoing edges.

    A node whose neighbours lie in exactly opposite directions has no
    bisector; it gets the direction perpendicular to its outgoing edge and a
    :class:`DegenerateSeed` warning.
    """
    instance.require_tour()
    seq = check_sequence(sequence, instance.n)
    n = instance.n
    P = instance.array[np.asarray(seq)]
    e = np.roll(P, -1, axis=0) - P
    e /= np.linalg.norm(e, axis=1)[:, None]
    v = np.roll(e, 1, axis=0) + e
    norms = np.linalg.norm(v, axis=1)
    bad = norms < 1e-12
    if bad.any():
        warnings.warn(
            f"seed heading undefined at points {[seq[k] for k in np.flatnonzero(bad)]}; "
            "using the transverse direction",
            DegenerateSeed,
            stacklevel=2,
        )
        v[bad] = np.column_stack([-e[bad, 1], e[bad, 0]])
    theta = np.arctan2(v[:, 1], v[:, 0])
    out = np.empty(n)
    out[np.asarray(seq)] = theta
    return out


@dataclass(frozen=True)
class DescentSettings:
    """Step and stopping rules for :func:`gradient_descent`.

    ``alpha0`` defaults to ``0.1 / rho``.  With ``epsilon`` unset the run
    stops once the certificate is at most ``rel_tol`` times the tour length;
    a set ``epsilon`` is an absolute bound on the gradient norm instead.
    """

    alpha0: Optional[float] = None
    epsilon: Optional[float] = None
    rel_tol: float = 1e-3
    max_iters: int = 10_000
    fixed_step: bool = False

    def step_for(self, rho: float) -> float:
        return self.alpha0 if self.alpha0 is not None else 0.1 / rho

    def tolerances(self):
        if self.epsilon is not None:
            return float(self.epsilon), 0.0
        return 0.0, float(self.rel_tol)


@dataclass(frozen=True)
class DescentTrace:
    lengths: np.ndarray
    grad_norms: np.ndarray
    max_arcs: np.ndarray
    n: int

    def __len__(self):
        return len(self.lengths)

    @property
    def gap_bounds(self) -> np.ndarray:
        """Certificate per iterate; NaN where some arc reaches pi."""
        g = 2.0 * math.sqrt(self.n) * math.pi * self.grad_norms
        return np.where(self.max_arcs < math.pi, g, np.nan)

    def rows(self):
        for L, g, b in zip(self.lengths, self.grad_norms, self.gap_bounds):
            yield float(L), float(g), (None if math.isnan(b) else float(b))


@dataclass(frozen=True)
class DescentResult:
    config: TourConfig
    evaluation: TourEvaluation
    trace: DescentTrace
    converged: bool
    flips: tuple = ()

    @property
    def iterations(self) -> int:
        return len(self.trace) - 1

    @property
    def length(self) -> float:
        return self.evaluation.length

    @property
    def seed_length(self) -> float:
        return float(self.trace.lengths[0])

    def __iter__(self):
        return iter((self.config, self.evaluation, self.trace))


def gradient_descent(
    instance: Instance,
    sequence: Sequence[int],
    settings: Optional[DescentSettings] = None,
    start_angles=None,
) -> DescentResult:
    """Follow the torques from the seed (or ``start_angles``) to a local minimum.

    Each step moves ``theta += alpha * tau``; by default ``alpha`` is halved
    from ``alpha0`` until the length decreases.  A run that exhausts
    ``max_iters`` is returned with ``converged=False`` and a
    :class:`NonConvergence` warning.
    """
    settings = settings or DescentSettings()
    instance.require_tour()
    seq = check_sequence(sequence, instance.n)
    if start_angles is None:
        start_angles = seed_angles(instance, seq)
    idx = np.asarray(seq)
    th0 = np.asarray(start_angles, dtype=float)[idx]
    P = instance.array[idx]
    eps, rel = settings.tolerances()
    theta, lengths, gnorms, arcs, converged = _backend.kernels.descend(
        P[:, 0].copy(), P[:, 1].copy(), th0, instance.rho,
        settings.step_for(instance.rho), eps, rel, int(settings.max_iters),
        bool(settings.fixed_step),
    )
    if not converged:
        warnings.warn(
            f"descent stopped after {len(lengths) - 1} iterations with gradient "
            f"norm {gnorms[-1]:.3g}",
            NonConvergence,
            stacklevel=2,
        )
    config = TourConfig(seq, _unpermute(theta, seq))
    trace = DescentTrace(lengths, gnorms, arcs, instance.n)
    return DescentResult(config, evaluate(instance, config), trace, bool(converged))


def position_gradient(instance: Instance, config: TourConfig) -> np.ndarray:
    """Derivative of tour length with respect to each point's position.

    Row ``i`` is the incoming segment direction minus the outgoing one.
    """
    ev = evaluate(instance, config)
    n = instance.n
    out = np.zeros((n, 2))
    for k, edge in enumerate(ev.edges):
        u = np.array([math.cos(edge.straight_heading), math.sin(edge.straight_heading)])
        out[config.sequence[k]] -= u
        out[config.sequence[(k + 1) % n]] += u
    return out


def project_velocity(grad_i, constraint_direction, tol: float = 1e-9) -> float:
    """Component of a point's position gradient along a unit direction."""
    d = np.asarray(constraint_direction, dtype=float)
    norm = float(np.hypot(d[0], d[1]))
    if abs(norm - 1.0) > tol:
        raise NotUnit(f"constraint direction has norm {norm!r}")
    g = np.asarray(grad_i, dtype=float)
    return float(g[0] * d[0] + g[1] * d[1])

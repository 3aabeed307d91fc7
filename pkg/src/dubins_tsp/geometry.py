"""Shortest CSC and CS curves between directed points in the long-path regime.

All constructions work with the turning radius scaled to one and restore
user units on output.  Arc angles are reported in ``[0, 2*pi)``; an arc of
``pi`` or more is legal but flagged through :attr:`DubinsPath.arc_limit`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NumericalDegeneracy, SeparationTooSmall

TWO_PI = 2.0 * math.pi
LONG_PATH_FACTOR = 4.0

# Order doubles as the tie-break order.
CSC_SUBTYPES = ("LSL", "LSR", "RSL", "RSR")
CS_SUBTYPES = ("LS", "RS")

# Arcs this close to a full turn are rounding noise around zero.
_FULL_TURN_SLACK = 1e-12


def normalize_angle(a: float) -> float:
    """Wrap an angle into ``[-pi, pi)``."""
    r = (a + math.pi) % TWO_PI - math.pi
    if r >= math.pi:
        r -= TWO_PI
    return r


def mod_two_pi(a: float) -> float:
    r = a % TWO_PI
    if r >= TWO_PI - _FULL_TURN_SLACK:
        return 0.0
    return r


def _check_separation(p, q, rho, strict):
    if rho <= 0.0 or not math.isfinite(rho):
        raise ValueError(f"turning radius must be positive, got {rho!r}")
    d = math.hypot(q[0] - p[0], q[1] - p[1])
    if strict and d < LONG_PATH_FACTOR * rho:
        raise SeparationTooSmall(
            f"endpoints are {d:.6g} apart, need at least {LONG_PATH_FACTOR * rho:.6g}"
        )
    return d


@dataclass(frozen=True)
class DirectedPoint:
    position: tuple[float, float]
    heading: float

    def __post_init__(self):
        if not math.isfinite(self.heading):
            raise ValueError(f"heading must be finite, got {self.heading!r}")
        x, y = self.position
        object.__setattr__(self, "position", (float(x), float(y)))
        object.__setattr__(self, "heading", normalize_angle(float(self.heading)))

    @property
    def x(self) -> float:
        return self.position[0]

    @property
    def y(self) -> float:
        return self.position[1]


@dataclass(frozen=True)
class DubinsPath:
    subtype: str
    arc1_angle: float
    straight_length: float
    arc2_angle: float
    t1: tuple[float, float]
    t2: tuple[float, float]
    c1: tuple[float, float]
    c2: tuple[float, float]
    total_length: float
    start: DirectedPoint = field(repr=False)
    end: DirectedPoint = field(repr=False)
    rho: float = field(repr=False)
    # Direction of the straight segment; defined even when it has zero length.
    straight_heading: float = field(repr=False, default=0.0)

    @property
    def arc_limit(self) -> bool:
        """True when either arc reaches half a turn."""
        return self.arc1_angle >= math.pi or self.arc2_angle >= math.pi

    @property
    def max_arc(self) -> float:
        return max(self.arc1_angle, self.arc2_angle)

    @property
    def segments(self):
        """``(kind, length)`` triples in travel order, kind in ``L``/``R``/``S``."""
        return (
            (self.subtype[0], self.rho * self.arc1_angle),
            ("S", self.straight_length),
            (self.subtype[2], self.rho * self.arc2_angle),
        )


@dataclass(frozen=True)
class CSPath:
    subtype: str
    arc_angle: float
    straight_length: float
    t: tuple[float, float]
    c: tuple[float, float]
    total_length: float
    start: DirectedPoint = field(repr=False)
    end: tuple[float, float] = field(repr=False)
    rho: float = field(repr=False)
    straight_heading: float = field(repr=False, default=0.0)

    @property
    def arc_limit(self) -> bool:
        return self.arc_angle >= math.pi

    @property
    def segments(self):
        return ((self.subtype[0], self.rho * self.arc_angle), ("S", self.straight_length))


def _unit_csc(dx, dy, th1, th2):
    """Candidate ``(subtype, arc1, straight, arc2, psi)`` for unit radius.

    ``(dx, dy)`` is the end position relative to the start, already divided
    by the radius.  Subtypes whose inner tangent does not exist are skipped.
    """
    s1, co1 = math.sin(th1), math.cos(th1)
    s2, co2 = math.sin(th2), math.cos(th2)
    out = []
    # Left circle centre: p + (-sin, cos); right: p + (sin, -cos).
    # LSL
    ex, ey = dx - s2 + s1, dy + co2 - co1
    psi = math.atan2(ey, ex)
    out.append(("LSL", mod_two_pi(psi - th1), math.hypot(ex, ey), mod_two_pi(th2 - psi), psi))
    # LSR
    ex, ey = dx + s2 + s1, dy - co2 - co1
    d2 = ex * ex + ey * ey
    if d2 >= 4.0:
        ell = math.sqrt(d2 - 4.0)
        psi = math.atan2(ey, ex) + math.atan2(2.0, ell)
        out.append(("LSR", mod_two_pi(psi - th1), ell, mod_two_pi(psi - th2), psi))
    # RSL
    ex, ey = dx - s2 - s1, dy + co2 + co1
    d2 = ex * ex + ey * ey
    if d2 >= 4.0:
        ell = math.sqrt(d2 - 4.0)
        psi = math.atan2(ey, ex) - math.atan2(2.0, ell)
        out.append(("RSL", mod_two_pi(th1 - psi), ell, mod_two_pi(th2 - psi), psi))
    # RSR
    ex, ey = dx + s2 - s1, dy - co2 + co1
    psi = math.atan2(ey, ex)
    out.append(("RSR", mod_two_pi(th1 - psi), math.hypot(ex, ey), mod_two_pi(psi - th2), psi))
    return out


def _side(turn):
    return 1.0 if turn == "L" else -1.0


def _center(p, theta, turn, rho):
    s = _side(turn)
    return (p[0] - s * rho * math.sin(theta), p[1] + s * rho * math.cos(theta))


def _tangent_point(c, psi, turn, rho):
    # Point on a circle where the travel direction is psi.
    s = _side(turn)
    return (c[0] + s * rho * math.sin(psi), c[1] - s * rho * math.cos(psi))


def _build_csc(start, end, rho, cand):
    subtype, a1, ell, a2, psi = cand
    c1 = _center(start.position, start.heading, subtype[0], rho)
    c2 = _center(end.position, end.heading, subtype[2], rho)
    return DubinsPath(
        subtype=subtype,
        arc1_angle=a1,
        straight_length=rho * ell,
        arc2_angle=a2,
        t1=_tangent_point(c1, psi, subtype[0], rho),
        t2=_tangent_point(c2, psi, subtype[2], rho),
        c1=c1,
        c2=c2,
        total_length=rho * (a1 + ell + a2),
        start=start,
        end=end,
        rho=rho,
        straight_heading=psi,
    )


def csc_candidates(start: DirectedPoint, end: DirectedPoint, rho: float,
                   strict: bool = True) -> dict[str, DubinsPath]:
    """All CSC curves between two directed points, keyed by subtype."""
    _check_separation(start.position, end.position, rho, strict)
    dx = (end.x - start.x) / rho
    dy = (end.y - start.y) / rho
    return {
        c[0]: _build_csc(start, end, rho, c)
        for c in _unit_csc(dx, dy, start.heading, end.heading)
    }


def csc_path(start: DirectedPoint, end: DirectedPoint, rho: float,
             strict: bool = True) -> DubinsPath:
    """Shortest CSC curve from ``start`` to ``end`` with turning radius ``rho``.

    Raises :class:`SeparationTooSmall` when the endpoints are closer than
    ``4 * rho`` and ``strict`` is set.
    """
    _check_separation(start.position, end.position, rho, strict)
    dx = (end.x - start.x) / rho
    dy = (end.y - start.y) / rho
    best = None
    best_len = math.inf
    for cand in _unit_csc(dx, dy, start.heading, end.heading):
        length = cand[1] + cand[2] + cand[3]
        if length < best_len:
            best, best_len = cand, length
    if best is None or not math.isfinite(best_len):
        raise NumericalDegeneracy("no CSC candidate could be constructed")
    return _build_csc(start, end, rho, best)


def _unit_cs(dx, dy, th):
    s, co = math.sin(th), math.cos(th)
    out = []
    # LS: centre at (-sin, cos)
    ex, ey = dx + s, dy - co
    d2 = ex * ex + ey * ey
    if d2 >= 1.0:
        ell = math.sqrt(d2 - 1.0)
        psi = math.atan2(ey, ex) + math.atan2(1.0, ell)
        out.append(("LS", mod_two_pi(psi - th), ell, psi))
    # RS: centre at (sin, -cos)
    ex, ey = dx - s, dy + co
    d2 = ex * ex + ey * ey
    if d2 >= 1.0:
        ell = math.sqrt(d2 - 1.0)
        psi = math.atan2(ey, ex) - math.atan2(1.0, ell)
        out.append(("RS", mod_two_pi(th - psi), ell, psi))
    return out


def cs_candidates(start: DirectedPoint, to_point, rho: float,
                  strict: bool = True) -> dict[str, CSPath]:
    _check_separation(start.position, to_point, rho, strict)
    q = (float(to_point[0]), float(to_point[1]))
    dx, dy = (q[0] - start.x) / rho, (q[1] - start.y) / rho
    out = {}
    for subtype, a, ell, psi in _unit_cs(dx, dy, start.heading):
        c = _center(start.position, start.heading, subtype[0], rho)
        out[subtype] = CSPath(
            subtype=subtype,
            arc_angle=a,
            straight_length=rho * ell,
            t=_tangent_point(c, psi, subtype[0], rho),
            c=c,
            total_length=rho * (a + ell),
            start=start,
            end=q,
            rho=rho,
            straight_heading=psi,
        )
    return out


def cs_path(start: DirectedPoint, to_point, rho: float, strict: bool = True) -> CSPath:
    """Shortest arc-then-segment curve from a directed point to a bare point."""
    cands = cs_candidates(start, to_point, rho, strict)
    if not cands:
        raise NumericalDegeneracy("no CS candidate could be constructed")
    best = None
    for subtype in CS_SUBTYPES:
        p = cands.get(subtype)
        if p is not None and (best is None or p.total_length < best.total_length):
            best = p
    return best


def pose_at(path, s: float) -> tuple[float, float, float]:
    """Position and heading after travelling arc length ``s`` along ``path``."""
    x, y = path.start.position
    th = path.start.heading
    rho = path.rho
    remaining = max(0.0, s)
    for kind, seg_len in path.segments:
        step = min(remaining, seg_len)
        if kind == "S":
            x += step * math.cos(th)
            y += step * math.sin(th)
        else:
            sgn = _side(kind)
            cx, cy = x - sgn * rho * math.sin(th), y + sgn * rho * math.cos(th)
            th += sgn * step / rho
            x, y = cx + sgn * rho * math.sin(th), cy - sgn * rho * math.cos(th)
        remaining -= step
        if remaining <= 0.0:
            break
    return x, y, th


def sample_path(path, k: int) -> list[tuple[float, float]]:
    """``k`` points at equal arc-length spacing, endpoints included."""
    if k < 2:
        raise ValueError("need at least two samples")
    total = path.total_length
    return [pose_at(path, total * i / (k - 1))[:2] for i in range(k)]

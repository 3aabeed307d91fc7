"""Random long-path instances from a hard-core point process.

Points are uniform in a square box subject to a minimum pairwise distance.
The sampler is a systematic-scan Metropolis chain with uniform single-point
displacements; every valid proposal is accepted because the target density
is flat on the feasible set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .errors import Infeasible, MixingFailure
from .geometry import LONG_PATH_FACTOR
from .tour import Instance

# Densest disk packing in the plane.
_HEX_DENSITY = math.pi / math.sqrt(12.0)
_DART_ATTEMPTS = 1_000_000
_DART_RESTART = 10_000
_DART_BLOCK = 256
_SWEEP_BLOCK = 1024


@dataclass(frozen=True)
class GenSpec:
    n: int = 9
    box_side: float = 12.0
    min_separation: float = 4.0
    rho: float = 1.0
    seed: int = 0
    burn_in: int = 10_000
    thinning: int = 100

    @property
    def scale(self) -> float:
        return self.min_separation / self.rho

    def check(self):
        if self.n < 1:
            raise Infeasible("need at least one point")
        if self.rho <= 0 or self.box_side <= 0:
            raise Infeasible("rho and box side must be positive")
        if self.min_separation < LONG_PATH_FACTOR * self.rho:
            raise Infeasible(
                f"separation {self.min_separation} is below {LONG_PATH_FACTOR} * rho"
            )
        if self.burn_in < 0 or self.thinning < 1:
            raise Infeasible("burn_in must be >= 0 and thinning >= 1")
        # Disks of radius sep/2 around the points fit in the box grown by sep.
        need = self.n * math.pi * (0.5 * self.min_separation) ** 2
        room = _HEX_DENSITY * (self.box_side + self.min_separation) ** 2
        if need > room:
            raise Infeasible(
                f"{self.n} points at separation {self.min_separation} cannot fit "
                f"in a box of side {self.box_side}"
            )


def _dart_throw(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    """Sequential uniform placement, restarting after a long run of misses."""
    sep2 = spec.min_separation ** 2 * (1.0 + 1e-12)
    pts = np.empty((spec.n, 2))
    placed = 0
    misses = 0
    attempts = 0
    while attempts < _DART_ATTEMPTS:
        block = min(_DART_BLOCK, _DART_ATTEMPTS - attempts)
        cand = rng.uniform(0.0, spec.box_side, size=(block, 2))
        if placed:
            d = cand[:, None, :] - pts[None, :placed, :]
            ok = np.einsum("ijk,ijk->ij", d, d).min(axis=1) >= sep2
        else:
            ok = np.ones(block, dtype=bool)
        hit = int(np.argmax(ok)) if ok.any() else -1
        if hit < 0 or misses + hit >= _DART_RESTART:
            used = block if hit < 0 else hit + 1
            attempts += used
            misses += used
            if misses >= _DART_RESTART:
                placed = 0
                misses = 0
            continue
        attempts += hit + 1
        pts[placed] = cand[hit]
        placed += 1
        misses = 0
        if placed == spec.n:
            return pts
    raise MixingFailure(
        f"no valid starting configuration after {_DART_ATTEMPTS} attempts"
    )


def _run(pts, spec, rng, sweeps):
    left = sweeps
    while left > 0:
        m = min(left, _SWEEP_BLOCK)
        u = rng.random((m, spec.n, 2))
        _backend.kernels.hardcore_sweeps(pts, spec.box_side, spec.min_separation, u)
        left -= m


def sample_chain(spec: GenSpec, count: int) -> list[Instance]:
    """``count`` states of one chain: after burn-in, then every ``thinning`` sweeps."""
    spec.check()
    rng = np.random.default_rng(spec.seed)
    pts = np.ascontiguousarray(_dart_throw(spec, rng))
    _run(pts, spec, rng, spec.burn_in)
    out = []
    for c in range(count):
        if c:
            _run(pts, spec, rng, spec.thinning)
        out.append(Instance([tuple(p) for p in pts], spec.rho, spec.box_side))
    return out


def generate(spec: GenSpec) -> Instance:
    """One instance, deterministic in ``spec.seed``."""
    return sample_chain(spec, 1)[0]


def scale_sweep(base: GenSpec, scales) -> list[GenSpec]:
    """Copies of ``base`` with separation ``s * rho`` and the box grown in proportion."""
    out = []
    for s in scales:
        if not s > 0:
            raise ValueError(f"scales must be positive, got {s!r}")
        factor = s / base.scale
        out.append(replace(base, min_separation=s * base.rho, box_side=base.box_side * factor))
    return out

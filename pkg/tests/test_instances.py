import itertools
import math

import numpy as np
import pytest
from scipy import stats

from dubins_tsp.errors import Infeasible, MixingFailure
from dubins_tsp.instances import GenSpec, generate, sample_chain, scale_sweep


def _pairwise(points):
    return [math.dist(a, b) for a, b in itertools.combinations(points, 2)]


def test_default_experiment_spec():
    spec = GenSpec(n=9, box_side=12, min_separation=4, rho=1, seed=42)
    inst = generate(spec)
    assert inst.n == 9
    d = _pairwise(inst.points)
    assert len(d) == 36
    assert min(d) >= 4.0
    assert all(0 <= c <= 12 for p in inst.points for c in p)
    assert inst.box == 12


def test_single_point():
    inst = generate(GenSpec(n=1, seed=3))
    assert inst.n == 1
    x, y = inst.points[0]
    assert 0 <= x <= 12 and 0 <= y <= 12


def test_determinism():
    a = generate(GenSpec(seed=7))
    b = generate(GenSpec(seed=7))
    c = generate(GenSpec(seed=8))
    assert a.points == b.points
    assert a.points != c.points


def test_separation_holds_across_seeds():
    for seed in range(200):
        inst = generate(GenSpec(seed=seed, burn_in=200))
        assert min(_pairwise(inst.points)) >= 4.0


def test_scale_sweep():
    base = GenSpec()
    (same,) = scale_sweep(base, [4])
    assert same == base
    (big,) = scale_sweep(base, [40])
    assert big.box_side == pytest.approx(120) and big.min_separation == pytest.approx(40)
    (mid,) = scale_sweep(base, [8])
    assert mid.box_side == pytest.approx(24) and mid.min_separation == pytest.approx(8)
    with pytest.raises(ValueError):
        scale_sweep(base, [0])


def test_scaled_specs_share_layouts():
    base = GenSpec(seed=5, burn_in=300)
    small, large = (generate(s) for s in scale_sweep(base, [4, 40]))
    assert np.allclose(np.array(large.points), 10 * np.array(small.points), rtol=1e-9)


def test_infeasible_specs():
    with pytest.raises(Infeasible):
        GenSpec(min_separation=3.9).check()
    with pytest.raises(Infeasible):
        generate(GenSpec(n=40))
    with pytest.raises(Infeasible):
        generate(GenSpec(n=0))
    with pytest.raises(Infeasible):
        generate(GenSpec(thinning=0))


def test_crowded_but_admissible_spec_fails_to_start():
    spec = GenSpec(n=18, box_side=12, min_separation=4)
    spec.check()
    with pytest.raises(MixingFailure):
        generate(spec)


def _rejection_samples(rng, n, box, sep, count):
    out = []
    while len(out) < count:
        pts = rng.uniform(0, box, (20000, n, 2))
        ok = np.ones(len(pts), dtype=bool)
        for i, j in itertools.combinations(range(n), 2):
            ok &= np.hypot(*(pts[:, i] - pts[:, j]).T) >= sep
        out.extend(pts[ok])
    return np.array(out[:count])


def test_chain_matches_exact_hard_core_distribution():
    spec = GenSpec(n=3, box_side=12, min_separation=4, seed=11, burn_in=1000, thinning=20)
    chain = np.array([inst.array for inst in sample_chain(spec, 10_000)])
    exact = _rejection_samples(np.random.default_rng(0), 3, 12, 4, 10_000)

    # Coordinates of every point on a 4x4 grid.
    def grid_counts(samples):
        cells = np.clip((samples.reshape(-1, 2) / 3.0).astype(int), 0, 3)
        return np.bincount(cells[:, 0] * 4 + cells[:, 1], minlength=16)

    _, p_grid, _, _ = stats.chi2_contingency(np.vstack([grid_counts(chain), grid_counts(exact)]))
    assert p_grid > 0.001

    def gaps(samples):
        return np.hypot(*(samples[:, 0] - samples[:, 1]).T)

    assert stats.ks_2samp(gaps(chain), gaps(exact)).pvalue > 0.001


def test_sparse_chain_is_nearly_uniform():
    # Far apart points barely feel each other: marginals are close to uniform.
    # Thinning covers the random walk's crossing time of the box.
    spec = GenSpec(n=2, box_side=40, min_separation=4, seed=12, burn_in=1000, thinning=1000)
    pts = np.array([inst.array for inst in sample_chain(spec, 10_000)]).reshape(-1, 2)
    cells = np.clip((pts / 10.0).astype(int), 0, 3)
    counts = np.bincount(cells[:, 0] * 4 + cells[:, 1], minlength=16)
    assert stats.chisquare(counts).pvalue > 0.001

import math

import numpy as np
import pytest

from dubins_tsp import _backend, _pure
from dubins_tsp.etsp import distance_matrix
from dubins_tsp.instances import GenSpec, generate

from oracles import csc_lengths

compiled = _backend.BACKENDS.get("compiled")
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")


def _instances(count, n=9):
    return [generate(GenSpec(n=n, seed=s, burn_in=200)) for s in range(count)]


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.use_backend("fortran")


def test_switch_restores():
    before = _backend.active_backend()
    with _backend.use_backend("python"):
        assert _backend.active_backend() == "python"
    assert _backend.active_backend() == before


@pytest.mark.parametrize("name", sorted(_backend.BACKENDS))
def test_best_csc_matches_oracle(name):
    k = _backend.BACKENDS[name]
    rng = np.random.default_rng(0)
    for _ in range(500):
        r = rng.uniform(4, 30)
        phi, th1, th2 = rng.uniform(-math.pi, math.pi, 3)
        length = k.best_csc(r * math.cos(phi), r * math.sin(phi), th1, th2)[0]
        ref = csc_lengths((0, 0), th1, (r * math.cos(phi), r * math.sin(phi)), th2, 1.0)
        assert length == pytest.approx(min(v[0] for v in ref.values()), rel=1e-12)


@needs_compiled
def test_tour_eval_identical():
    rng = np.random.default_rng(1)
    for inst in _instances(50):
        P = inst.array[rng.permutation(9)]
        th = rng.uniform(-math.pi, math.pi, 9)
        a = _pure.tour_eval(P[:, 0].copy(), P[:, 1].copy(), th, 1.0)
        b = compiled.tour_eval(P[:, 0].copy(), P[:, 1].copy(), th, 1.0)
        assert a[0] == pytest.approx(b[0], rel=1e-14)
        assert np.allclose(a[1], b[1], rtol=1e-12, atol=1e-13)
        assert a[2] == pytest.approx(b[2], rel=1e-13, abs=1e-15)


@needs_compiled
def test_descent_identical():
    rng = np.random.default_rng(2)
    for inst in _instances(20):
        P = inst.array[rng.permutation(9)]
        th = rng.uniform(-math.pi, math.pi, 9)
        args = (P[:, 0].copy(), P[:, 1].copy(), th, 1.0, 0.1, 0.0, 1e-3, 500, False)
        a = _pure.descend(*args)
        b = compiled.descend(*args)
        assert len(a[1]) == len(b[1])
        assert np.allclose(a[0], b[0], rtol=1e-9, atol=1e-9)
        assert a[4] == b[4]


@needs_compiled
def test_etsp_search_identical():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(3, 11))
        D = distance_matrix(rng.uniform(0, 10, (n, 2)))
        lower = float(rng.uniform(0, 30))
        a = _pure.etsp_search(D, lower, math.inf, math.inf, None)
        b = compiled.etsp_search(D, lower, math.inf, math.inf, None)
        if a is None:
            assert b is None
        else:
            assert a[0] == b[0] and list(a[1]) == list(b[1])


@needs_compiled
def test_hardcore_sweeps_identical():
    rng = np.random.default_rng(4)
    start = np.ascontiguousarray(generate(GenSpec(seed=9, burn_in=0)).array)
    u = rng.random((200, 9, 2))
    a, b = start.copy(), start.copy()
    na = _pure.hardcore_sweeps(a, 12.0, 4.0, u)
    nb = compiled.hardcore_sweeps(b, 12.0, 4.0, u)
    assert na == nb
    assert np.array_equal(a, b)

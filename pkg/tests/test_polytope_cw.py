import random

import pytest

from corpus import builtin_fan, corpus_2d, corpus_3d
from toric_betti.polytope_cw import build_dual_cw


@pytest.mark.parametrize("name, counts", [("p3", (4, 6, 4, 1)), ("p1p1", (4, 4, 1)),
                                          ("pyramid", (5, 8, 5, 1))])
def test_cell_counts(name, counts):
    assert build_dual_cw(builtin_fan(name)).counts == counts


def test_square_cycle():
    cw = build_dual_cw(builtin_fan("p1p1"))
    cycle = cw.boundary_cycle_of_2cell(0)
    assert len(cycle) == 4 and all(abs(s) == 1 for _, s in cycle)
    # consecutive edges share a vertex, and the signed sum is a cycle
    d1 = cw.boundary(1)
    total = [sum(s * d1[v][e] for e, s in cycle) for v in range(len(d1))]
    assert total == [0] * len(d1)


def test_triangles_and_quadrilateral():
    cw = build_dual_cw(builtin_fan("p3"))
    assert all(len(cw.boundary_cycle_of_2cell(i)) == 3 for i in range(4))
    fan = builtin_fan("pyramid")
    cw = build_dual_cw(fan)
    # the cell dual to the bottom ray (0,0,-1) is the quadrilateral base
    base = cw.index_of_cone(4)
    assert len(cw.boundary_cycle_of_2cell(base)) == 4


@pytest.mark.parametrize("fan", corpus_3d() + corpus_2d(), ids=lambda f: f.name)
def test_contractible(fan):
    cw = build_dual_cw(fan)
    assert cw.complex.dd_is_zero()
    n = fan.ambient_dim
    assert cw.complex.betti() == [1] + [0] * n
    # cells by dimension: (f_n, ..., f_1, 1)
    assert cw.counts == tuple(reversed(fan.f_vector())) + (1,)


@pytest.mark.parametrize("fan", corpus_3d()[:6], ids=lambda f: f.name)
def test_relabel_invariance(fan):
    rng = random.Random(11)
    perms = {d: rng.sample(range(k), k) for d, k in enumerate(build_dual_cw(fan).counts)}
    cw = build_dual_cw(fan, perms)
    assert cw.complex.dd_is_zero() and cw.complex.betti() == [1, 0, 0, 0]

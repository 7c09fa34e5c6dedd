import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import HEXAGON, MIXER, builtin_fan, corpus_3d
from toric_betti.exact_linalg import rank_q
from toric_betti.generators import pyramid_fan, random_star_fan, random_two_cone
from toric_betti.link5 import (build_link5_complex, classify_ray, edge_link_from_generators,
                               edge_link_homology, link5_betti_formula, moore_truncate_link,
                               partial_sixfold_operators, raw_torsion_oracle)


@pytest.mark.parametrize("g, kind, zeros", [((1, 1, 1), "A", ()), ((1, 1, 0), "B", (3,)),
                                            ((0, 0, -1), "B", (1, 2))])
def test_classify(g, kind, zeros):
    c = classify_ray(g)
    assert c.kind == kind and c.zeros == zeros


def test_pyramid_apex():
    fan = builtin_fan("pyramid")
    link = build_link5_complex(fan, fan.resolve_vertex("apex"))
    assert (link.a, link.b) == (0, 4)
    assert link.complex.dims == [4, 8, 9, 7, 3, 1]
    assert link.betti() == [1, 0, 1, 1, 0, 1]
    assert link.complex.euler() == 0


def test_smooth_vertex():
    fan = builtin_fan("p3")
    for c in fan.maximal_cones:
        assert build_link5_complex(fan, c).betti() == [1, 0, 0, 0, 0, 1]


def test_hexagon():
    fan = pyramid_fan(HEXAGON, MIXER)
    link = build_link5_complex(fan, fan.maximal_cones[0])
    assert link.a > 0 and link.b > 0
    assert link.betti() == [1, 0, 3, 3, 0, 1]
    assert moore_truncate_link(link).betti() == [1, 0, 3, 0]


@pytest.mark.parametrize("f, want", [(4, (1, 0, 1, 1, 0, 1)), (3, (1, 0, 0, 0, 0, 1)),
                                     (6, (1, 0, 3, 3, 0, 1))])
def test_formula(f, want):
    assert link5_betti_formula(f) == want


def test_formula_rejects_small():
    with pytest.raises(ValueError):
        link5_betti_formula(2)


def test_lower_operator_ranks():
    # ranks of the lower operators: ker d2 = 2a+b, im d2 = a+b+1, im d1 = f-1
    fan = pyramid_fan(HEXAGON, MIXER)
    link = build_link5_complex(fan, fan.maximal_cones[0])
    cx, a, b, f = link.complex, link.a, link.b, link.f_x1
    assert cx.rank_of(2) == a + b + 1
    assert cx.dims[2] - cx.rank_of(2) == 2 * a + b
    assert cx.rank_of(1) == f - 1
    assert cx.rank_of(3) == 3 + a
    assert cx.rank_of(4) == 3


@pytest.mark.parametrize("fan", corpus_3d(), ids=lambda f: f.name)
def test_links_on_corpus(fan):
    for c in fan.maximal_cones:
        for flip in (False, True):
            link = build_link5_complex(fan, c, flip_b=flip)
            betti = link.betti()
            assert link.complex.dd_is_zero()
            assert tuple(betti) == link5_betti_formula(link.f_x1)
            assert betti == betti[::-1]
            assert link.complex.euler() == 0
            trunc = moore_truncate_link(link)
            assert trunc.betti() == betti[:3] + [0]
            d3 = trunc.complex.boundaries[3]
            assert rank_q(d3) == len(d3[0])
            # singular exactly when the cone has more than three rays
            assert (betti[2] > 0) == (len(fan.cone(c).ray_ids) > 3)


def test_truncation_removed_cells():
    fan = builtin_fan("pyramid")
    trunc = moore_truncate_link(build_link5_complex(fan, fan.resolve_vertex("apex")))
    assert len(trunc.removed) == 1 + 3 + 4


@pytest.mark.parametrize("name, h4, gamma, omega", [("p3", 1, 1, 3), ("pyramid", 2, 0, 5),
                                                    ("p1cubed", 3, 0, 6)])
def test_sixfold(name, h4, gamma, omega):
    ops = partial_sixfold_operators(builtin_fan(name))
    assert (ops.gamma, ops.omega) == (gamma, omega)
    assert ops.top_betti() == {6: 1, 5: 0, 4: h4}
    assert ops.dd_is_zero()


def test_edge_links():
    e = edge_link_from_generators(0, (1, 0, 1), (0, 1, 1))
    assert e.link.torsion_order == 1 and e.integral_sphere
    e = edge_link_from_generators(0, (1, 0, 1), (-1, 0, 1))
    assert {tuple(b) for b in e.basis} == {(1, 0, 0), (0, 0, 1)}
    assert sorted(e.coordinates) == [(-1, 1), (1, 1)]
    assert e.link.torsion_order == 2 and e.link.h1_torsion == (2,)
    assert not e.integral_sphere and e.link.rational_sphere


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_edge_link_oracle(seed):
    g1, g2 = random_two_cone(random.Random(seed))
    e = edge_link_from_generators(0, g1, g2)
    assert e.link.betti == (1, 0, 0, 1)
    assert e.link.torsion_order == raw_torsion_oracle(g1, g2)


def test_edge_links_on_fan():
    fan = builtin_fan("p1cubed")
    assert all(edge_link_homology(fan, s.id).integral_sphere for s in fan.cones_of_dim(2))


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 8), st.integers(0, 10**6))
def test_random_stars(f, seed):
    fan = random_star_fan(random.Random(seed), f)
    link = build_link5_complex(fan, fan.maximal_cones[0])
    assert link.f_x1 == f
    assert tuple(link.betti()) == link5_betti_formula(f)

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import A2_SING, P2, builtin_fan, corpus_2d
from toric_betti.exact_linalg import det
from toric_betti.fan import validate_fan
from toric_betti.surface import (SWAPPED, analyze_link, build_surface_complex,
                                 snf_torsion_order, surface_singularity_census,
                                 vertex_link_surface)


def test_p1p1():
    sc = build_surface_complex(builtin_fan("p1p1"))
    assert sc.complex.dims == [4, 4, 5, 2, 1]
    assert sc.betti() == [1, 0, 2, 0, 1]


def test_p2():
    assert build_surface_complex(validate_fan(2, *P2)).betti() == [1, 0, 1, 0, 1]


@pytest.mark.parametrize("fan", corpus_2d(), ids=lambda f: f.name)
def test_closed_form_and_euler(fan):
    f1 = fan.f_vector()[0]
    for conv in ("standard", SWAPPED):
        sc = build_surface_complex(fan, convention=conv)
        assert sc.complex.dd_is_zero()
        assert sc.betti() == [1, 0, f1 - 2, 0, 1]
        assert sc.complex.euler() == f1


def test_smooth_link():
    link = analyze_link(0, (1, 0), (0, 1))
    assert link.betti == (1, 0, 0, 1)
    assert link.h1_torsion == () and link.integral_sphere


def test_order_two_link():
    link = analyze_link(0, (1, 0), (1, 2))
    # the degree-2 boundary block is [[0,1],[-2,1]]; its Smith form is diag(1, 2)
    assert link.complex.boundaries[2][1:] == [[0, 1], [-2, 1]]
    assert link.h1_torsion == (2,) and link.torsion_order == 2
    assert link.rational_sphere and not link.integral_sphere


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.integers(-9, 9)] * 4).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0))
def test_link_torsion_is_det(t):
    g1, g2 = t[:2], t[2:]
    link = analyze_link(0, g1, g2)
    assert link.betti == (1, 0, 0, 1)
    assert link.torsion_order == abs(det([g1, g2])) == snf_torsion_order(g1, g2)


def test_census():
    verts, smooth = surface_singularity_census(builtin_fan("p1p1"))
    assert smooth and all(v.abs_det == 1 for v in verts)
    fan = validate_fan(2, *A2_SING)
    verts, smooth = surface_singularity_census(fan)
    assert not smooth
    bad = [v for v in verts if not v.smooth]
    assert len(bad) == 1 and bad[0].abs_det == 2
    assert set(fan.cone(bad[0].cone_id).ray_ids) == {0, 2}
    assert surface_singularity_census(validate_fan(2, *P2))[1]


def test_vertex_links_of_p1p1_are_spheres():
    fan = builtin_fan("p1p1")
    assert all(vertex_link_surface(fan, c).integral_sphere for c in fan.maximal_cones)

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import io
import json
import random
from pathlib import Path

import pytest

from corpus import P2, builtin_fan, corpus_2d, corpus_3d
from toric_betti.betti import (H3ZERO, SYMBOLIC, BExpr, check_invariants, hi_table, ih_table,
                               ordinary_h_table, resolve_b, singularity_census)
from toric_betti.cli import run_command
from toric_betti.fan import validate_fan
from toric_betti.fanfile import BUILTINS, FanParseError, builtin, parse_fan_file, serialize_fan_file
from toric_betti.generators import random_face_fan, random_fan_2d, random_star_fan, random_two_cone
from toric_betti.link5 import (build_link5_complex, classify_ray, edge_link_from_generators,
                               edge_link_homology, link5_betti_formula, moore_truncate_link,
                               partial_sixfold_operators, raw_torsion_oracle)
from toric_betti.polytope_cw import build_dual_cw
from toric_betti.report import Report, build_report
from toric_betti.surface import SWAPPED, build_surface_complex, vertex_link_surface

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def verdict(request):
    """Print the criterion verdict once the test body has run."""
    state = {"ok": False}
    yield state
    n = int(request.node.name.split("_")[2])
    print(f"\ncriterion {n}: {'PASS' if state['ok'] else 'FAIL'}")


def random_fans_3d(n, seed):
    rng = random.Random(seed)
    out = []
    for i in range(n):
        out.append(random_face_fan(rng) if i % 2 else random_star_fan(rng, rng.randint(3, 8)))
    return out


def random_fans_2d(n, seed):
    rng = random.Random(seed)
    return [random_fan_2d(rng) for _ in range(n)]


def test_criterion_01_p3_reproduction(verdict, tmp_path):
    report = build_report(builtin_fan("p3"), H3ZERO)
    path = tmp_path / "p3.json"
    path.write_text(serialize_fan_file(builtin("p3")), encoding="utf-8")
    code, out, _ = _cli(["analyze", str(path), "--b", "auto", "--output", "json"])
    d = json.loads(out)
    want = [1, 0, 1, 0, 1, 0, 1]
    assert code == 0
    assert d["tables"]["H"]["entries"] == want and d["tables"]["IH"]["entries"] == want
    assert d["census"]["m"] == 0 and d["b"] == 0
    assert report.tables["H"].numeric() == tuple(want)
    verdict["ok"] = True


def test_criterion_02_surface_reproduction(verdict):
    p1p1 = builtin_fan("p1p1")
    assert build_surface_complex(p1p1).betti() == [1, 0, 2, 0, 1]
    links = [vertex_link_surface(p1p1, c) for c in p1p1.maximal_cones]
    assert len(links) == 4
    assert all(l.integral_sphere and l.torsion_order == 1 and l.betti == (1, 0, 0, 1)
               for l in links)
    p2 = validate_fan(2, *P2)
    assert build_surface_complex(p2).betti() == [1, 0, 1, 0, 1]
    verdict["ok"] = True


def test_criterion_03_link_formula(verdict):
    pyr = builtin_fan("pyramid")
    apex = build_link5_complex(pyr, pyr.resolve_vertex("apex"))
    assert apex.betti() == [1, 0, 1, 1, 0, 1]
    rng = random.Random(3)
    seen_f, seen_kinds = set(), set()
    count = 0
    while count < 30 or len(seen_f) < 6:
        f = 3 + count % 6
        fan = random_star_fan(rng, f)
        c = fan.maximal_cones[0]
        link = build_link5_complex(fan, c)
        seen_kinds |= {classify_ray(fan.generator(r)).kind for r in link.star.rays}
        assert link.f_x1 == f
        assert tuple(link.betti()) == link5_betti_formula(f) == (1, 0, f - 3, f - 3, 0, 1)
        seen_f.add(f)
        count += 1
    assert seen_f == set(range(3, 9)) and seen_kinds == {"A", "B"}
    verdict["ok"] = True


def _all_complexes_3d(fan):
    yield build_dual_cw(fan).complex
    for c in fan.maximal_cones:
        link = build_link5_complex(fan, c)
        yield link.complex
        yield moore_truncate_link(link).complex
    for s in fan.cones_of_dim(2):
        yield edge_link_homology(fan, s.id).link.complex


def test_criterion_04_dd_zero(verdict):
    fans3 = list(corpus_3d()) + random_fans_3d(60, 11)
    fans2 = list(corpus_2d()) + random_fans_2d(40, 12)
    assert len(fans3) + len(fans2) - len(corpus_3d()) - len(corpus_2d()) == 100
    for fan in fans3:
        for cx in _all_complexes_3d(fan):
            assert cx.dd_is_zero()
        assert partial_sixfold_operators(fan).dd_is_zero()
    for fan in fans2:
        assert build_dual_cw(fan).complex.dd_is_zero()
        assert build_surface_complex(fan).complex.dd_is_zero()
        for c in fan.maximal_cones:
            assert vertex_link_surface(fan, c).complex.dd_is_zero()
    verdict["ok"] = True


def test_criterion_05_rank_identities(verdict):
    for fan in corpus_3d():
        ops = partial_sixfold_operators(fan)
        gamma, omega = fan.gamma_omega()
        assert ops.rank_d5 == 3
        assert ops.ker_d4 == gamma + omega
        assert ops.rank_d4 == gamma + 3
        assert ops.top_betti()[4] == fan.f_vector()[0] - 3
    verdict["ok"] = True


def test_criterion_06_moore_truncation(verdict):
    for fan in corpus_3d():
        for c in fan.maximal_cones:
            link = build_link5_complex(fan, c)
            trunc = moore_truncate_link(link)
            h, ht = link.betti(), trunc.betti()
            assert ht[:3] == h[:3] and all(x == 0 for x in ht[3:])
            cx = trunc.complex
            assert cx.dims[3] - cx.rank_of(3) == 0
    verdict["ok"] = True


def test_criterion_07_intersection_space_betti(verdict):
    pyr = builtin_fan("pyramid")
    f1, f2, _ = pyr.f_vector()
    m = singularity_census(pyr).m
    sym, _ = hi_table(f1, f2, m)
    E = BExpr
    assert sym.entries == (E(0), E(0), E(2, -1), E(2, -2), E(2, -1), E(0), E(0))
    b = resolve_b(pyr, H3ZERO)
    assert b == 1
    assert hi_table(f1, f2, m, b)[0].numeric() == (0, 0, 1, 0, 1, 0, 0)
    for fan in corpus_3d():
        f1, f2, _ = fan.f_vector()
        m = singularity_census(fan).m
        # with m = 0 the table is H itself, dual only once the simplicial b = 0 is applied
        t = hi_table(f1, f2, m)[0] if m else hi_table(f1, f2, m, 0)[0]
        assert fan.is_simplicial()[1] == (m == 0)
        assert all(t[r] == t[6 - r] for r in range(7))
    verdict["ok"] = True


def test_criterion_08_euler_identities(verdict):
    pyr = builtin_fan("pyramid")
    rep = {r.name: r for r in check_invariants(pyr, SYMBOLIC)}
    assert rep["hi_ih_euler_difference"].lhs == "-4"
    for fan in corpus_3d():
        f1, f2, f3 = fan.f_vector()
        assert f1 - f2 + f3 == 2
        census = singularity_census(fan)
        m = census.m
        h = ordinary_h_table(f1, f2)
        assert h.euler() == BExpr(f3)
        if m:
            hi = hi_table(f1, f2, m)[0].euler()
            assert hi.is_constant and hi == BExpr(2 * (-2 * f1 + f2 - m + 4))
            assert hi.c0 % 2 == 0
            excess = sum(fan.vertex_star(c).f_x1 - 2 for c in fan.maximal_cones
                         if len(fan.cone(c).ray_ids) > 3)
            assert hi.c0 - ih_table(f1).euler().c0 == -2 * excess
        assert check_invariants(fan, SYMBOLIC, census).ok
    verdict["ok"] = True


def test_criterion_09_edge_links(verdict):
    rng = random.Random(9)
    verdicts = set()
    for _ in range(40):
        g1, g2 = random_two_cone(rng)
        e = edge_link_from_generators(0, g1, g2)
        assert e.link.betti == (1, 0, 0, 1)
        oracle = raw_torsion_oracle(g1, g2)
        assert e.link.torsion_order == oracle
        assert e.integral_sphere == (oracle == 1)
        verdicts.add(e.integral_sphere)
    assert verdicts == {True, False}
    verdict["ok"] = True


def _perm(rng, n):
    p = list(range(n))
    rng.shuffle(p)
    return p


def _relabelled_fan(fan, rng):
    perm = _perm(rng, len(fan.rays))
    inv = {old: new for new, old in enumerate(perm)}
    rays = [fan.generator(p) for p in perm]
    cones = [[inv[r] for r in fan.cone(c).ray_ids] for c in fan.maximal_cones]
    rng.shuffle(cones)
    return validate_fan(fan.ambient_dim, rays, cones)


def _permuted_betti(cx, rng):
    return cx.permuted({k: _perm(rng, d) for k, d in enumerate(cx.dims)}).betti()


def test_criterion_10_convention_robustness(verdict):
    rng = random.Random(10)
    for fan in corpus_3d():
        cw = build_dual_cw(fan)
        relabel = {d: _perm(rng, n) for d, n in enumerate(cw.counts)}
        assert build_dual_cw(fan, relabel).complex.betti() == cw.complex.betti()
        ops, flipped = partial_sixfold_operators(fan), partial_sixfold_operators(fan, flip_b=True)
        assert (ops.rank_d5, ops.rank_d4) == (flipped.rank_d5, flipped.rank_d4)
        links = {}
        for c in fan.maximal_cones:
            link = build_link5_complex(fan, c)
            betti = link.betti()
            links[tuple(sorted(fan.generator(r) for r in fan.cone(c).ray_ids))] = betti
            assert build_link5_complex(fan, c, flip_b=True).betti() == betti
            assert _permuted_betti(link.complex, rng) == betti
            assert moore_truncate_link(build_link5_complex(fan, c, flip_b=True)).betti() == \
                moore_truncate_link(link).betti()
        other = _relabelled_fan(fan, rng)
        for c in other.maximal_cones:
            key = tuple(sorted(other.generator(r) for r in other.cone(c).ray_ids))
            assert build_link5_complex(other, c).betti() == links[key]
        assert build_report(other, SYMBOLIC).tables["HI"] == build_report(fan, SYMBOLIC).tables["HI"]
    for fan in corpus_2d():
        sc = build_surface_complex(fan)
        assert build_surface_complex(fan, convention=SWAPPED).betti() == sc.betti()
        relabel = {d: _perm(rng, n) for d, n in enumerate(sc.cw.counts)}
        assert build_surface_complex(fan, relabel=relabel).betti() == sc.betti()
        assert _permuted_betti(sc.complex, rng) == sc.betti()
        assert build_surface_complex(_relabelled_fan(fan, rng)).betti() == sc.betti()
    verdict["ok"] = True


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_criterion_11_cli_io(verdict, tmp_path):
    for name in sorted(BUILTINS):
        ff = builtin(name)
        text = serialize_fan_file(ff)
        assert parse_fan_file(text) == ff and serialize_fan_file(parse_fan_file(text)) == text
        path = tmp_path / f"{name}.json"
        path.write_text(text, encoding="utf-8")
        code, out, _ = _cli(["analyze", str(path), "--b", "auto", "--output", "json"])
        assert code == 0
        assert out == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")
        assert Report.from_dict(json.loads(out)).to_json() == out
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 3,\n "rays": [[0, 0, 1], [1.5, 0, 0]]', encoding="utf-8")
    with pytest.raises(FanParseError) as e:
        parse_fan_file(bad.read_text(encoding="utf-8"))
    assert e.value.line == 2 and e.value.col
    code, _, err = _cli(["validate", str(bad)])
    assert code == 1 and "line 2" in err
    assert _cli(["validate", str(bad), "--no-such-flag"])[0] == 2
    assert _cli(["frobnicate"])[0] == 2
    verdict["ok"] = True

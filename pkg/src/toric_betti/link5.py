"""Links of torus-fixed points and of 1-dimensional orbits in toric threefolds.

A vertex link fibres over a polygon |M_x| whose edges are the rays of the
maximal cone and whose vertices are its 2-faces.  Over the interior sits a
3-torus, over an edge the 2-torus T^3/S^1_rho, over a vertex a circle.  The
same torus templates, taken over all rays of the fan, give the top two
boundary operators of the whole 6-dimensional variety.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .chain import ChainComplex
from .exact_linalg import (Matrix, coordinates_in_basis, cross, det, rank_q,
                           saturation_basis, smith_normal_form, solve_rational, zeros)
from .fan import Fan, VertexStar
from .surface import SurfaceLink, analyze_link

AXES = "xyz"


class TruncationDegenerate(RuntimeError):
    pass


class RankMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class RayClass:
    ray_id: int
    generator: tuple[int, int, int]
    zeros: tuple[int, ...]  # 1-based coordinates that vanish

    @property
    def kind(self) -> str:
        return "A" if not self.zeros else "B"

    @property
    def two_cells(self) -> int:
        return 2 if self.kind == "A" else 1

    @property
    def one_cells(self) -> int:
        return 3 if self.kind == "A" else 2


def classify_ray(g, ray_id: int = -1) -> RayClass:
    g = tuple(g)
    return RayClass(ray_id, g, tuple(i + 1 for i, x in enumerate(g) if x == 0))


@dataclass
class _Torus:
    """Boundary rows contributed by the 2-torus over one ray."""

    cls: RayClass
    d_top: list[list[int]]  # rows: torus 2-cells, cols: three T^3 2-cells
    d_mid: list[list[int]]  # rows: torus 1-cells, cols: T^3 1-cells then torus 2-cells

    def solve(self, lam) -> list[Fraction]:
        """x with x . (T^3 part of d_mid) == lam."""
        a = [[row[c] for row in self.d_mid] for c in range(3)]
        x = solve_rational(a, list(lam))
        if x is None:
            raise RankMismatch(f"{list(lam)} is not in the row span of ray {self.cls.ray_id}")
        return x


def _torus(cls: RayClass, flip_b: bool = False) -> _Torus:
    g = cls.generator
    if cls.kind == "A":
        n, m, l = g
        c = (m * l, n * l, n * m)
        mid = []
        for k in range(3):
            row = [0, 0, 0, 1, -1]
            row[k] = c[k]
            mid.append(row)
        return _Torus(cls, [list(g), list(g)], mid)
    k = cls.zeros[0] - 1
    p, q = (i for i in range(3) if i != k)
    row1 = [0, 0, 0, 0]
    row1[p], row1[q] = -g[q], g[p]
    row2 = [0, 0, 0, 0]
    row2[k] = 1
    top = [list(g)]
    if flip_b:
        row1 = [-x for x in row1]
        row2 = [-x for x in row2]
        top = [[-x for x in g]]
    return _Torus(cls, top, [row1, row2])


def _assemble_top(tori: list[_Torus]) -> tuple[Matrix, Matrix, list[tuple[int, int]]]:
    """Shared blocks: (T^3 2-cells -> C_top-2, C_top-2 -> C_top-3).

    Returns d_upper (rows 3 + sum two_cells, cols 3), d_lower
    (rows 1 + sum one_cells, cols 3 + sum two_cells) and, per torus, the
    offsets of its 2-cells and 1-cells.
    """
    n2 = sum(t.cls.two_cells for t in tori)
    n1 = sum(t.cls.one_cells for t in tori)
    upper = zeros(3 + n2, 3)
    lower = zeros(1 + n1, 3 + n2)
    offsets = []
    o2, o1 = 3, 1
    for t in tori:
        offsets.append((o2, o1))
        for i, row in enumerate(t.d_top):
            upper[o2 + i] = list(row)
        for i, row in enumerate(t.d_mid):
            tgt = lower[o1 + i]
            tgt[0:3] = row[0:3]
            for j, v in enumerate(row[3:]):
                tgt[o2 + j] = v
        o2 += t.cls.two_cells
        o1 += t.cls.one_cells
    return upper, lower, offsets


@dataclass(frozen=True)
class Link5Complex:
    cone_id: int
    star: VertexStar
    classes: tuple[RayClass, ...]  # in star order
    complex: ChainComplex

    @property
    def a(self) -> int:
        return sum(1 for c in self.classes if c.kind == "A")

    @property
    def b(self) -> int:
        return len(self.classes) - self.a

    @property
    def f_x1(self) -> int:
        return self.star.f_x1

    def betti(self) -> list[int]:
        return self.complex.betti()


def build_link5_complex(fan: Fan, cone3_id: int, *, flip_b: bool = False) -> Link5Complex:
    star = fan.vertex_star(cone3_id)
    rays = list(star.rays)
    f = len(rays)
    classes = [classify_ray(fan.generator(r), r) for r in rays]
    tori = [_torus(c, flip_b) for c in classes]
    d4, d3, offsets = _assemble_top(tori)
    a = sum(1 for c in classes if c.kind == "A")
    b = f - a
    dims = [f, 2 * f, 1 + 3 * a + 2 * b, 3 + 2 * a + b, 3, 1]

    # C_1: edge cells (one per ray, in star order) then vertex circles (one per 2-face)
    d2 = zeros(2 * f, dims[2])
    for i in range(f):
        d2[i][0] = 1
    for i in range(f):
        inc, out = i, (i + 1) % f
        lam = cross(fan.generator(rays[inc]), fan.generator(rays[out]))
        xi, xo = tori[inc].solve(lam), tori[out].solve(lam)
        scale = lcm(*(x.denominator for x in xi + xo))
        row = d2[f + i]
        for ray_idx, x, sign in ((inc, xi, 1), (out, xo, -1)):
            o1 = offsets[ray_idx][1]
            for j, v in enumerate(x):
                row[o1 + j] += sign * int(v * scale)
    # edge of ray i runs from 2-face i-1 to 2-face i
    d1 = zeros(f, 2 * f)
    for i in range(f):
        d1[i][i] += 1
        d1[(i - 1) % f][i] -= 1
    d5 = zeros(3, 1)

    labels = _labels(classes, f, star)
    cx = ChainComplex(dims, {1: d1, 2: d2, 3: d3, 4: d4, 5: d5}, labels)
    return Link5Complex(cone3_id, star, tuple(classes), cx)


def _labels(classes, f, star) -> dict[int, list[str]]:
    c3 = [f"e1_T3[{ax}] x e2_M" for ax in AXES]
    c2 = ["e0_T3 x e2_M"]
    for c in classes:
        r = c.ray_id
        if c.kind == "A":
            c3 += [f"e2_T2(ray {r})+ x e1", f"e2_T2(ray {r})- x e1"]
            c2 += [f"e1_T2(ray {r})[{ax}] x e1" for ax in AXES]
        else:
            c3 += [f"e2_T2(ray {r}) x e1"]
            c2 += [f"e1_T2(ray {r})[{i}] x e1" for i in (1, 2)]
    c1 = [f"e0_T2(ray {c.ray_id}) x e1" for c in classes]
    c1 += [f"e1_S1(face {s}) x e0" for s in star.faces]
    c0 = [f"e0_S1(face {s}) x e0" for s in star.faces]
    c4 = [f"e2_T3[{ax}] x e2_M" for ax in ("yz", "xz", "xy")]
    return {0: c0, 1: c1, 2: c2, 3: c3, 4: c4, 5: ["e3_T3 x e2_M"]}


def link5_betti_formula(f_x1: int) -> tuple[int, ...]:
    if f_x1 < 3:
        raise ValueError(f"a vertex star has at least 3 rays, got {f_x1}")
    return (1, 0, f_x1 - 3, f_x1 - 3, 0, 1)


@dataclass(frozen=True)
class TruncatedLink:
    cone_id: int
    removed: tuple[str, ...]
    complex: ChainComplex
    kept_columns: tuple[int, ...]

    def betti(self) -> list[int]:
        return self.complex.betti()


def moore_truncate_link(link: Link5Complex) -> TruncatedLink:
    """Keep degrees <= 3 and drop every 2-cell that would carry H_3."""
    cx = link.complex
    keep, removed = [0, 1, 2], []
    col = 3
    for c in link.classes:
        if c.kind == "A":
            keep.append(col)
            removed.append(cx.labels[3][col + 1])
        else:
            removed.append(cx.labels[3][col])
        col += c.two_cells
    removed = [cx.labels[5][0]] + cx.labels[4] + removed
    d3 = [[row[j] for j in keep] for row in cx.boundaries[3]]
    dims = cx.dims[:3] + [len(keep)]
    labels = {k: list(cx.labels[k]) for k in range(3)}
    labels[3] = [cx.labels[3][j] for j in keep]
    trunc = ChainComplex(dims, {1: cx.boundaries[1], 2: cx.boundaries[2], 3: d3}, labels)
    rk = rank_q(d3)
    if rk != len(keep):
        raise TruncationDegenerate(f"kernel of truncated d3 has rank {len(keep) - rk}")
    if rk != cx.rank_of(3):
        raise TruncationDegenerate("truncation changed the image of d3")
    return TruncatedLink(link.cone_id, tuple(removed), trunc, tuple(keep))


def vertex_integral_smooth(fan: Fan, cone3_id: int) -> bool:
    """Smooth fixed point: simplicial cone with unimodular generators."""
    rays = fan.cone(cone3_id).ray_ids
    return len(rays) == 3 and abs(det([fan.generator(r) for r in rays])) == 1


@dataclass(frozen=True)
class EdgeLink:
    cone_id: int
    basis: tuple[tuple[int, ...], ...]
    coordinates: tuple[tuple[int, int], tuple[int, int]]
    link: SurfaceLink

    @property
    def integral_sphere(self) -> bool:
        return self.link.integral_sphere

    def to_dict(self) -> dict:
        d = self.link.to_dict()
        d["saturated_basis"] = [list(b) for b in self.basis]
        d["coordinates"] = [list(c) for c in self.coordinates]
        return d


def edge_link_homology(fan: Fan, cone2_id: int) -> EdgeLink:
    c = fan.cone(cone2_id)
    if fan.ambient_dim != 3 or c.dim != 2:
        raise ValueError(f"cone {cone2_id} is not a 2-cone of a 3-dimensional fan")
    g1, g2 = (fan.generator(r) for r in c.ray_ids)
    return edge_link_from_generators(cone2_id, g1, g2)


def edge_link_from_generators(cone_id: int, g1, g2) -> EdgeLink:
    basis = saturation_basis([g1, g2])
    coords = []
    for g in (g1, g2):
        x = coordinates_in_basis(basis, g)
        if x is None or any(v.denominator != 1 for v in x):
            raise RankMismatch(f"{g} has no integral coordinates in {basis}")
        coords.append(tuple(int(v) for v in x))
    return EdgeLink(cone_id, tuple(basis), tuple(coords), analyze_link(cone_id, *coords))


def raw_torsion_oracle(g1, g2) -> int:
    """Index of <g1, g2> in its saturation, read off the raw 2x3 Smith form."""
    prod = 1
    for d in smith_normal_form([list(g1), list(g2)]).diagonal:
        prod *= d
    return prod


@dataclass(frozen=True)
class PartialSixOperators:
    d5: Matrix
    d4: Matrix
    gamma: int
    omega: int
    dims: tuple[int, int, int, int]  # C_3, C_4, C_5, C_6

    @property
    def rank_d5(self) -> int:
        return rank_q(self.d5)

    @property
    def rank_d4(self) -> int:
        return rank_q(self.d4)

    @property
    def ker_d4(self) -> int:
        return self.dims[1] - self.rank_d4

    def top_betti(self) -> dict[int, int]:
        """Ranks of H_4, H_5, H_6 computed from the matrices."""
        r5, r4 = self.rank_d5, self.rank_d4
        return {6: self.dims[3], 5: self.dims[2] - r5, 4: self.dims[1] - r4 - r5}

    def dd_is_zero(self) -> bool:
        return ChainComplex([self.dims[0], self.dims[1], self.dims[2]],
                            {1: self.d4, 2: self.d5}).dd_is_zero()


def partial_sixfold_operators(fan: Fan, *, flip_b: bool = False) -> PartialSixOperators:
    if fan.ambient_dim != 3:
        raise ValueError("the sixfold operators need a 3-dimensional fan")
    classes = [classify_ray(r.generator, r.id) for r in fan.rays]
    tori = [_torus(c, flip_b) for c in classes]
    d5, d4, _ = _assemble_top(tori)
    gamma = sum(1 for c in classes if c.kind == "A")
    omega = len(classes) - gamma
    dims = (1 + 3 * gamma + 2 * omega, 3 + 2 * gamma + omega, 3, 1)
    ops = PartialSixOperators(d5, d4, gamma, omega, dims)
    checks = {
        "rank d5 = 3": (ops.rank_d5, 3),
        "ker d4 = gamma + omega": (ops.ker_d4, gamma + omega),
        "rank d4 = gamma + 3": (ops.rank_d4, gamma + 3),
    }
    for name, (got, want) in checks.items():
        if got != want:
            raise RankMismatch(f"{name}: got {got}, expected {want}")
    if not ops.dd_is_zero():
        raise RankMismatch("d4 composed with d5 is not zero")
    return ops

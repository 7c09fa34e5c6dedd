"""Toric surfaces: the 4-dimensional cellular chain complex and fixed-point links."""

from __future__ import annotations

from dataclasses import dataclass

from .chain import ChainComplex
from .exact_linalg import det, smith_normal_form, zeros
from .fan import Fan
from .polytope_cw import DualCW, build_dual_cw

# For a ray generator v = (v1, v2) the degree-3 boundary row is
# (v1, -v2) by default; SWAPPED reads the generator as (v2, v1) instead.
STANDARD = "standard"
SWAPPED = "swapped"


def _row(v, convention: str) -> list[int]:
    if convention == STANDARD:
        return [v[0], -v[1]]
    if convention == SWAPPED:
        return [v[1], -v[0]]
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class SurfaceComplex:
    fan: Fan
    cw: DualCW
    complex: ChainComplex
    ray_order: tuple[int, ...]  # ray id of each edge / product 2-cell

    def betti(self) -> list[int]:
        return self.complex.betti()


def build_surface_complex(fan: Fan, *, convention: str = STANDARD,
                          relabel: dict[int, list[int]] | None = None) -> SurfaceComplex:
    if fan.ambient_dim != 2:
        raise ValueError("surface complexes need a 2-dimensional fan")
    cw = build_dual_cw(fan, relabel)
    f2, f1 = cw.counts[0], cw.counts[1]
    rays = tuple(c.dual_cone_id for c in cw.cells[1])

    d1 = [list(r) for r in cw.boundary(1)]
    # e0 x e2_P carries the polygon boundary; e1_tau x e1_P cells are cycles
    d2 = zeros(f1, 1 + f1)
    for i, row in enumerate(cw.boundary(2)):
        d2[i][0] = row[0]
    d3 = zeros(1 + f1, 2)
    for i, r in enumerate(rays):
        d3[1 + i] = _row(fan.generator(r), convention)
    d4 = zeros(2, 1)
    cx = ChainComplex([f2, f1, 1 + f1, 2, 1], {1: d1, 2: d2, 3: d3, 4: d4})
    return SurfaceComplex(fan, cw, cx, rays)


def link_complex(g1, g2) -> ChainComplex:
    """Chain complex of the 3-dimensional link over an edge between two rays.

    Generators are read as (n, m) = (v1, v2).
    """
    (n1, m1), (n2, m2) = g1, g2
    d1 = [[1, 0, 0], [-1, 0, 0]]
    d2 = [[0, 0], [-m1, n1], [-m2, n2]]
    d3 = [[0], [0]]
    return ChainComplex([2, 3, 2, 1], {1: d1, 2: d2, 3: d3})


@dataclass(frozen=True)
class SurfaceLink:
    cone_id: int
    generators: tuple[tuple[int, ...], tuple[int, ...]]
    complex: ChainComplex
    betti: tuple[int, ...]
    torsion_order: int
    h1_torsion: tuple[int, ...]

    @property
    def rational_sphere(self) -> bool:
        return self.betti == (1, 0, 0, 1)

    @property
    def integral_sphere(self) -> bool:
        return self.rational_sphere and self.torsion_order == 1

    def to_dict(self) -> dict:
        return {
            "cone": self.cone_id,
            "generators": [list(g) for g in self.generators],
            "betti": list(self.betti),
            "h1_torsion": list(self.h1_torsion),
            "torsion_order": self.torsion_order,
            "rational_sphere": self.rational_sphere,
            "integral_sphere": self.integral_sphere,
        }


def analyze_link(cone_id: int, g1, g2) -> SurfaceLink:
    cx = link_complex(g1, g2)
    cx.check()
    betti = tuple(cx.betti())
    torsion = cx.integral_homology()[1][1]
    order = abs(det([list(g1), list(g2)]))
    prod = 1
    for t in torsion:
        prod *= t
    if order and prod != order:
        raise AssertionError(f"torsion {torsion} disagrees with determinant {order}")
    return SurfaceLink(cone_id, (tuple(g1), tuple(g2)), cx, betti, order, torsion)


def vertex_link_surface(fan: Fan, cone2_id: int) -> SurfaceLink:
    c = fan.cone(cone2_id)
    if fan.ambient_dim != 2 or c.dim != 2:
        raise ValueError(f"cone {cone2_id} is not a maximal cone of a 2-dimensional fan")
    a, b = c.ray_ids
    return analyze_link(cone2_id, fan.generator(a), fan.generator(b))


@dataclass(frozen=True)
class SurfaceVertex:
    cone_id: int
    abs_det: int
    smooth: bool


def surface_singularity_census(fan: Fan) -> tuple[list[SurfaceVertex], bool]:
    out = []
    for cid in fan.maximal_cones:
        a, b = fan.cone(cid).ray_ids
        d = abs(det([fan.generator(a), fan.generator(b)]))
        out.append(SurfaceVertex(cid, d, d == 1))
    return out, all(v.smooth for v in out)


def snf_torsion_order(g1, g2) -> int:
    """Independent oracle: product of invariant factors of the generator matrix."""
    snf = smith_normal_form([list(g1), list(g2)])
    prod = 1
    for d in snf.diagonal:
        prod *= d
    return prod

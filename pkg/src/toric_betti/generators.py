"""Random complete fans for property tests.

Face fans of lattice polytopes with the origin in the interior are complete
and often non-simplicial; pyramids over lattice polygons give a prescribed
vertex star size.  Everything is exact.
"""

from __future__ import annotations

import random
from itertools import combinations

from .exact_linalg import cross, det, dot, primitive
from .fan import Fan, _angle_key, validate_fan


def polygon_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Strict convex hull (no collinear points), counter-clockwise."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _contains_origin_strictly(poly: list[tuple[int, int]]) -> bool:
    n = len(poly)
    return n >= 3 and all(
        poly[i][0] * poly[(i + 1) % n][1] - poly[i][1] * poly[(i + 1) % n][0] > 0 for i in range(n))


def random_unimodular(rng: random.Random, steps: int = 6) -> list[list[int]]:
    m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        k = rng.choice([-2, -1, 1, 2])
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    if rng.random() < 0.5:
        m[0] = [-x for x in m[0]]
    assert abs(det(m)) == 1
    return m


def _apply(m, v):
    return tuple(dot(row, v) for row in m)


def random_polygon(rng: random.Random, f: int, radius: int = 4) -> list[tuple[int, int]]:
    while True:
        k = rng.randint(f, f + 6)
        pts = [(rng.randint(-radius, radius), rng.randint(-radius, radius)) for _ in range(k)]
        hull = polygon_hull(pts)
        if len(hull) == f and _contains_origin_strictly(hull):
            return hull


def pyramid_fan(polygon: list[tuple[int, int]], transform=None, name: str | None = None) -> Fan:
    """Face fan of conv(polygon x {1}, (0,0,-1)); cone 0 is the polygon's cone."""
    rays = [(x, y, 1) for x, y in polygon] + [(0, 0, -1)]
    if transform is not None:
        rays = [_apply(transform, r) for r in rays]
    f = len(polygon)
    cones = [list(range(f))] + [[i, (i + 1) % f, f] for i in range(f)]
    return validate_fan(3, rays, cones, name=name)


def random_star_fan(rng: random.Random, f: int, mix: bool = True) -> Fan:
    """A complete fan whose first maximal cone has exactly ``f`` rays."""
    poly = random_polygon(rng, f)
    u = random_unimodular(rng) if mix and rng.random() < 0.8 else None
    return pyramid_fan(poly, u, name=f"star{f}")


def polytope_facets(points: list[tuple[int, int, int]]):
    """Facets of conv(points) as (normal, offset, points on the facet)."""
    pts = sorted(set(points))
    facets = {}
    for a, b, c in combinations(pts, 3):
        n = cross([b[i] - a[i] for i in range(3)], [c[i] - a[i] for i in range(3)])
        if not any(n):
            continue
        n = primitive(n)
        off = dot(n, a)
        vals = [dot(n, p) - off for p in pts]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            n, off = tuple(-x for x in n), -off
        else:
            continue
        if (n, off) not in facets:
            facets[(n, off)] = [p for p in pts if dot(n, p) == off]
    return [(n, off, on) for (n, off), on in facets.items()]


def _facet_vertices(normal, on):
    drop = next(i for i in range(3) if normal[i])
    keep = [i for i in range(3) if i != drop]
    proj = {(p[keep[0]], p[keep[1]]): p for p in on}
    return [proj[q] for q in polygon_hull(list(proj))]


def face_fan(points: list[tuple[int, int, int]], name: str | None = None) -> Fan | None:
    """Face fan of a lattice polytope, or None if the origin is not interior."""
    facets = polytope_facets(points)
    if not facets or any(off <= 0 for _, off, _ in facets):
        return None
    verts: dict[tuple[int, ...], int] = {}
    cones = []
    for n, _, on in facets:
        cone = []
        for v in _facet_vertices(n, on):
            if v not in verts:
                verts[v] = len(verts)
            cone.append(verts[v])
        cones.append(sorted(cone))
    rays = [primitive(v) for v in verts]
    return validate_fan(3, rays, cones, name=name)


def random_face_fan(rng: random.Random, radius: int = 2, npoints: tuple[int, int] = (6, 12)) -> Fan:
    while True:
        k = rng.randint(*npoints)
        pts = [tuple(rng.randint(-radius, radius) for _ in range(3)) for _ in range(k)]
        fan = face_fan(pts, name="random")
        if fan is not None:
            return fan


def random_fan_2d(rng: random.Random, radius: int = 4) -> Fan:
    while True:
        k = rng.randint(3, 8)
        dirs = {primitive(v) for v in
                ((rng.randint(-radius, radius), rng.randint(-radius, radius)) for _ in range(k))
                if any(v)}
        if len(dirs) < 3:
            continue
        order = sorted(dirs, key=_angle_key)
        if all(det([order[i], order[(i + 1) % len(order)]]) > 0 for i in range(len(order))):
            rays = [list(v) for v in order]
            cones = [[i, (i + 1) % len(order)] for i in range(len(order))]
            return validate_fan(2, rays, cones, name="random2d")


def random_two_cone(rng: random.Random, radius: int = 6) -> tuple[tuple[int, ...], tuple[int, ...]]:
    while True:
        g1 = tuple(rng.randint(-radius, radius) for _ in range(3))
        g2 = tuple(rng.randint(-radius, radius) for _ in range(3))
        if any(g1) and any(g2) and any(cross(g1, g2)):
            return primitive(g1), primitive(g2)

"""Complete rational fans in R^2 and R^3.

Users hand in rays and maximal cones; lower-dimensional faces are
synthesized.  Validation is exact: properness by Fourier-Motzkin, facets by
integer normals, completeness combinatorially (plus an optional sampling
check).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .exact_linalg import cross, det, dot, is_primitive, primitive, rank_q


class FanError(ValueError):
    """Validation failure; ``condition`` names the violated requirement."""

    condition = "InvalidFan"

    def __init__(self, message: str, ids: Iterable = ()):
        super().__init__(message)
        self.ids = tuple(ids)

    def to_dict(self) -> dict:
        return {"condition": self.condition, "ids": list(self.ids), "message": str(self)}


class FanInputError(FanError):
    condition = "InvalidInput"


class NotPrimitiveRay(FanError):
    condition = "NotPrimitiveRay"

    def __init__(self, message, ids=(), suggestion=None):
        super().__init__(message, ids)
        self.suggestion = suggestion


class NotProper(FanError):
    condition = "NotProper"


class FaceClosureViolation(FanError):
    condition = "FaceClosureViolation"


class NotComplete(FanError):
    condition = "NotComplete"


class ImproperIntersection(FanError):
    condition = "ImproperIntersection"


class CycleBroken(FanError):
    condition = "CycleBroken"


@dataclass(frozen=True)
class Ray:
    id: int
    generator: tuple[int, ...]


@dataclass(frozen=True)
class Cone:
    id: int
    ray_ids: tuple[int, ...]
    dim: int


@dataclass(frozen=True)
class VertexStar:
    """Rays and 2-faces of a 3-cone in cyclic order.

    ``cycle`` alternates ray ids and 2-cone ids: ``(r0, s01, r1, s12, ...)``,
    where ``s_i,i+1`` is the 2-face spanned by consecutive rays.
    """

    cone3_id: int
    cycle: tuple[int, ...]

    @property
    def rays(self) -> tuple[int, ...]:
        return self.cycle[0::2]

    @property
    def faces(self) -> tuple[int, ...]:
        return self.cycle[1::2]

    @property
    def f_x1(self) -> int:
        return len(self.cycle) // 2


def fourier_motzkin_feasible(rows: Sequence[Sequence], rhs: Sequence) -> bool:
    """Decide whether ``{x : rows @ x >= rhs}`` is nonempty, exactly."""
    ineqs = [([Fraction(a) for a in r], Fraction(b)) for r, b in zip(rows, rhs)]
    nvars = len(rows[0]) if rows else 0
    for k in range(nvars):
        pos, neg, rest = [], [], []
        for coeffs, b in ineqs:
            (pos if coeffs[k] > 0 else neg if coeffs[k] < 0 else rest).append((coeffs, b))
        for cp, bp in pos:
            for cn, bn in neg:
                sp, sn = cp[k], -cn[k]
                coeffs = [x / sp + y / sn for x, y in zip(cp, cn)]
                coeffs[k] = Fraction(0)
                rest.append((coeffs, bp / sp + bn / sn))
        # drop duplicates to keep the system small
        seen = {}
        for coeffs, b in rest:
            key = tuple(coeffs)
            if key not in seen or b > seen[key]:
                seen[key] = b
        ineqs = [(list(c), b) for c, b in seen.items()]
    return all(b <= 0 for _, b in ineqs)


def is_pointed(generators: Sequence[Sequence[int]]) -> bool:
    """True iff some c has c . v >= 1 for every generator (strict one-sidedness)."""
    return fourier_motzkin_feasible(generators, [1] * len(generators))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _facets_3d(gens: dict[int, tuple[int, ...]]) -> list[tuple[tuple[int, ...], tuple[int, int, int]]]:
    """Facets of a full-dimensional 3-cone as (ray ids on facet, inward normal)."""
    facets = {}
    ids = sorted(gens)
    for i, j in combinations(ids, 2):
        c = cross(gens[i], gens[j])
        if not any(c):
            continue
        vals = {k: dot(c, gens[k]) for k in ids}
        signs = {_sign(v) for v in vals.values()} - {0}
        if len(signs) != 1:
            continue
        if signs == {-1}:
            c = tuple(-x for x in c)
        on = tuple(k for k in ids if vals[k] == 0)
        facets.setdefault(on, tuple(c))
    return sorted(facets.items())


def _angle_key(v: Sequence[int]):
    """Sort key for exact counter-clockwise angle in [0, 2pi)."""
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    # within a half plane, compare by cotangent without division
    return half, Fraction(-x, abs(x) + abs(y)) if half == 0 else Fraction(x, abs(x) + abs(y))


@dataclass(frozen=True)
class Fan:
    ambient_dim: int
    rays: tuple[Ray, ...]
    cones: tuple[Cone, ...]
    maximal_cones: tuple[int, ...]
    name: str | None = None
    labels: tuple[tuple[int, str], ...] = ()
    _normals: dict = field(default_factory=dict, compare=False, repr=False)

    # --- lookups -------------------------------------------------------
    def generator(self, ray_id: int) -> tuple[int, ...]:
        return self.rays[ray_id].generator

    def cone(self, cone_id: int) -> Cone:
        return self.cones[cone_id]

    def cones_of_dim(self, d: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == d]

    @cached_property
    def _by_rays(self) -> dict[tuple[int, ...], int]:
        return {c.ray_ids: c.id for c in self.cones}

    def cone_id(self, ray_ids: Iterable[int]) -> int:
        return self._by_rays[tuple(sorted(ray_ids))]

    def maximal_index(self, cone_id: int) -> int:
        """Position of a maximal cone in the input listing."""
        return self.maximal_cones.index(cone_id)

    def resolve_vertex(self, spec: str | int) -> int:
        """Cone id of a maximal cone given by input index or label."""
        label_map = {lab: cid for cid, lab in self.labels}
        if isinstance(spec, str) and spec in label_map:
            return label_map[spec]
        try:
            idx = int(spec)
        except (TypeError, ValueError):
            raise KeyError(f"unknown maximal cone {spec!r}") from None
        if not 0 <= idx < len(self.maximal_cones):
            raise KeyError(f"maximal cone index {idx} out of range")
        return self.maximal_cones[idx]

    def label_of(self, cone_id: int) -> str | None:
        return dict(self.labels).get(cone_id)

    def facets(self, cone_id: int):
        """(2-face cone ids, inward normals) of a maximal 3-cone."""
        if cone_id not in self._normals:
            c = self.cones[cone_id]
            gens = {r: self.generator(r) for r in c.ray_ids}
            self._normals[cone_id] = [(self.cone_id(on), n) for on, n in _facets_3d(gens)]
        return self._normals[cone_id]

    def cones_containing(self, cone_id: int, dim: int) -> list[int]:
        rays = set(self.cones[cone_id].ray_ids)
        return [c.id for c in self.cones if c.dim == dim and rays <= set(c.ray_ids)]

    # --- combinatorics -------------------------------------------------
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.cones_of_dim(d)) for d in range(1, self.ambient_dim + 1))

    def gamma_omega(self) -> tuple[int, int]:
        gamma = sum(1 for r in self.rays if all(r.generator))
        return gamma, len(self.rays) - gamma

    def is_simplicial(self) -> tuple[dict[int, bool], bool]:
        flags = {c.id: rank_q([self.generator(r) for r in c.ray_ids]) == len(c.ray_ids)
                 for c in self.cones}
        return flags, all(flags[c] for c in self.maximal_cones)

    def vertex_star(self, cone3_id: int) -> VertexStar:
        c = self.cones[cone3_id]
        if self.ambient_dim != 3 or c.dim != 3:
            raise ValueError("vertex stars exist for 3-cones of a 3-dimensional fan")
        faces = [self.cones[fid] for fid, _ in self.facets(cone3_id)]
        adj: dict[int, list[tuple[int, int]]] = {r: [] for r in c.ray_ids}
        for f in faces:
            if len(f.ray_ids) != 2:
                raise CycleBroken(f"2-face {f.id} of cone {cone3_id} has {len(f.ray_ids)} rays",
                                  [cone3_id, f.id])
            a, b = f.ray_ids
            adj[a].append((b, f.id))
            adj[b].append((a, f.id))
        if any(len(v) != 2 for v in adj.values()):
            raise CycleBroken(f"rays of cone {cone3_id} do not lie on exactly two 2-faces", [cone3_id])
        start = min(c.ray_ids)
        (n1, f1), (n2, f2) = sorted(adj[start])
        g = self.generator
        # orientation: first three rays positively oriented
        nxt, face = (n1, f1)
        third = next(x for x in adj[n1] if x[0] != start)[0]
        if det([g(start), g(n1), g(third)]) < 0:
            nxt, face = (n2, f2)
        cycle = [start, face]
        prev, cur = start, nxt
        while cur != start:
            cycle.append(cur)
            step = next(x for x in adj[cur] if x[0] != prev)
            cycle.append(step[1])
            prev, cur = cur, step[0]
            if len(cycle) > 2 * len(c.ray_ids):
                break
        if len(cycle) != 2 * len(c.ray_ids):
            raise CycleBroken(f"2-faces of cone {cone3_id} do not form a single cycle", [cone3_id])
        return VertexStar(cone3_id, tuple(cycle))

    def ray_star(self, ray_id: int) -> tuple[int, ...]:
        """Cyclic sequence ``(s0, w0, s1, w1, ...)`` of 2-cones and maximal cones around a ray.

        ``w_i`` is the maximal cone between 2-cones ``s_i`` and ``s_i+1``.
        For a 2-dimensional fan the sequence is ``(w0, w1)``: the two 2-cones.
        """
        if self.ambient_dim == 2:
            return tuple(self.cones_containing(ray_id, 2))
        twos = self.cones_containing(ray_id, 2)
        threes = self.cones_containing(ray_id, 3)
        adj: dict[int, list[tuple[int, int]]] = {s: [] for s in twos}
        for w in threes:
            incident = [fid for fid, _ in self.facets(w) if ray_id in self.cones[fid].ray_ids]
            if len(incident) != 2:
                raise CycleBroken(f"cone {w} meets ray {ray_id} in {len(incident)} faces", [w, ray_id])
            a, b = incident
            adj[a].append((b, w))
            adj[b].append((a, w))
        if any(len(v) != 2 for v in adj.values()):
            raise CycleBroken(f"2-cones around ray {ray_id} are not each in two maximal cones", [ray_id])
        g = self.generator
        rho = g(ray_id)

        def other(s):
            a, b = self.cones[s].ray_ids
            return b if a == ray_id else a

        start = min(twos)
        (s1, w1), (s2, w2) = sorted(adj[start])
        nxt, w = (s1, w1)
        if det([rho, g(other(start)), g(other(s1))]) < 0:
            nxt, w = (s2, w2)
        seq = [start, w]
        prev, cur = start, nxt
        while cur != start:
            seq.append(cur)
            step = next(x for x in adj[cur] if x[0] != prev)
            seq.append(step[1])
            prev, cur = cur, step[0]
            if len(seq) > 2 * len(twos):
                break
        if len(seq) != 2 * len(twos):
            raise CycleBroken(f"star of ray {ray_id} is not a single cycle", [ray_id])
        return tuple(seq)

    # --- optional geometric check -------------------------------------
    def contains(self, cone_id: int, x: Sequence[int]) -> int:
        """1 if x is interior to the maximal cone, 0 on its boundary, -1 outside."""
        c = self.cones[cone_id]
        if self.ambient_dim == 2:
            a, b = (self.generator(r) for r in c.ray_ids)
            if det([a, b]) < 0:
                a, b = b, a
            vals = [det([a, x]), det([x, b])]
        else:
            vals = [dot(n, x) for _, n in self.facets(cone_id)]
        if any(v < 0 for v in vals):
            return -1
        return 1 if all(v > 0 for v in vals) else 0

    def deep_check(self, samples: int = 200, seed: int = 0) -> int:
        """Random-direction cover test; returns the number of generic samples checked."""
        rng = random.Random(seed)
        checked = 0
        n = self.ambient_dim
        while checked < samples:
            x = [rng.randint(-10**6, 10**6) for _ in range(n)]
            if not any(x):
                continue
            hits = [self.contains(c, x) for c in self.maximal_cones]
            if 0 in hits:
                continue
            inside = [c for c, h in zip(self.maximal_cones, hits) if h == 1]
            if not inside:
                raise NotComplete(f"direction {x} lies in no maximal cone")
            if len(inside) > 1:
                raise ImproperIntersection(f"direction {x} lies in several cone interiors", inside)
            checked += 1
        return checked


def validate_fan(dimension: int, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]],
                 *, name: str | None = None, labels: Sequence[str | None] | None = None,
                 normalize: bool = False, deep_check: bool = False) -> Fan:
    """Validate a complete fan given by rays and maximal cones.

    Raises one of the ``FanError`` subclasses naming the failed condition.
    """
    if dimension not in (2, 3):
        raise FanInputError(f"dimension must be 2 or 3, got {dimension}")
    gens: list[tuple[int, ...]] = []
    for i, v in enumerate(rays):
        v = tuple(int(x) for x in v)
        if len(v) != dimension:
            raise FanInputError(f"ray {i} has {len(v)} coordinates, expected {dimension}", [i])
        if not any(v):
            raise FanInputError(f"ray {i} is the zero vector", [i])
        if not is_primitive(v):
            if not normalize:
                raise NotPrimitiveRay(
                    f"ray {i} = {list(v)} is not primitive; use {list(primitive(v))} "
                    f"or pass --normalize", [i], suggestion=primitive(v))
            v = primitive(v)
        gens.append(v)
    seen: dict[tuple[int, ...], int] = {}
    for i, v in enumerate(gens):
        if v in seen:
            raise FanInputError(f"rays {seen[v]} and {i} coincide", [seen[v], i])
        seen[v] = i

    listed: list[tuple[int, ...]] = []
    for ci, c in enumerate(cones):
        ids = tuple(int(x) for x in c)
        if any(not 0 <= r < len(gens) for r in ids):
            raise FanInputError(f"cone {ci} references a ray index out of range", [ci])
        if len(set(ids)) != len(ids):
            raise FanInputError(f"cone {ci} repeats a ray", [ci])
        listed.append(tuple(sorted(ids)))
    if not listed:
        raise NotComplete("no cones given")

    maximal = [c for c in listed if rank_q([gens[r] for r in c]) == dimension]
    lower = [c for c in listed if rank_q([gens[r] for r in c]) < dimension]
    if len(set(maximal)) != len(maximal):
        dup = next(c for c in maximal if maximal.count(c) > 1)
        raise FanInputError(f"cone {list(dup)} listed twice", [listed.index(dup)])

    for ci, c in enumerate(listed):
        if not is_pointed([gens[r] for r in c]):
            raise NotProper(f"cone {ci} is not strictly on one side of a hyperplane", [ci])

    covered = {r for c in maximal for r in c}
    if covered != set(range(len(gens))):
        missing = sorted(set(range(len(gens))) - covered)
        raise NotComplete(f"rays {missing} lie in no maximal cone", missing)
    if dimension == 2:
        fan = _build_2d(gens, maximal, listed, name)
    else:
        fan = _build_3d(gens, maximal, listed, name)

    for c in lower:
        if c not in fan._by_rays:
            raise FaceClosureViolation(
                f"listed cone {list(c)} is not a face of any maximal cone", [listed.index(c)])

    if labels:
        pairs = []
        for ci, lab in enumerate(labels):
            if lab:
                pairs.append((fan.cone_id(listed[ci]), lab))
        fan = Fan(fan.ambient_dim, fan.rays, fan.cones, fan.maximal_cones, fan.name, tuple(pairs))
    if deep_check:
        fan.deep_check()
    return fan


def _assemble(gens, two_faces, maximal, name, dimension) -> Fan:
    rays = tuple(Ray(i, g) for i, g in enumerate(gens))
    cones: list[Cone] = [Cone(i, (i,), 1) for i in range(len(gens))]
    if dimension == 3:
        for f in sorted(two_faces):
            cones.append(Cone(len(cones), f, 2))
    max_ids = []
    for c in maximal:
        max_ids.append(len(cones))
        cones.append(Cone(len(cones), c, dimension))
    return Fan(dimension, rays, tuple(cones), tuple(max_ids), name)


def _build_2d(gens, maximal, listed, name) -> Fan:
    for c in maximal:
        if len(c) != 2:
            raise NotProper(f"2-cone {list(c)} is generated by {len(c)} rays; only 2 are extremal",
                            [listed.index(c)])
    order = sorted(range(len(gens)), key=lambda i: _angle_key(gens[i]))
    consecutive = set()
    for k, i in enumerate(order):
        j = order[(k + 1) % len(order)]
        if len(order) < 3 or det([gens[i], gens[j]]) <= 0:
            raise NotComplete(f"angular gap between rays {i} and {j} is not spanned by a proper cone",
                              [i, j])
        consecutive.add(tuple(sorted((i, j))))
    for c in maximal:
        if c not in consecutive:
            raise ImproperIntersection(f"cone {list(c)} overlaps other cones", [listed.index(c)])
    missing = consecutive - set(maximal)
    if missing:
        raise NotComplete(f"cones {sorted(map(list, missing))} are missing", sorted(missing)[0])
    return _assemble(gens, (), maximal, name, 2)


def _build_3d(gens, maximal, listed, name) -> Fan:
    two_faces: dict[tuple[int, ...], list[int]] = {}
    facet_normals: dict[tuple[int, ...], list] = {}
    for c in maximal:
        ci = listed.index(c)
        fs = _facets_3d({r: gens[r] for r in c})
        on_facets = {r: 0 for r in c}
        for on, _ in fs:
            if len(on) != 2:
                raise NotProper(f"cone {ci} has a facet through {len(on)} rays; "
                                f"some ray is not extremal", [ci])
            for r in on:
                on_facets[r] += 1
            two_faces.setdefault(on, []).append(ci)
        if any(v != 2 for v in on_facets.values()):
            raise NotProper(f"cone {ci} has a ray that is not extremal", [ci])
        facet_normals[c] = fs
    for f, owners in two_faces.items():
        if len(owners) == 1:
            raise NotComplete(f"2-cone {list(f)} is a face of only one maximal cone", owners)
        if len(owners) > 2:
            raise ImproperIntersection(f"2-cone {list(f)} is a face of {len(owners)} maximal cones",
                                       owners)
    fan = _assemble(gens, two_faces.keys(), maximal, name, 3)
    for r in fan.rays:
        try:
            fan.ray_star(r.id)
        except CycleBroken as e:
            raise NotComplete(f"cones around ray {r.id} do not close up: {e}", [r.id]) from None
    f1, f2, f3 = fan.f_vector()
    if f1 - f2 + f3 != 2:
        raise NotComplete(f"f1 - f2 + f3 = {f1 - f2 + f3}, not 2", [])
    for a, b in combinations(maximal, 2):
        _check_pair(gens, a, b, facet_normals, listed)
    return fan


def _check_pair(gens, a, b, facet_normals, listed) -> None:
    """Raise unless the intersection of two 3-cones is a common face."""
    normals = [n for _, n in facet_normals[a]] + [n for _, n in facet_normals[b]]
    shared = set(a) & set(b)
    extreme = []
    for n1, n2 in combinations(normals, 2):
        d = cross(n1, n2)
        if not any(d):
            continue
        for cand in (d, tuple(-x for x in d)):
            if all(dot(n, cand) >= 0 for n in normals):
                extreme.append(cand)
    for cone in (a, b):
        active = [n for on, n in facet_normals[cone] if shared <= set(on)]
        face_rays = {r for r in cone if all(dot(n, gens[r]) == 0 for n in active)}
        if face_rays != shared:
            raise ImproperIntersection(
                f"cones {listed.index(a)} and {listed.index(b)} share rays {sorted(shared)} "
                f"that do not form a common face", [listed.index(a), listed.index(b)])
        for q in extreme:
            if any(dot(n, q) != 0 for n in active):
                raise ImproperIntersection(
                    f"cones {listed.index(a)} and {listed.index(b)} overlap beyond a common face",
                    [listed.index(a), listed.index(b)])

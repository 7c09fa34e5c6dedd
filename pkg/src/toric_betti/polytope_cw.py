"""Regular CW structure on the dual polytope of a complete fan.

A k-cone of an n-dimensional fan is dual to an (n-k)-cell; the origin is
dual to the single top cell.  Only incidences and signs are built, no
coordinates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .chain import ChainComplex
from .exact_linalg import Matrix, zeros
from .fan import Fan

ORIGIN = "origin"


class OrientationInconsistent(RuntimeError):
    pass


@dataclass(frozen=True)
class DualCell:
    id: int
    dim: int
    dual_cone_id: int | str


@dataclass(frozen=True)
class DualCW:
    fan: Fan
    cells: tuple[tuple[DualCell, ...], ...]  # indexed by cell dimension
    complex: ChainComplex

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    def index_of_cone(self, cone_id: int) -> int:
        """Position of the cell dual to ``cone_id`` within its dimension."""
        d = self.fan.ambient_dim - self.fan.cone(cone_id).dim
        return next(c.id for c in self.cells[d] if c.dual_cone_id == cone_id)

    def boundary(self, k: int) -> Matrix:
        return self.complex.boundaries[k]

    def boundary_cycle_of_2cell(self, idx: int) -> list[tuple[int, int]]:
        """Signed edges of a 2-cell, in the order the boundary is traversed."""
        return boundary_cycle(self.boundary(1), [row[idx] for row in self.boundary(2)])


def boundary_cycle(d1: Matrix, column: list[int]) -> list[tuple[int, int]]:
    """Order the signed edges of a cellular 1-cycle made of distinct edges."""
    support = [e for e, s in enumerate(column) if s]
    if not support:
        return []

    def ends(e):
        tail = next(v for v, row in enumerate(d1) if row[e] == -1)
        head = next(v for v, row in enumerate(d1) if row[e] == 1)
        return tail, head

    out = []
    e = min(support)
    start = None
    while True:
        s = column[e]
        tail, head = ends(e)
        if start is None:
            start = tail if s > 0 else head
        out.append((e, s))
        at = head if s > 0 else tail
        if at == start:
            break
        e = next(x for x in support if x != e and d1[at][x] and (x, column[x]) not in out)
    if len(out) != len(support):
        raise OrientationInconsistent("2-cell boundary is not a single cycle")
    return out


def _top_coefficients(d_top_minus: Matrix, ncells: int) -> list[int]:
    """Signs on the (n-1)-cells making their sum a cycle.

    Every (n-2)-cell is a face of exactly two (n-1)-cells; signs propagate
    across these shared faces by breadth-first search.
    """
    eps = [0] * ncells
    if ncells == 0:
        return eps
    eps[0] = 1
    queue = deque([0])
    rows_of = [[r for r, row in enumerate(d_top_minus) if row[c]] for c in range(ncells)]
    while queue:
        c = queue.popleft()
        for r in rows_of[c]:
            row = d_top_minus[r]
            others = [x for x, v in enumerate(row) if v and x != c]
            if len(others) != 1:
                raise OrientationInconsistent(f"face {r} is not shared by exactly two cells")
            o = others[0]
            want = -eps[c] * row[c] * row[o]  # row[o] is +-1
            if eps[o] == 0:
                eps[o] = want
                queue.append(o)
            elif eps[o] != want:
                raise OrientationInconsistent("cells cannot be oriented coherently")
    if 0 in eps:
        raise OrientationInconsistent("boundary of the polytope is disconnected")
    return eps


def build_dual_cw(fan: Fan, relabel: dict[int, list[int]] | None = None) -> DualCW:
    """Dual-polytope CW complex with signed boundary matrices.

    ``relabel`` optionally reorders the cells of each dimension (a
    permutation of cone positions), to check that ranks do not depend on
    the chosen ids.
    """
    n = fan.ambient_dim
    by_dim: list[list[int]] = []
    for d in range(n + 1):
        cone_dim = n - d
        ids = [c.id for c in fan.cones_of_dim(cone_dim)] if cone_dim > 0 else [ORIGIN]
        if relabel and d in relabel:
            ids = [ids[i] for i in relabel[d]]
        by_dim.append(ids)
    pos = [{cid: i for i, cid in enumerate(ids)} for ids in by_dim]
    cells = tuple(tuple(DualCell(i, d, cid) for i, cid in enumerate(ids)) for d, ids in enumerate(by_dim))
    dims = [len(ids) for ids in by_dim]
    bd: dict[int, Matrix] = {}

    # edges: dual to (n-1)-cones, joining the two maximal cones containing them
    d1 = zeros(dims[0], dims[1])
    for j, cid in enumerate(by_dim[1]):
        ends = sorted(pos[0][w] for w in fan.cones_containing(cid, n))
        if len(ends) != 2:
            raise OrientationInconsistent(f"cone {cid} is not in exactly two maximal cones")
        d1[ends[0]][j] = -1
        d1[ends[1]][j] = 1
    bd[1] = d1

    if n == 3:
        d2 = zeros(dims[1], dims[2])
        for j, ray in enumerate(by_dim[2]):
            star = fan.ray_star(ray)
            twos, threes = star[0::2], star[1::2]
            k = len(twos)
            for i, s in enumerate(twos):
                prev_w = threes[i - 1]  # s lies between prev_w and threes[i]
                e = pos[1][s]
                tail = pos[0][prev_w]
                d2[e][j] = 1 if d1[tail][e] == -1 else -1
            if k < 3:
                raise OrientationInconsistent(f"ray {ray} has a degenerate star")
        bd[2] = d2

    top_minus = bd[n - 1]
    eps = _top_coefficients(top_minus, dims[n - 1])
    bd[n] = [[e] for e in eps]
    cx = ChainComplex(dims, bd)
    return DualCW(fan, cells, cx)

"""Finite chain complexes of free modules with integer boundary matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_linalg import Matrix, matmul, rank_q, smith_normal_form


class BoundaryError(ValueError):
    """A boundary matrix has the wrong shape or d∘d does not vanish."""


@dataclass
class ChainComplex:
    """Cells counted per degree 0..top, ``boundaries[k]`` maps C_k -> C_{k-1}.

    ``boundaries[k]`` is stored with ``dims[k-1]`` rows and ``dims[k]``
    columns; ``boundaries[0]`` is the (empty) augmentation-free zero map.
    """

    dims: list[int]
    boundaries: dict[int, Matrix]
    labels: dict[int, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        for k in range(1, len(self.dims)):
            m = self.boundaries.setdefault(k, [[0] * self.dims[k] for _ in range(self.dims[k - 1])])
            if len(m) != self.dims[k - 1] or any(len(r) != self.dims[k] for r in m):
                raise BoundaryError(
                    f"d_{k} has shape {len(m)}x{len(m[0]) if m else '?'}, "
                    f"expected {self.dims[k - 1]}x{self.dims[k]}")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def rank_of(self, k: int) -> int:
        if k < 1 or k > self.top:
            return 0
        return rank_q(self.boundaries[k])

    def betti(self) -> list[int]:
        ranks = [self.rank_of(k) for k in range(self.top + 2)]
        return [self.dims[k] - ranks[k] - ranks[k + 1] for k in range(self.top + 1)]

    def euler(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def dd_is_zero(self) -> bool:
        for k in range(2, self.top + 1):
            prod = matmul(self.boundaries[k - 1], self.boundaries[k],
                          inner=self.dims[k - 1], cols=self.dims[k])
            if any(x for row in prod for x in row):
                return False
        return True

    def check(self) -> None:
        if not self.dd_is_zero():
            raise BoundaryError("boundary composed with boundary is not zero")

    def integral_homology(self) -> list[tuple[int, tuple[int, ...]]]:
        """(free rank, torsion coefficients) per degree, via Smith forms."""
        snfs = {k: smith_normal_form(self.boundaries[k], cols=self.dims[k])
                for k in range(1, self.top + 1)}
        out = []
        for k in range(self.top + 1):
            rk_out = snfs[k].rank if k in snfs else 0
            nxt = snfs.get(k + 1)
            rk_in = nxt.rank if nxt else 0
            torsion = nxt.torsion if nxt else ()
            out.append((self.dims[k] - rk_out - rk_in, torsion))
        return out

    def permuted(self, perms: dict[int, list[int]]) -> "ChainComplex":
        """Same complex with the cells of degree k reordered by ``perms[k]``.

        ``perms[k][i]`` is the old index of the new i-th cell.
        """
        p = {k: perms.get(k, list(range(d))) for k, d in enumerate(self.dims)}
        bd = {}
        for k in range(1, self.top + 1):
            m = self.boundaries[k]
            bd[k] = [[m[r][c] for c in p[k]] for r in p[k - 1]]
        labels = {k: [v[i] for i in p[k]] for k, v in self.labels.items()}
        return ChainComplex(list(self.dims), bd, labels)

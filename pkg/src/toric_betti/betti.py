"""Closed-form Betti tables H, IH and HI for toric threefolds.

Entries are affine in the parameter b = rk H_4 - rk H_2, which is not a
combinatorial invariant of the fan.  A ``BPolicy`` decides whether b is
fixed (simplicial fans, vanishing H_3, a user value) or kept symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fan import Fan
from .link5 import edge_link_homology, vertex_integral_smooth


class NegativeBetti(ValueError):
    pass


class PolicyInapplicable(ValueError):
    pass


class OutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class BExpr:
    """c0 + c1 * b."""

    c0: int
    c1: int = 0

    def __add__(self, other):
        o = as_bexpr(other)
        return BExpr(self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_bexpr(other)
        return BExpr(self.c0 - o.c0, self.c1 - o.c1)

    def __rsub__(self, other):
        return as_bexpr(other) - self

    def __neg__(self):
        return BExpr(-self.c0, -self.c1)

    def __mul__(self, k: int):
        return BExpr(self.c0 * k, self.c1 * k)

    __rmul__ = __mul__

    def at(self, b: int) -> int:
        return self.c0 + self.c1 * b

    @property
    def is_constant(self) -> bool:
        return self.c1 == 0

    def __str__(self) -> str:
        if self.c1 == 0:
            return str(self.c0)
        coeff = {1: "b", -1: "-b"}.get(self.c1, f"{self.c1}b")
        if self.c0 == 0:
            return coeff
        return f"{self.c0}{'+' if self.c1 > 0 else ''}{coeff}"

    def to_json(self):
        return {"const": self.c0, "b_coeff": self.c1}

    @classmethod
    def from_json(cls, d) -> "BExpr":
        if isinstance(d, int):
            return cls(d)
        return cls(d["const"], d["b_coeff"])


def as_bexpr(x) -> BExpr:
    return x if isinstance(x, BExpr) else BExpr(int(x))


B = BExpr(0, 1)


@dataclass(frozen=True)
class SymbolicBettiTable:
    entries: tuple[BExpr, ...]
    reduced: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(as_bexpr(e) for e in self.entries))

    def __getitem__(self, k: int) -> BExpr:
        return self.entries[k]

    def __len__(self) -> int:
        return len(self.entries)

    def at(self, b: int) -> tuple[int, ...]:
        return tuple(e.at(b) for e in self.entries)

    def numeric(self) -> tuple[int, ...] | None:
        if all(e.is_constant for e in self.entries):
            return tuple(e.c0 for e in self.entries)
        return None

    def substitute(self, b: int | None) -> "SymbolicBettiTable":
        if b is None:
            return self
        return SymbolicBettiTable(tuple(BExpr(e.at(b)) for e in self.entries), self.reduced)

    def euler(self) -> BExpr:
        total = BExpr(0)
        for k, e in enumerate(self.entries):
            total = total + e * (-1) ** k
        return total

    def is_palindromic(self) -> bool:
        return self.entries == tuple(reversed(self.entries))

    def to_json(self):
        num = self.numeric()
        entries = list(num) if num is not None else [e.to_json() for e in self.entries]
        return {"reduced": self.reduced, "entries": entries}

    @classmethod
    def from_json(cls, d) -> "SymbolicBettiTable":
        return cls(tuple(BExpr.from_json(e) for e in d["entries"]), d["reduced"])

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


@dataclass(frozen=True)
class BPolicy:
    mode: str  # "simplicial" | "h3zero" | "user" | "symbolic"
    value: int | None = None

    def __str__(self) -> str:
        return f"user({self.value})" if self.mode == "user" else self.mode


SIMPLICIAL = BPolicy("simplicial")
H3ZERO = BPolicy("h3zero")
SYMBOLIC = BPolicy("symbolic")


def user_value(b: int) -> BPolicy:
    return BPolicy("user", int(b))


def admissible_range(f1: int, f2: int) -> tuple[int, int]:
    return 0, min(f1 - 3, 3 * f1 - f2 - 6)


def _check_range(b: int, f1: int, f2: int) -> int:
    lo, hi = admissible_range(f1, f2)
    if not lo <= b <= hi:
        raise OutOfRange(f"b = {b} is outside the admissible range [{lo}, {hi}]")
    return b


def resolve_b(fan: Fan, policy: BPolicy) -> int | None:
    f1, f2, f3 = fan.f_vector()
    if policy.mode == "simplicial":
        if not fan.is_simplicial()[1]:
            raise PolicyInapplicable("the fan has non-simplicial maximal cones")
        return _check_range(0, f1, f2)
    if policy.mode == "h3zero":
        b = 2 * f2 - 3 * f3
        assert b == 3 * f1 - f2 - 6
        return _check_range(b, f1, f2)
    if policy.mode == "user":
        return _check_range(policy.value, f1, f2)
    if policy.mode == "symbolic":
        return None
    raise ValueError(f"unknown policy {policy.mode!r}")


def auto_policy(fan: Fan) -> BPolicy:
    return SIMPLICIAL if fan.is_simplicial()[1] else SYMBOLIC


def _finish(table: SymbolicBettiTable, b: int | None) -> SymbolicBettiTable:
    out = table.substitute(b)
    num = out.numeric()
    if num is not None and any(x < 0 for x in num):
        raise NegativeBetti(f"b = {b} gives negative ranks {num}")
    return out


def ordinary_h_table(f1: int, f2: int, b: int | None = None) -> SymbolicBettiTable:
    t = SymbolicBettiTable((1, 0, f1 - 3 - B, 3 * f1 - f2 - 6 - B, f1 - 3, 0, 1))
    return _finish(t, b)


def ih_table(f1: int) -> SymbolicBettiTable:
    if f1 < 4:
        raise ValueError(f"a complete 3-dimensional fan has at least 4 rays, got {f1}")
    return SymbolicBettiTable((1, 0, f1 - 3, 0, f1 - 3, 0, 1))


def hi_table(f1: int, f2: int, m: int, b: int | None = None) -> tuple[SymbolicBettiTable, str | None]:
    """Reduced HI table, or the ordinary table with a note when m = 0."""
    if m == 0:
        return ordinary_h_table(f1, f2, b), "no rationally singular points: HI = H"
    mid = 3 * f1 - f2 - 6 - B
    t = SymbolicBettiTable((0, m - 1, f1 - 3 - B, 2 * mid, f1 - 3 - B, m - 1, 0), reduced=True)
    return _finish(t, b), None


@dataclass(frozen=True)
class VertexInfo:
    cone_id: int
    f_x1: int
    q_singular: bool
    z_smooth: bool


@dataclass(frozen=True)
class EdgeInfo:
    cone_id: int
    torsion_order: int
    smooth: bool


@dataclass(frozen=True)
class SingularityCensus:
    vertices: tuple[VertexInfo, ...]
    edges: tuple[EdgeInfo, ...]

    @property
    def m(self) -> int:
        return sum(1 for v in self.vertices if v.q_singular)

    def singular_sizes(self) -> list[int]:
        return [v.f_x1 for v in self.vertices if v.q_singular]


def singularity_census(fan: Fan) -> SingularityCensus:
    verts = []
    for cid in fan.maximal_cones:
        f = fan.vertex_star(cid).f_x1
        verts.append(VertexInfo(cid, f, f > 3, vertex_integral_smooth(fan, cid)))
    edges = []
    for c in fan.cones_of_dim(2):
        e = edge_link_homology(fan, c.id)
        edges.append(EdgeInfo(c.id, e.link.torsion_order, e.integral_sphere))
    return SingularityCensus(tuple(verts), tuple(edges))


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "n/a"
    lhs: str
    rhs: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self):
        return {"name": self.name, "status": self.status, "lhs": self.lhs, "rhs": self.rhs,
                "detail": self.detail}


def _cmp(name, lhs, rhs, detail="") -> CheckResult:
    return CheckResult(name, "pass" if lhs == rhs else "fail", str(lhs), str(rhs), detail)


@dataclass
class InvariantReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def __iter__(self):
        return iter(self.results)


def check_invariants(fan: Fan, policy: BPolicy = SYMBOLIC,
                     census: SingularityCensus | None = None) -> InvariantReport:
    f1, f2, f3 = fan.f_vector()
    census = census or singularity_census(fan)
    m = census.m
    b = resolve_b(fan, policy)
    IH = ih_table(f1)
    HI, _ = hi_table(f1, f2, m, b)
    rep = InvariantReport()
    res = rep.results

    res.append(_cmp("euler_formula", f1 - f2 + f3, 2, "f1 - f2 + f3"))

    if m == 0:
        res.append(CheckResult("hi_euler", "n/a", "-", "-", "m = 0"))
    else:
        chi = HI.euler()
        want = BExpr(2 * (-2 * f1 + f2 - m + 4))
        r = _cmp("hi_euler", chi, want, "chi(reduced HI) = 2(-2f1+f2-m+4)")
        if r.status == "pass" and (not chi.is_constant or chi.c0 % 2):
            r.status, r.detail = "fail", r.detail + "; not even"
        res.append(r)

    sizes = [fan.vertex_star(c).f_x1 for c in fan.maximal_cones]
    r_all = sum(f - 3 for f in sizes)
    res.append(_cmp("singular_excess", r_all, 2 * f2 - 3 * f3, "sum over vertices of (f_x1 - 3) = 2f2 - 3f3"))
    lhs = HI.euler() - IH.euler()
    rhs = BExpr(-2 * sum(f - 2 for f in census.singular_sizes()))
    res.append(_cmp("hi_ih_euler_difference", lhs, rhs,
                    "chi(HI) - chi(IH) = -2 * sum over singular vertices of (f_x1 - 2)"))

    if m == 0:
        res.append(CheckResult("hi_duality", "n/a", "-", "-", "m = 0"))
    else:
        dual = HI.entries == tuple(reversed(HI.entries))
        res.append(CheckResult("hi_duality", "pass" if dual else "fail", str(HI),
                               str(SymbolicBettiTable(tuple(reversed(HI.entries)), True)),
                               "entry(r) = entry(6 - r)"))

    res.append(_cmp("h_euler", ordinary_h_table(f1, f2).euler(), BExpr(f3), "chi(H) = f3 for every b"))

    if m == 0:
        res.append(CheckResult("degree3_identity", "n/a", "-", "-", "m = 0"))
    else:
        h3m = ordinary_h_table(f1, f2)[3]
        res.append(_cmp("degree3_identity", hi_table(f1, f2, m)[0][3] + IH[3], h3m + h3m,
                        "rk HI_3 + rk IH_3 = rk H_3(M) + rk H_3(M, dM)"))
        Hs = ordinary_h_table(f1, f2)
        HIs = hi_table(f1, f2, m)[0]
        low = (HIs[2], HIs[2] + B) == (Hs[2], Hs[4])
        res.append(CheckResult("low_degree_comparison", "pass" if low else "fail",
                               f"({HIs[2]}, {HIs[2] + B})", f"({Hs[2]}, {Hs[4]})",
                               "HI_2 = H_2 and HI_2 + b = H_4"))
    return rep


"""Analysis reports: assembly, JSON (de)serialization and text rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .betti import (BPolicy, CheckResult, SymbolicBettiTable, admissible_range, check_invariants,
                    hi_table, ih_table, ordinary_h_table, resolve_b, singularity_census)
from .fan import Fan
from .link5 import build_link5_complex, link5_betti_formula, moore_truncate_link
from .surface import build_surface_complex, surface_singularity_census, vertex_link_surface

SCHEMA_VERSION = 1
_REPORT_KEYS = {"schema_version", "tool_version", "fan", "policy", "b", "admissible_b", "census",
                "tables", "links", "checks", "notes"}


@dataclass
class Report:
    fan: dict
    policy: str
    b: int | None
    admissible_b: list[int] | None
    census: dict
    tables: dict[str, SymbolicBettiTable]
    links: list[dict]
    checks: list[CheckResult]
    notes: list[str] = field(default_factory=list)
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "fan": self.fan,
            "policy": self.policy,
            "b": self.b,
            "admissible_b": self.admissible_b,
            "census": self.census,
            "tables": {k: t.to_json() for k, t in self.tables.items()},
            "links": self.links,
            "checks": [c.to_json() for c in self.checks],
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        unknown = set(d) - _REPORT_KEYS
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        return cls(
            fan=d["fan"], policy=d["policy"], b=d["b"], admissible_b=d["admissible_b"],
            census=d["census"],
            tables={k: SymbolicBettiTable.from_json(t) for k, t in d["tables"].items()},
            links=d["links"],
            checks=[CheckResult(**c) for c in d["checks"]],
            notes=d["notes"], tool_version=d["tool_version"], schema_version=d["schema_version"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _fan_summary(fan: Fan) -> dict:
    gamma, omega = fan.gamma_omega()
    return {
        "name": fan.name,
        "dimension": fan.ambient_dim,
        "f_vector": list(fan.f_vector()),
        "gamma": gamma,
        "omega": omega,
        "simplicial": fan.is_simplicial()[1],
    }


def vertex_name(fan: Fan, cone_id: int) -> str:
    return fan.label_of(cone_id) or str(fan.maximal_index(cone_id))


def link_entry(fan: Fan, cone_id: int) -> dict:
    link = build_link5_complex(fan, cone_id)
    trunc = moore_truncate_link(link)
    return {
        "vertex": vertex_name(fan, cone_id),
        "rays": list(link.star.rays),
        "f_x1": link.f_x1,
        "a_type": link.a,
        "b_type": link.b,
        "betti": link.betti(),
        "formula": list(link5_betti_formula(link.f_x1)),
        "truncated_betti": trunc.betti(),
    }


def build_report(fan: Fan, policy: BPolicy) -> Report:
    if fan.ambient_dim == 2:
        return _surface_report(fan)
    f1, f2, _ = fan.f_vector()
    census = singularity_census(fan)
    b = resolve_b(fan, policy)
    hi, note = hi_table(f1, f2, census.m, b)
    tables = {"HI": hi, "IH": ih_table(f1), "H": ordinary_h_table(f1, f2, b)}
    notes = [note] if note else []
    cen = {
        "m": census.m,
        "vertices": [{"vertex": vertex_name(fan, v.cone_id), "rays": list(fan.cone(v.cone_id).ray_ids),
                      "f_x1": v.f_x1, "q_singular": v.q_singular, "z_smooth": v.z_smooth}
                     for v in census.vertices],
        "edges": [{"rays": list(fan.cone(e.cone_id).ray_ids), "torsion_order": e.torsion_order,
                   "smooth": e.smooth} for e in census.edges],
    }
    links = [link_entry(fan, c) for c in fan.maximal_cones]
    checks = check_invariants(fan, policy, census).results
    return Report(_fan_summary(fan), str(policy), b, list(admissible_range(f1, f2)), cen, tables,
                  links, checks, notes)


def _surface_report(fan: Fan) -> Report:
    sc = build_surface_complex(fan)
    f1 = fan.f_vector()[0]
    betti = sc.betti()
    verts, smooth = surface_singularity_census(fan)
    cen = {
        "m": 0,
        "smooth": smooth,
        "vertices": [{"vertex": vertex_name(fan, v.cone_id), "rays": list(fan.cone(v.cone_id).ray_ids),
                      "abs_det": v.abs_det, "z_smooth": v.smooth} for v in verts],
    }
    links = []
    for c in fan.maximal_cones:
        d = vertex_link_surface(fan, c).to_dict()
        d["vertex"] = vertex_name(fan, c)
        del d["cone"]
        links.append(d)
    checks = [
        CheckResult("complex_dd_zero", "pass" if sc.complex.dd_is_zero() else "fail", "-", "-",
                    "boundary of boundary vanishes"),
        CheckResult("betti_closed_form", "pass" if betti == [1, 0, f1 - 2, 0, 1] else "fail",
                    str(tuple(betti)), str((1, 0, f1 - 2, 0, 1)), "H = (1, 0, f1 - 2, 0, 1)"),
        CheckResult("euler", "pass" if sc.complex.euler() == f1 else "fail",
                    str(sc.complex.euler()), str(f1), "chi = f1"),
    ]
    notes = ["surface links are rational homology spheres: IH = H"]
    return Report(_fan_summary(fan), "n/a", None, None, cen,
                  {"H": SymbolicBettiTable(tuple(betti))}, links, checks, notes)


_TITLES = {"HI": "H~(IX)", "IH": "IH", "H": "H"}


def render_text(report: Report) -> str:
    f = report.fan
    out = [f"fan {f['name'] or '(unnamed)'} (dimension {f['dimension']})",
           f"  f-vector {tuple(f['f_vector'])}   gamma {f['gamma']}   omega {f['omega']}   "
           f"simplicial {'yes' if f['simplicial'] else 'no'}"]
    if f["dimension"] == 3:
        out.append(f"  m = {report.census['m']} rationally singular point(s)")
        lo, hi = report.admissible_b
        bval = "symbolic" if report.b is None else str(report.b)
        out.append(f"  b: {bval} (policy {report.policy}, admissible {lo}..{hi})")
    else:
        out.append(f"  smooth: {'yes' if report.census['smooth'] else 'no'}")
    out.append("")
    names = [k for k in ("HI", "IH", "H") if k in report.tables]
    cols = [[_TITLES[k]] + [str(e) for e in report.tables[k].entries] for k in names]
    rows = max(len(c) for c in cols)
    rcol = ["r"] + [str(i) for i in range(rows - 1)]
    cols = [rcol] + cols
    widths = [max(len(x) for x in c) for c in cols]
    for i in range(rows):
        out.append("  " + " | ".join(c[i].ljust(w) for c, w in zip(cols, widths)).rstrip())
        if i == 0:
            out.append("  " + "-+-".join("-" * w for w in widths))
    out.append("")
    for n in report.notes:
        out.append(f"note: {n}")
    out.append("checks:")
    for c in report.checks:
        out.append(f"  {c.status:4}  {c.name}: {c.lhs} vs {c.rhs}")
    return "\n".join(out) + "\n"

"""Command-line interface.

Exit codes: 0 success, 1 invalid input or failed check, 2 usage error.
Set TORIC_LOG=error|info|debug for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .betti import (H3ZERO, SYMBOLIC, BPolicy, NegativeBetti, OutOfRange, PolicyInapplicable,
                    auto_policy, user_value)
from .chain import BoundaryError
from .fan import Fan, FanError
from .fanfile import BUILTINS, FanParseError, builtin, parse_fan_file, serialize_fan_file
from .link5 import (build_link5_complex, edge_link_homology, link5_betti_formula,
                    moore_truncate_link, partial_sixfold_operators, vertex_integral_smooth)
from .polytope_cw import build_dual_cw
from .report import build_report, link_entry, render_text, vertex_name
from .surface import build_surface_complex, vertex_link_surface

log = logging.getLogger("toric_betti")


class UsageError(Exception):
    pass


def _setup_logging() -> None:
    level = os.environ.get("TORIC_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _load(args) -> Fan:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.file}: {e.strerror}") from None
    ff = parse_fan_file(text)
    log.info("parsed %d rays and %d cones", len(ff.rays), len(ff.cones))
    fan = ff.to_fan(normalize=args.normalize, deep_check=args.deep_check)
    log.info("fan validated: f-vector %s", fan.f_vector())
    return fan


def _policy(fan: Fan, spec: str) -> BPolicy:
    if spec == "auto":
        return auto_policy(fan)
    if spec == "symbolic":
        return SYMBOLIC
    if spec == "h3zero":
        return H3ZERO
    try:
        return user_value(int(spec))
    except ValueError:
        raise UsageError(f"--b expects auto, h3zero, symbolic or an integer, got {spec!r}") from None


def _vertices(fan: Fan, spec: str | None) -> list[int]:
    if spec is None:
        return list(fan.maximal_cones)
    try:
        return [fan.resolve_vertex(spec)]
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def cmd_validate(args, out) -> int:
    fan = _load(args)
    flags, simp = fan.is_simplicial()
    gamma, omega = fan.gamma_omega()
    out.write(f"valid {fan.ambient_dim}-dimensional fan {fan.name or ''}".rstrip() + "\n")
    out.write(f"f-vector {fan.f_vector()}\ngamma {gamma} omega {omega}\n"
              f"simplicial {'yes' if simp else 'no'}\n")
    return 0


def cmd_analyze(args, out) -> int:
    fan = _load(args)
    policy = _policy(fan, args.b) if fan.ambient_dim == 3 else SYMBOLIC
    report = build_report(fan, policy)
    out.write(report.to_json() if args.output == "json" else render_text(report))
    return 0


def cmd_links(args, out) -> int:
    fan = _load(args)
    data = []
    if fan.ambient_dim == 2:
        for c in _vertices(fan, args.vertex):
            link = vertex_link_surface(fan, c)
            d = {"vertex": vertex_name(fan, c), "betti": list(link.betti)}
            if args.integral:
                d.update(h1_torsion=list(link.h1_torsion), abs_det=link.torsion_order,
                         integral_sphere=link.integral_sphere)
            data.append(d)
    else:
        for c in _vertices(fan, args.vertex):
            d = link_entry(fan, c)
            if args.integral:
                d["z_smooth"] = vertex_integral_smooth(fan, c)
            data.append(d)
        if args.integral and args.vertex is None:
            for s in fan.cones_of_dim(2):
                e = edge_link_homology(fan, s.id)
                d = e.to_dict()
                d["edge"] = list(s.ray_ids)
                del d["cone"]
                data.append(d)
    if args.output == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        for d in data:
            head = f"vertex {d['vertex']}" if "vertex" in d else f"edge {d['edge']}"
            rest = ", ".join(f"{k} {v}" for k, v in d.items() if k not in ("vertex", "edge"))
            out.write(f"{head}: {rest}\n")
    return 0


def cmd_truncate(args, out) -> int:
    fan = _load(args)
    if fan.ambient_dim != 3:
        raise UsageError("truncate needs a 3-dimensional fan")
    (c,) = _vertices(fan, args.vertex)
    link = build_link5_complex(fan, c)
    trunc = moore_truncate_link(link)
    data = {"vertex": vertex_name(fan, c), "f_x1": link.f_x1, "link_betti": link.betti(),
            "truncated_betti": trunc.betti(), "removed_cells": list(trunc.removed)}
    if args.output == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(f"vertex {data['vertex']} (f_x1 = {link.f_x1})\n")
        out.write(f"link betti      {tuple(link.betti())}\n")
        out.write(f"truncated betti {tuple(trunc.betti())}\n")
        out.write("removed cells:\n")
        for r in trunc.removed:
            out.write(f"  {r}\n")
    return 0


def cmd_check(args, out) -> int:
    fan = _load(args)
    results: list[tuple[str, bool]] = []
    cw = build_dual_cw(fan)
    results.append(("polytope dd = 0", cw.complex.dd_is_zero()))
    results.append(("polytope homology (1, 0, ...)",
                    cw.complex.betti() == [1] + [0] * fan.ambient_dim))
    if fan.ambient_dim == 2:
        sc = build_surface_complex(fan)
        results.append(("surface dd = 0", sc.complex.dd_is_zero()))
        f1 = fan.f_vector()[0]
        results.append(("surface betti (1, 0, f1-2, 0, 1)", sc.betti() == [1, 0, f1 - 2, 0, 1]))
        for c in fan.maximal_cones:
            link = vertex_link_surface(fan, c)
            results.append((f"link {vertex_name(fan, c)} rational sphere", link.rational_sphere))
    else:
        for c in fan.maximal_cones:
            link = build_link5_complex(fan, c)
            name = vertex_name(fan, c)
            results.append((f"link {name} dd = 0", link.complex.dd_is_zero()))
            results.append((f"link {name} betti formula",
                            tuple(link.betti()) == link5_betti_formula(link.f_x1)))
            trunc = moore_truncate_link(link)
            results.append((f"link {name} truncation",
                            trunc.betti() == link.betti()[:3] + [0]))
        partial_sixfold_operators(fan)
        results.append(("sixfold rank identities", True))
        policy = _policy(fan, args.b)
        report = build_report(fan, policy)
        for c in report.checks:
            results.append((f"{c.name} ({c.lhs} vs {c.rhs})" if c.status != "n/a" else
                            f"{c.name} (n/a)", c.ok))
    for name, ok in results:
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}\n")
    return 0 if all(ok for _, ok in results) else 1


def cmd_demo(args, out) -> int:
    out.write(serialize_fan_file(builtin(args.builtin)))
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric-betti",
                                description="Exact Betti tables of compact toric varieties.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def file_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", metavar="FILE", help="fan file, or - for stdin")
        sp.add_argument("--normalize", action="store_true",
                        help="divide non-primitive rays by their gcd")
        sp.add_argument("--deep-check", action="store_true",
                        help="also test random directions for coverage")
        return sp

    file_cmd("validate", "validate a fan")
    sp = file_cmd("analyze", "H, IH and HI tables")
    sp.add_argument("--b", default="auto", help="auto | h3zero | symbolic | INT")
    sp.add_argument("--output", choices=("text", "json"), default="text")
    sp = file_cmd("links", "homology of singularity links")
    sp.add_argument("--vertex", help="maximal cone index or label")
    sp.add_argument("--integral", action="store_true", help="integral sphere tests")
    sp.add_argument("--output", choices=("text", "json"), default="text")
    sp = file_cmd("truncate", "Moore truncation of a vertex link")
    sp.add_argument("--vertex", required=True, help="maximal cone index or label")
    sp.add_argument("--output", choices=("text", "json"), default="text")
    sp = file_cmd("check", "run every consistency check")
    sp.add_argument("--b", default="auto", help="auto | h3zero | symbolic | INT")
    sp = sub.add_parser("demo", help="print a built-in fan file")
    sp.add_argument("--builtin", required=True, choices=sorted(BUILTINS))
    return p


COMMANDS = {"validate": cmd_validate, "analyze": cmd_analyze, "links": cmd_links,
            "truncate": cmd_truncate, "check": cmd_check, "demo": cmd_demo}


def run_command(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    _setup_logging()
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        err.write(f"error: {e}\n")
        return 2
    except FanParseError as e:
        err.write(f"error: {e.kind}: {e}\n")
        return 1
    except FanError as e:
        ids = f" (ids {list(e.ids)})" if e.ids else ""
        err.write(f"error: {e.condition}: {e}{ids}\n")
        return 1
    except (OutOfRange, PolicyInapplicable, NegativeBetti) as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return 1
    except BoundaryError as e:
        err.write(f"error: {e}\n")
        return 1


def main() -> None:
    sys.exit(run_command())

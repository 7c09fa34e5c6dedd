"""Fan file reading and writing.

The primary format is JSON::

    {"dimension": 3, "rays": [[0,0,1], ...], "cones": [[0,1,2], ...], "name": "p3"}

with optional ``cone_labels`` (one string or null per cone).  A terse
line-oriented alternative is also accepted::

    # comment
    dimension 3
    name p3
    ray 0 0 1
    cone 0 1 2 apex
"""

from __future__ import annotations

import bisect
import json
import re
from dataclasses import dataclass

from .fan import Fan, validate_fan

ALLOWED_KEYS = ("dimension", "rays", "cones", "name", "cone_labels")


class FanParseError(ValueError):
    kind = "ParseError"

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 path: str | None = None):
        self.message, self.line, self.col, self.path = message, line, col, path
        where = f"line {line}, column {col}" if line is not None else "input"
        if path:
            where += f" ({path})"
        super().__init__(f"{where}: {message}")

    def to_dict(self) -> dict:
        return {"condition": self.kind, "line": self.line, "col": self.col, "path": self.path,
                "message": self.message}


class FanSyntaxError(FanParseError):
    kind = "SyntaxError"


class NonIntegerEntry(FanParseError):
    kind = "NonIntegerEntry"


class DuplicateRay(FanParseError):
    kind = "DuplicateRay"


class IndexOutOfRange(FanParseError):
    kind = "IndexOutOfRange"


class SchemaError(FanParseError):
    kind = "SchemaError"


@dataclass(frozen=True)
class FanFile:
    dimension: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[int, ...], ...]
    name: str | None = None
    cone_labels: tuple[str | None, ...] | None = None

    def to_fan(self, *, normalize: bool = False, deep_check: bool = False) -> Fan:
        return validate_fan(self.dimension, self.rays, self.cones, name=self.name,
                            labels=self.cone_labels, normalize=normalize, deep_check=deep_check)


# --- value positions ----------------------------------------------------

_TOKEN = re.compile(r'\s*(?:(")|(-?\d[\w.+-]*)|([\[\]{}:,])|(true|false|null))')


def _positions(text: str) -> dict[str, tuple[int, int]]:
    """Map JSON paths like ``rays[2][1]`` to (line, column) of the value."""
    out: dict[str, tuple[int, int]] = {}
    stack: list[list] = []  # [kind, key-or-index, expecting_key]
    i = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def lc(pos):
        ln = bisect.bisect_right(line_starts, pos)
        return ln, pos - line_starts[ln - 1] + 1

    def path():
        parts = []
        for kind, key, _ in stack:
            if key is None:
                continue
            parts.append(f"[{key}]" if kind == "list" else ("." if parts else "") + str(key))
        return "".join(parts)

    def mark(pos):
        if stack and not (stack[-1][0] == "obj" and stack[-1][2]):
            out.setdefault(path(), lc(pos))

    decoder = json.JSONDecoder()
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            s, end = decoder.raw_decode(text, start)
            if stack and stack[-1][0] == "obj" and stack[-1][2]:
                stack[-1][1] = s
            else:
                mark(start)
            i = end
            continue
        tok = m.group(m.lastindex)
        i = m.end()
        if tok == "{":
            mark(start)
            stack.append(["obj", None, True])
        elif tok == "[":
            mark(start)
            stack.append(["list", 0, False])
        elif tok in "]}":
            stack.pop()
        elif tok == ":":
            stack[-1][2] = False
        elif tok == ",":
            if stack[-1][0] == "list":
                stack[-1][1] += 1
            else:
                stack[-1][2] = True
        else:
            mark(start)
    return out


def _parse_json(text: str) -> FanFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FanSyntaxError(e.msg, e.lineno, e.colno) from None
    pos = _positions(text)

    def err(cls, msg, p):
        line, col = pos.get(p, (None, None))
        raise cls(msg, line, col, p)

    if not isinstance(data, dict):
        raise SchemaError("top level must be an object", 1, 1)
    for k in data:
        if k not in ALLOWED_KEYS:
            err(SchemaError, f"unknown field {k!r}", k)
    for k in ("dimension", "rays", "cones"):
        if k not in data:
            raise SchemaError(f"missing field {k!r}", 1, 1)

    def integer(v, p):
        if isinstance(v, bool) or not isinstance(v, int):
            err(NonIntegerEntry, f"expected an integer, got {json.dumps(v)}", p)
        return v

    dim = integer(data["dimension"], "dimension")
    if dim not in (2, 3):
        err(SchemaError, f"dimension must be 2 or 3, got {dim}", "dimension")

    def int_lists(key):
        v = data[key]
        if not isinstance(v, list):
            err(SchemaError, f"{key} must be a list", key)
        rows = []
        for i, row in enumerate(v):
            if not isinstance(row, list):
                err(SchemaError, f"{key}[{i}] must be a list", f"{key}[{i}]")
            rows.append(tuple(integer(x, f"{key}[{i}][{j}]") for j, x in enumerate(row)))
        return rows

    rays = int_lists("rays")
    cones = int_lists("cones")
    for i, r in enumerate(rays):
        if len(r) != dim:
            err(SchemaError, f"ray has {len(r)} coordinates, expected {dim}", f"rays[{i}]")
    seen = {}
    for i, r in enumerate(rays):
        if r in seen:
            err(DuplicateRay, f"ray {i} repeats ray {seen[r]}", f"rays[{i}]")
        seen[r] = i
    for i, c in enumerate(cones):
        for j, x in enumerate(c):
            if not 0 <= x < len(rays):
                err(IndexOutOfRange, f"ray index {x} out of range 0..{len(rays) - 1}",
                    f"cones[{i}][{j}]")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        err(SchemaError, "name must be a string", "name")
    labels = data.get("cone_labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(cones) or any(
                x is not None and not isinstance(x, str) for x in labels):
            err(SchemaError, "cone_labels must list one string or null per cone", "cone_labels")
        labels = tuple(labels)
    return FanFile(dim, tuple(rays), tuple(cones), name, labels)


def _parse_lines(text: str) -> FanFile:
    dim = None
    name = None
    rays: list[tuple[int, ...]] = []
    cones: list[tuple[int, ...]] = []
    labels: list[str | None] = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        words = line.split()
        if not words:
            continue
        col = line.index(words[0]) + 1
        head, args = words[0], words[1:]

        def ints(items, first_col):
            out = []
            for w in items:
                if not re.fullmatch(r"[+-]?\d+", w):
                    c = line.index(w, first_col - 1) + 1
                    raise NonIntegerEntry(f"expected an integer, got {w!r}", ln, c)
                out.append(int(w))
            return out

        if head == "dimension":
            (dim,) = ints(args[:1], col) or [None]
            if dim not in (2, 3) or len(args) != 1:
                raise SchemaError("expected 'dimension 2' or 'dimension 3'", ln, col)
        elif head == "name":
            name = line.strip()[len("name"):].strip()
        elif head == "ray":
            v = tuple(ints(args, col))
            if v in rays:
                raise DuplicateRay(f"ray repeats ray {rays.index(v)}", ln, col)
            rays.append(v)
        elif head == "cone":
            label = None
            if args and not re.fullmatch(r"[+-]?\d+", args[-1]):
                label = args[-1]
                args = args[:-1]
            cones.append(tuple(ints(args, col)))
            labels.append(label)
        else:
            raise FanSyntaxError(f"unknown keyword {head!r}", ln, col)
    if dim is None:
        raise SchemaError("missing 'dimension' line", 1, 1)
    for i, r in enumerate(rays):
        if len(r) != dim:
            raise SchemaError(f"ray {i} has {len(r)} coordinates, expected {dim}")
    for i, c in enumerate(cones):
        if any(not 0 <= x < len(rays) for x in c):
            raise IndexOutOfRange(f"cone {i} references a missing ray")
    return FanFile(dim, tuple(rays), tuple(cones), name or None,
                   tuple(labels) if any(labels) else None)


def parse_fan_file(text: str) -> FanFile:
    stripped = text.lstrip()
    if not stripped:
        raise FanSyntaxError("empty input", 1, 1)
    if stripped[0] in "{[":
        return _parse_json(text)
    return _parse_lines(text)


def serialize_fan_file(ff: FanFile) -> str:
    parts = [f'  "dimension": {ff.dimension}']
    if ff.name is not None:
        parts.append(f'  "name": {json.dumps(ff.name)}')
    rows = ",\n".join(f"    {json.dumps(list(r))}" for r in ff.rays)
    parts.append(f'  "rays": [\n{rows}\n  ]')
    rows = ",\n".join(f"    {json.dumps(list(c))}" for c in ff.cones)
    parts.append(f'  "cones": [\n{rows}\n  ]')
    if ff.cone_labels is not None:
        parts.append(f'  "cone_labels": {json.dumps(list(ff.cone_labels))}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


BUILTINS: dict[str, FanFile] = {
    "p3": FanFile(3, ((0, 0, 1), (1, 0, 0), (0, 1, 0), (-1, -1, -1)),
                  ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)), "p3"),
    "p1p1": FanFile(2, ((1, 0), (0, 1), (-1, 0), (0, -1)),
                    ((0, 1), (1, 2), (2, 3), (0, 3)), "p1p1"),
    "p1cubed": FanFile(3, ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)),
                       tuple((a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)), "p1cubed"),
    "pyramid": FanFile(3, ((1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (0, 0, -1)),
                       ((0, 1, 2, 3), (0, 1, 4), (1, 2, 4), (2, 3, 4), (0, 3, 4)), "pyramid",
                       ("apex", None, None, None, None)),
}


def builtin(name: str) -> FanFile:
    try:
        return BUILTINS[name]
    except KeyError:
        raise KeyError(f"no built-in fan {name!r}; choose from {sorted(BUILTINS)}") from None

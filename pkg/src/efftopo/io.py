"""The ``.ea`` text format, DOT export and JSON reports.

A document is line oriented; ``#`` starts a comment::

    effectalgebra C2
    elements 0 a 1
    zero 0
    one 1
    sum a a 1

``sum x y z`` declares ``x ⊕ y = z`` and implies ``y ⊕ x = z``.  Sums with
zero are implicit.  :func:`serialize_ea` writes the canonical form: elements
in index order, one line per unordered pair with the smaller name first,
lines sorted, zero sums omitted.
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

from .core import EffectAlgebra, RawTable, covers, validate
from .errors import ConflictingSum, ParseError
from .laws import FLAG_KEYS, TOPOLOGY_KEYS, Analysis, LawReport


@dataclass(frozen=True)
class EaDocument:
    name: str
    elements: Tuple[str, ...]
    zero: str
    one: str
    sums: Tuple[Tuple[str, str, str], ...]   # one triple per unordered pair, zero sums included

    def to_raw(self) -> RawTable:
        idx = {e: i for i, e in enumerate(self.elements)}
        sums = {}
        for a, b, c in self.sums:
            sums[(idx[a], idx[b])] = sums[(idx[b], idx[a])] = idx[c]
        return RawTable(len(self.elements), self.elements, idx[self.zero], idx[self.one], sums)


def _tokens(line):
    """Split on whitespace, keeping 1-based columns."""
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def parse_ea(text: str) -> EaDocument:
    name = elements = zero = one = None
    known = {}
    declared = {}   # unordered pair -> (value, line, col)
    lineno = 0
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw_line.split("#", 1)[0])
        if not toks:
            continue
        (word, col), args = toks[0], toks[1:]

        def ident(tok):
            if elements is None:
                raise ParseError(lineno, tok[1], "'elements' must precede references to elements")
            if tok[0] not in known:
                raise ParseError(lineno, tok[1], f"unknown element {tok[0]!r}")
            return tok[0]

        def arity(k):
            if len(args) != k:
                raise ParseError(lineno, col, f"'{word}' takes {k} argument(s), got {len(args)}")

        if word == "effectalgebra":
            if name is not None:
                raise ParseError(lineno, col, "duplicate 'effectalgebra' line")
            arity(1)
            name = args[0][0]
        elif word == "elements":
            if elements is not None:
                raise ParseError(lineno, col, "duplicate 'elements' line")
            if not args:
                raise ParseError(lineno, col, "'elements' needs at least one identifier")
            for tok, c in args:
                if tok in known:
                    raise ParseError(lineno, c, f"duplicate element {tok!r}")
                known[tok] = len(known)
            elements = tuple(tok for tok, _ in args)
        elif word in ("zero", "one"):
            arity(1)
            if (zero if word == "zero" else one) is not None:
                raise ParseError(lineno, col, f"duplicate '{word}' line")
            value = ident(args[0])
            if word == "zero":
                zero = value
            else:
                one = value
        elif word == "sum":
            arity(3)
            a, b, c = (ident(t) for t in args)
            key = tuple(sorted((a, b), key=known.get))
            prev = declared.get(key)
            if prev is not None and prev[0] != c:
                raise ConflictingSum(lineno, col, f"{a}⊕{b} declared as {prev[0]} on line {prev[1]} and as {c}")
            declared.setdefault(key, (c, lineno, col))
        else:
            raise ParseError(lineno, col, f"unknown directive {word!r}")

    end = lineno + 1
    for label, value in (("effectalgebra", name), ("elements", elements), ("zero", zero), ("one", one)):
        if value is None:
            raise ParseError(end, 1, f"missing '{label}' line")
    for x in elements:
        key = tuple(sorted((zero, x), key=known.get))
        prev = declared.get(key)
        if prev is not None and prev[0] != x:
            raise ConflictingSum(prev[1], prev[2], f"{zero}⊕{x} must be {x}")
        declared[key] = (x, 0, 0)
    sums = tuple(sorted((a, b, v[0]) for (a, b), v in declared.items()))
    return EaDocument(name, elements, zero, one, sums)


def load_ea(path) -> EffectAlgebra:
    doc = parse_ea(Path(path).read_text(encoding="utf-8"))
    return validate(doc.to_raw(), name=doc.name)


def _token_name(name):
    return "_".join(str(name).split()) or "E"


def format_table(raw: RawTable, name: str = "E") -> str:
    """Canonical text of a (symmetric) table; used for validated and rejected tables alike."""
    names = raw.names
    lines = [
        f"effectalgebra {_token_name(name)}",
        "elements " + " ".join(names),
        f"zero {names[raw.zero]}",
        f"one {names[raw.one]}",
    ]
    pairs = set()
    for (a, b), c in raw.sums.items():
        if raw.zero in (a, b):
            continue
        x, y = sorted((names[a], names[b]))
        pairs.add((x, y, names[c]))
    lines += [f"sum {x} {y} {z}" for x, y, z in sorted(pairs)]
    return "\n".join(lines) + "\n"


def serialize_ea(E: EffectAlgebra) -> str:
    return format_table(E.table, E.name)


def _dot_quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(E: EffectAlgebra) -> str:
    """Hasse diagram of the derived order; sharp elements are double circles."""
    sharp = E.sharp_mask if E.is_lattice else 0
    lines = [f"digraph {_dot_quote(E.name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in range(E.n):
        extra = ", shape=doublecircle" if sharp >> x & 1 else ""
        lines.append(f"  n{x} [label={_dot_quote(E.names[x])}{extra}];")
    for a, b in covers(E):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON reports

_NULLABLE_BOOL = {"type": ["boolean", "null"]}
_TOPOLOGY_SUMMARY = {
    "type": ["object", "null"],
    "properties": {
        "open_count": {"type": "integer", "minimum": 1},
        "hausdorff": {"type": "boolean"},
        "discrete": {"type": "boolean"},
    },
    "required": ["open_count", "hausdorff", "discrete"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "instance": {"type": "string"},
        "flags": {
            "type": "object",
            "properties": {k: _NULLABLE_BOOL for k in FLAG_KEYS},
            "required": list(FLAG_KEYS),
            "additionalProperties": False,
        },
        "topologies": {
            "type": "object",
            "properties": {k: _TOPOLOGY_SUMMARY for k in TOPOLOGY_KEYS},
            "required": list(TOPOLOGY_KEYS),
            "additionalProperties": False,
        },
        "laws": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "skipped"]},
                    "witness": {"type": "object"},
                    "reason": {"type": "string"},
                },
                "required": ["id", "status"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["instance", "flags", "topologies", "laws"],
    "additionalProperties": False,
}


def report_document(report) -> dict:
    if isinstance(report, LawReport):
        report = Analysis(report.instance, laws=report.entries)
    laws = []
    for e in report.laws:
        item = {"id": e.law_id, "status": e.status}
        if e.witness is not None:
            item["witness"] = e.witness
        if e.reason is not None:
            item["reason"] = e.reason
        laws.append(item)
    return {
        "instance": report.instance,
        "flags": {k: report.flags.get(k) for k in FLAG_KEYS},
        "topologies": {k: report.topologies.get(k) for k in TOPOLOGY_KEYS},
        "laws": laws,
    }


def report_json(report) -> str:
    """Byte-stable JSON for an :class:`Analysis` or :class:`LawReport` (timings omitted)."""
    return json.dumps(report_document(report), indent=2, ensure_ascii=False) + "\n"

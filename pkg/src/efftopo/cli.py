"""Command-line interface: ``efftopo <command> ...``.

Exit codes: 0 success, 1 usage, 2 invalid input, 3 size guard hit,
4 at least one law reported ``fail``.
"""
import argparse
import sys
from pathlib import Path

from . import guards, topo
from .catalog import build, parse_spec
from .enumeration import enumerate_all
from .errors import (
    AxiomViolation,
    ConflictingSum,
    InvalidTable,
    ParseError,
    SizeGuardExceeded,
    UnsupportedStructure,
)
from .io import export_dot, load_ea, report_json, serialize_ea
from .laws import analyze

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_GUARD, EXIT_LAW = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser():
    p = _Parser(prog="efftopo", description="Finite effect algebras and their order topologies.")
    p.add_argument("--size-guard", type=_positive, metavar="N",
                   help="carrier bound for exhaustive subset scans and open-set families")
    p.add_argument("--quiet", action="store_true", help="only set the exit code")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("verify", help="check the axioms for a .ea file")
    s.add_argument("file")

    s = sub.add_parser("analyze", help="structural flags, topologies and laws")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("topology", help="one of the three topologies")
    s.add_argument("file")
    s.add_argument("--which", choices=("i", "o", "id"), default="o")
    s.add_argument("--compare", action="store_true", help="relate it to the other two")

    s = sub.add_parser("laws", help="run the law harness on a file or every .ea file in a directory")
    s.add_argument("path")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("gen", help="print a catalogue instance as a .ea document")
    g = s.add_subparsers(dest="kind", metavar="kind", parser_class=_Parser)
    g.required = True
    g.add_parser("chain").add_argument("n", type=_positive)
    g.add_parser("boolean").add_argument("k", type=_positive)
    for kind in ("hsum", "product"):
        gp = g.add_parser(kind)
        gp.add_argument("left", help="spec such as chain:3 or hsum(chain:2,boolean:2)")
        gp.add_argument("right")

    s = sub.add_parser("enumerate", help="list all effect algebras up to a size")
    s.add_argument("--max", type=_positive, required=True, dest="max_n")

    s = sub.add_parser("export-dot", help="Hasse diagram in DOT")
    s.add_argument("file")
    return p


_TOPOLOGIES = {"i": ("interval", topo.interval_topology),
               "o": ("order", topo.order_topology),
               "id": ("frink", topo.frink_ideal_topology)}


def _fmt_set(E, mask):
    return "{" + ", ".join(E.names[x] for x in range(E.n) if mask >> x & 1) + "}"


def _cmd_verify(args, out):
    E = load_ea(args.file)
    out.append(f"{E.name}: valid effect algebra with {E.n} elements")
    return EXIT_OK


def _cmd_analyze(args, out):
    E = load_ea(args.file)
    a = analyze(E)
    if args.json:
        out.append(report_json(a).rstrip("\n"))
    else:
        out.append(f"{E.name} ({E.n} elements)")
        for k, v in a.flags.items():
            out.append(f"  {k:13} {'n/a' if v is None else v}")
        for k, v in a.topologies.items():
            out.append(f"  tau_{k:9} " + ("n/a" if v is None else
                       f"opens={v['open_count']} hausdorff={v['hausdorff']} discrete={v['discrete']}"))
        out.extend(_law_lines(a.laws))
    return EXIT_LAW if any(e.status == "fail" for e in a.laws) else EXIT_OK


def _cmd_topology(args, out):
    E = load_ea(args.file)
    label, make = _TOPOLOGIES[args.which]
    T = make(E)
    out.append(f"{E.name}: {label} topology, {T.open_count()} open sets, "
               f"hausdorff={topo.is_hausdorff(T)} discrete={topo.is_discrete(T)}")
    for x in range(E.n):
        out.append(f"  U({E.names[x]}) = {_fmt_set(E, T.nbhd[x])}")
    if args.compare:
        for key, (other_label, other_make) in _TOPOLOGIES.items():
            if key == args.which:
                continue
            try:
                S = other_make(E)
            except UnsupportedStructure as exc:
                out.append(f"  vs {other_label}: n/a ({exc})")
                continue
            if topo.topologies_equal(T, S):
                rel = "equal"
            elif topo.finer_than(T, S):
                rel = "strictly finer"
            elif topo.finer_than(S, T):
                rel = "strictly coarser"
            else:
                rel = "incomparable"
            out.append(f"  vs {other_label}: {rel}")
    return EXIT_OK


def _law_lines(entries):
    lines = []
    for e in entries:
        extra = ""
        if e.witness is not None:
            extra = f"  witness={e.witness}"
        elif e.reason:
            extra = f"  ({e.reason})"
        lines.append(f"  {e.law_id:18} {e.status}{extra}")
    return lines


def _cmd_laws(args, out):
    path = Path(args.path)
    files = sorted(path.glob("*.ea")) if path.is_dir() else [path]
    if not files:
        raise _UsageError(f"no .ea files in {path}")
    code = EXIT_OK
    for f in files:
        # one buffer per file, so a failure in one file never interleaves with another
        buf = []
        try:
            report = analyze(load_ea(f))
        except (ParseError, InvalidTable) as exc:
            buf.append(f"{f}: invalid: {exc}")
            code = max(code, EXIT_INVALID)
            out.append("\n".join(buf))
            continue
        if args.json:
            buf.append(report_json(report).rstrip("\n"))
        else:
            buf.append(f"{f}: {report.instance}")
            buf.extend(_law_lines(report.laws))
        if any(e.status == "fail" for e in report.laws):
            code = EXIT_LAW
        out.append("\n".join(buf))
    return code


def _cmd_gen(args, out):
    if args.kind == "chain":
        spec = f"chain:{args.n}"
    elif args.kind == "boolean":
        spec = f"boolean:{args.k}"
    else:
        spec = f"{args.kind}({args.left},{args.right})"
    try:
        parsed = parse_spec(spec)
    except ValueError as exc:
        raise _UsageError(str(exc))
    out.append(serialize_ea(build(parsed)).rstrip("\n"))
    return EXIT_OK


def _cmd_enumerate(args, out):
    found = enumerate_all(args.max_n)
    for E in found:
        out.append(f"{E.name}  elements={E.n}  lattice={E.is_lattice}")
    out.append(f"total {len(found)}")
    return EXIT_OK


def _cmd_export_dot(args, out):
    out.append(export_dot(load_ea(args.file)).rstrip("\n"))
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "analyze": _cmd_analyze,
    "topology": _cmd_topology,
    "laws": _cmd_laws,
    "gen": _cmd_gen,
    "enumerate": _cmd_enumerate,
    "export-dot": _cmd_export_dot,
}


def _diagnostic(exc):
    if isinstance(exc, ParseError):
        return f"parse error at line {exc.line}, column {exc.col}: {exc.message}"
    if isinstance(exc, AxiomViolation):
        return f"invalid: axiom ({exc.axiom}) fails, witness {exc.witness}"
    return f"invalid: {exc}"


def cli_main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage().rstrip(), file=stderr)
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:   # --help
        return EXIT_OK if not exc.code else EXIT_USAGE

    overrides = {}
    if args.size_guard is not None:
        overrides = {"subsets": args.size_guard, "topology": args.size_guard}
    out = []
    try:
        with guards.size_limits(**overrides):
            code = _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(f"efftopo: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ParseError, ConflictingSum, InvalidTable) as exc:
        print(_diagnostic(exc), file=stderr)
        return EXIT_INVALID
    except UnsupportedStructure as exc:
        print(f"unsupported: {exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read input: {exc}", file=stderr)
        return EXIT_INVALID
    except SizeGuardExceeded as exc:
        print(f"size guard: {exc}", file=stderr)
        return EXIT_GUARD
    if out and not args.quiet:
        print("\n".join(out), file=stdout)
    return code


def main():
    sys.exit(cli_main())

"""Command-line filters over the library.

States and channels travel as JSON on stdin/stdout; sweeps and evolution
traces are emitted as CSV. Errors go to stderr as one JSON line and the exit
status is nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import entanglement as ent
from . import linalg4 as la
from .channels import ChannelFormatError, evolve_trace, loads_channel
from .pauli import PauliParseError, parse
from .subalgebra import canonicalize, enumerate_centers, export_fano_graph, fano
from .xstate import (
    GVector,
    InvalidStateError,
    PatternError,
    StateFormatError,
    dumps_state,
    g_from_rho,
    is_x_pattern,
    loads_state,
    make_bell,
    make_random_x,
    make_werner,
    project_to_x,
    rho_from_g,
    validate,
)


class CLIError(Exception):
    def __init__(self, kind: str, message: str, **extra):
        super().__init__(message)
        self.kind = kind
        self.extra = extra


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("usage", message)
        sys.exit(2)


def _emit_error(kind: str, message: str, **extra) -> None:
    rec = {"error": kind, "message": message}
    rec.update(extra)
    sys.stderr.write(json.dumps(rec) + "\n")


def _fmt(x: float) -> str:
    return format(float(x), ".16e")


def _center(text: str):
    try:
        c = parse(text)
    except PauliParseError as exc:
        raise CLIError("parse", str(exc)) from None
    if c.is_identity or c.phase != 0:
        raise CLIError("parse", f"center must be a nontrivial bare string, got {text!r}")
    return canonicalize(c)


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    p = Path(path)
    if not p.is_file():
        raise CLIError("io", f"no such file: {path}")
    return p.read_text()


def _write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_state(path: str | None) -> np.ndarray:
    rho = loads_state(_read_text(path))
    report = validate(rho)
    if not report.ok:
        raise CLIError("invalid_state", "; ".join(report.failures), report=report.to_dict())
    return rho


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# subcommands -----------------------------------------------------------------

def cmd_subalgebras(args) -> None:
    if args.action == "list":
        subs = enumerate_centers()
        if args.format == "json":
            recs = [{"center": str(s.center), "members": [str(m) for m in s.members],
                     "pairs": [list(p) for p in s.pairs]} for s in subs]
            print(json.dumps(recs))
        else:
            for s in subs:
                print(f"{s.center}: " + " ".join(str(m) for m in s.members)
                      + "  pairs " + " ".join(f"{a}-{b}" for a, b in s.pairs))
        return
    s = _center(args.center)
    f = fano(s)
    if args.graph:
        sys.stdout.write(export_fano_graph(f, s))
    elif args.format == "json":
        print(json.dumps({
            "center": s.name,
            "members": [str(e) for e in s.elements],
            "lines": [{"points": list(ln.points),
                       "type": "commuting" if ln.commuting else "anticommuting",
                       "orientation": list(ln.orientation) if ln.orientation else None}
                      for ln in f.lines],
        }))
    else:
        for ln in f.lines:
            pts = "{" + ",".join(map(str, ln.points)) + "}"
            if ln.commuting:
                print(f"{pts} commuting")
            else:
                a, b, c = ln.orientation
                print(f"{pts} anticommuting X{a}*X{b} = +i X{c}")


def cmd_xstate(args) -> None:
    if args.action == "make":
        s = _center(args.center)
        if args.bell is not None:
            try:
                rho = make_bell(args.bell)
            except ValueError as exc:
                raise CLIError("argument", str(exc)) from None
        elif args.werner is not None:
            try:
                rho = make_werner(args.werner)
            except ValueError as exc:
                raise CLIError("argument", str(exc)) from None
        else:
            rho = make_random_x(s, args.random)
        _write_text(dumps_state(rho) + "\n", args.output)
    elif args.action == "params":
        s = _center(args.center)
        rho = _read_state(args.input)
        g = g_from_rho(rho, s)
        out = g.to_dict()
        out["x_pattern"] = bool(is_x_pattern(rho, s, args.tol))
        _write_text(json.dumps(out) + "\n", args.output)
    elif args.action == "reconstruct":
        obj = json.loads(_read_text(args.input))
        try:
            g = GVector(np.asarray(obj["values"], dtype=float), _center(obj.get("center", "ZZ")))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CLIError):
                raise
            raise CLIError("format", f"malformed g-vector JSON: {exc}") from None
        rho = rho_from_g(g)
        report = validate(rho)
        if not report.ok:
            raise CLIError("invalid_state", "; ".join(report.failures), report=report.to_dict())
        _write_text(dumps_state(rho, g) + "\n", args.output)
    elif args.action == "project":
        s = _center(args.center)
        rho = project_to_x(_read_state(args.input), s)
        _write_text(dumps_state(rho) + "\n", args.output)
    elif args.action == "validate":
        rho = loads_state(_read_text(args.input))
        report = validate(rho)
        print(json.dumps(report.to_dict()))
        if not report.ok:
            raise CLIError("invalid_state", "; ".join(report.failures))


def _closed(rho, s, tol):
    if not is_x_pattern(rho, s, tol):
        raise PatternError(f"state is not invariant under the {s.name} subalgebra; "
                           f"run `xstate project --center {s.name}` first")
    sp = ent.spectrum_closed_form(g_from_rho(rho, s))
    return ent.concurrence_from_spectrum(sp), sp


def _entrywise(rho, s, tol):
    if not is_x_pattern(rho, s, tol):
        raise PatternError(f"state is not invariant under the {s.name} subalgebra; "
                           f"run `xstate project --center {s.name}` first")
    if s.name != "ZZ":
        rho = rho_from_g(ent.to_standard_frame(g_from_rho(rho, s)), "ZZ")
    # the pattern check above already used the caller's tolerance
    loose = max(tol, la.PATTERN_TOL)
    return ent.concurrence_entrywise(rho, loose), ent.spectrum_entrywise(rho, loose)


def cmd_concurrence(args) -> None:
    s = _center(args.center)
    rho = _read_state(args.input)
    methods = {"closed": _closed, "entrywise": _entrywise,
               "oracle": lambda r, s_, t: ent.concurrence_oracle(r)}
    names = list(methods) if args.method == "all" else [args.method]
    conc, spectra = {}, {}
    for name in names:
        c, sp = methods[name](rho, s, args.tol)
        conc[name] = float(c)
        spectra[name] = [float(x) for x in sp]
    if args.method != "all":
        out = {"method": args.method, "concurrence": conc[args.method]}
        if args.verbose:
            out["spectrum"] = spectra[args.method]
    else:
        dev = 0.0
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                dev = max(dev, abs(conc[a] - conc[b]),
                          float(np.abs(np.subtract(spectra[a], spectra[b])).max()))
        out = {"center": s.name, "concurrences": conc, "spectra": spectra, "max_deviation": dev}
    print(json.dumps(out))


def cmd_sweep(args) -> None:
    if args.steps is not None and args.steps < 2:
        raise CLIError("argument", "--steps must be at least 2")
    if args.kind == "werner":
        rows = ent.werner_sweep(args.steps)
        header = ["p", "C_closed", "C_entrywise", "C_oracle", "max_dev"]
        body = [[_fmt(r[h]) for h in header] for r in rows]
    else:
        s = _center(args.center)
        obj = json.loads(_read_text(args.g_path))
        if isinstance(obj, dict):
            s = _center(obj.get("center", s.name))
            obj = obj["values"]
        rows = ent.g_sweep(obj, s)
        header = ["index", "C_closed", "C_entrywise", "C_oracle", "max_dev"]
        body = [[str(r["index"])] + [_fmt(r[h]) for h in header[1:]] for r in rows]
    _write_text(_csv(header, body), args.output)


def cmd_evolve(args) -> None:
    if args.steps < 1:
        raise CLIError("argument", "--steps must be at least 1")
    ch = loads_channel(_read_text(args.channel))
    rho = _read_state(args.input)
    trace = evolve_trace(rho, ch, args.steps)
    header = ["step"] + [f"g{k}" for k in range(1, 8)] + ["concurrence"]
    body = [[str(t.step)] + [_fmt(x) for x in t.g] + [_fmt(t.concurrence)] for t in trace]
    _write_text(_csv(header, body), args.output)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="xstates", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sa = sub.add_parser("subalgebras", help="enumerate subalgebras and their Fano structure")
    sa_sub = sa.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sl = sa_sub.add_parser("list")
    sl.add_argument("--format", choices=("text", "json"), default="text")
    sf = sa_sub.add_parser("fano")
    sf.add_argument("--center", default="ZZ")
    sf.add_argument("--graph", action="store_true", help="graph-description text")
    sf.add_argument("--format", choices=("text", "json"), default="text")
    sa.set_defaults(func=cmd_subalgebras)

    xs = sub.add_parser("xstate", help="build, parametrize and project states")
    xs_sub = xs.add_subparsers(dest="action", required=True, parser_class=_Parser)
    mk = xs_sub.add_parser("make")
    grp = mk.add_mutually_exclusive_group(required=True)
    grp.add_argument("--bell", metavar="K", help="phi+, phi-, psi+ or psi-")
    grp.add_argument("--werner", metavar="P", type=float)
    grp.add_argument("--random", metavar="SEED", type=int)
    mk.add_argument("--center", default="ZZ")
    mk.add_argument("--output")
    for name in ("params", "reconstruct", "project", "validate"):
        c = xs_sub.add_parser(name)
        c.add_argument("--input")
        c.add_argument("--output")
        if name in ("params", "project"):
            c.add_argument("--center", default="ZZ")
        if name == "params":
            c.add_argument("--tol", type=float, default=la.PATTERN_TOL)
    xs.set_defaults(func=cmd_xstate)

    cc = sub.add_parser("concurrence", help="concurrence by closed form, entrywise or oracle")
    cc.add_argument("--method", choices=("closed", "entrywise", "oracle", "all"), default="oracle")
    cc.add_argument("--center", default="ZZ")
    cc.add_argument("--input")
    cc.add_argument("--tol", type=float, default=la.PATTERN_TOL)
    cc.add_argument("--verbose", action="store_true")
    cc.set_defaults(func=cmd_concurrence)

    sw = sub.add_parser("sweep", help="concurrence sweeps as CSV")
    sw_sub = sw.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    wr = sw_sub.add_parser("werner")
    wr.add_argument("--steps", type=int, default=101)
    wr.add_argument("--output")
    cu = sw_sub.add_parser("custom")
    cu.add_argument("--g-path", required=True)
    cu.add_argument("--center", default="ZZ")
    cu.add_argument("--output")
    cu.set_defaults(steps=None)
    sw.set_defaults(func=cmd_sweep)

    ev = sub.add_parser("evolve", help="iterate a channel and emit a CSV trace")
    ev.add_argument("--channel", required=True)
    ev.add_argument("--steps", type=int, required=True)
    ev.add_argument("--input")
    ev.add_argument("--output")
    ev.set_defaults(func=cmd_evolve)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CLIError as exc:
        _emit_error(exc.kind, str(exc), **exc.extra)
        return 1
    except json.JSONDecodeError as exc:
        _emit_error("format", f"invalid JSON: {exc}")
        return 1
    except (StateFormatError, ChannelFormatError) as exc:
        _emit_error("format", str(exc))
        return 1
    except (InvalidStateError, la.NotPSDError, la.NotHermitianError) as exc:
        _emit_error("invalid_state", str(exc))
        return 1
    except PatternError as exc:
        _emit_error("pattern", str(exc))
        return 1
    except ValueError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

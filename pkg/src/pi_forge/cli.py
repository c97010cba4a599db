"""Command-line front end: pi-forge verify | dims | cochar | gradings | check-identity."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .algebra import AlgebraSpec, builtin, load_spec
from .bases import load_basis
from .free import Mode, ParseError, format_monomial, format_polynomial, parse_polynomial
from .gradings import classification_table
from .identities import GeneratorNotIdentity, default_mode, is_identity, quotient_dim, verify_basis
from .multilinear import DegreeCapError, check_cap, gamma_dim, signatures
from .representation import cocharacter, expected_multiplicity

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def resolve_algebra(ref: str) -> AlgebraSpec:
    try:
        return builtin(ref)
    except KeyError:
        pass
    path = Path(ref)
    if not path.is_file():
        raise UsageError("unknown algebra %r (not a built-in name or a readable file)" % ref)
    try:
        return load_spec(path)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError("cannot read algebra file %s: %s" % (ref, exc)) from None


def _mode(args, spec: AlgebraSpec) -> Mode:
    if getattr(args, "mode", None):
        try:
            return Mode.parse(args.mode)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return default_mode(spec)


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError("cannot write %s: %s" % (out, exc)) from None
    else:
        sys.stdout.write(text)


def _table(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    return "".join("  ".join(str(x).rjust(w) for x, w in zip(r, widths)) + "\n" for r in [header, *rows])


def cmd_verify(args) -> int:
    spec = resolve_algebra(args.algebra)
    try:
        gs = load_basis(args.basis)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    except (ValueError, ParseError) as exc:
        raise UsageError("cannot parse basis %s: %s" % (args.basis, exc)) from None
    mode = Mode.parse(args.mode) if args.mode else gs.mode
    allow_unit = False if args.no_unit else None
    try:
        report = verify_basis(spec, gs.polynomials(), args.max_degree, mode, allow_unit=allow_unit)
    except GeneratorNotIdentity as exc:
        sys.stderr.write("generator %s is not an identity; witness %s\n"
                         % (format_polynomial(exc.generator, mode), exc.witness))
        return EXIT_FAIL
    text = {"json": report.to_json, "csv": report.to_csv, "text": report.to_text}[args.format]()
    _emit(text, args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _sym_split(counts: tuple[int, ...]) -> tuple[int, int]:
    # the first kind (even symmetric) is the one confined to commutators in proper polynomials
    return counts[0], sum(counts) - counts[0]


def cmd_dims(args) -> int:
    spec = resolve_algebra(args.algebra)
    mode = _mode(args, spec)
    check_cap(args.max_degree)
    rows = []
    for sig in signatures(mode, args.max_degree):
        n_sym, n_other = _sym_split(sig.counts)
        q = quotient_dim(spec, sig) if args.quotient else ""
        rows.append([str(sig), sig.total, math.factorial(sig.total), gamma_dim(n_sym, n_other), q])
    header = ["signature", "degree", "dimP", "dimGamma", "quotient"]
    if not args.quotient:
        header, rows = header[:-1], [r[:-1] for r in rows]
    _emit(_table(header, rows, args.format), args.out)
    return EXIT_PASS


def cmd_cochar(args) -> int:
    spec = resolve_algebra(args.algebra)
    mode = _mode(args, spec)
    check_cap(args.max_degree)
    rows, ok = [], True
    for sig in signatures(mode, args.max_degree):
        table = cocharacter(spec, sig)
        if not table.consistent:
            ok = False
        for r in table.results:
            exp = expected_multiplicity(spec.name, r.shapes)
            match = "" if exp is None else str(exp == r.multiplicity).lower()
            if exp is not None and exp != r.multiplicity:
                ok = False
            shapes = "|".join(str(s) for s in r.shapes)
            rows.append([shapes, r.multiplicity, "" if exp is None else exp, match])
    _emit(_table(["shapes", "multiplicity", "expected", "match"], rows, args.format), args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_gradings(args) -> int:
    if args.group.replace(" ", "").upper() not in ("Z2", "Z/2", "Z_2"):
        raise UsageError("only Z2 gradings are classified; got %r" % args.group)
    _emit(classification_table(), args.out)
    return EXIT_PASS


def cmd_check_identity(args) -> int:
    spec = resolve_algebra(args.algebra)
    mode = _mode(args, spec)
    try:
        p = parse_polynomial(args.polynomial, mode)
    except (ParseError, ValueError) as exc:
        raise UsageError("cannot parse polynomial: %s" % exc) from None
    res = is_identity(spec, p, mode)
    if res:
        _emit("identity: %s\n" % format_polynomial(p, mode), args.out)
        return EXIT_PASS
    wit = ", ".join("%s=%s" % (format_monomial((k,), mode), _element(v)) for k, v in (res.witness or {}).items())
    _emit("not an identity: %s\nwitness: %s\n" % (format_polynomial(p, mode), wit), args.out)
    return EXIT_FAIL


def _element(e) -> str:
    return "(" + ", ".join(str(c) for c in e.coeffs) + ")"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pi-forge", description="Polynomial identities of small matrix algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt="text", degree=True):
        p.add_argument("--algebra", required=True, help="built-in name or path to an algebra JSON file")
        if degree:
            p.add_argument("--max-degree", type=int, default=6)
        p.add_argument("--mode", help="override the variable mode (ungraded, graded, involution, gr-inv)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv", "text"), default=fmt)

    p = sub.add_parser("verify", help="check that a generator set spans all identities")
    common(p)
    p.add_argument("--basis", required=True, help="bundled:NAME or a JSON generator file")
    p.add_argument("--no-unit", action="store_true", help="do not substitute the unit into symmetric slots")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dims", help="multilinear and proper dimensions per signature")
    common(p)
    p.add_argument("--quotient", action="store_true", help="also compute the quotient by identities")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("cochar", help="cocharacter multiplicities")
    common(p, fmt="csv")
    p.set_defaults(func=cmd_cochar)

    p = sub.add_parser("gradings", help="classify elementary Z2 gradings")
    p.add_argument("--group", default="Z2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gradings)

    p = sub.add_parser("check-identity", help="decide whether a polynomial is an identity")
    common(p, degree=False)
    p.add_argument("polynomial")
    p.set_defaults(func=cmd_check_identity)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, DegreeCapError) as exc:
        sys.stderr.write("pi-forge: %s\n" % exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

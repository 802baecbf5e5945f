"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 validation error,
3 verification failure.  Errors print a message on stderr and never any JSON.
"""
from __future__ import annotations

import argparse
import sys

from quadpencil import __version__
from quadpencil.forms import FormError, QuadraticForm
from quadpencil.geometry import GeometryError, isotropic_subspace_Fq, witt_index_fq
from quadpencil.local import (
    REAL,
    LocalError,
    LocalPlace,
    local_point_search_intersection,
    rational_point_search,
    witt_index_local,
)
from quadpencil.pencil import Pencil, PencilError
from quadpencil.report import (
    ParseError,
    ValidationError,
    analyze,
    dumps,
    form_from_data,
    pencil_from_data,
    read_json,
)
from quadpencil.residues import ResidueContext, ResidueError, plane_criterion
from quadpencil.scalars import FiniteField, ScalarError
from quadpencil.verify import SUITES, dump_counterexamples, run_suites, summary_json

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_SUITE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _places(text: str) -> list[LocalPlace]:
    try:
        return [LocalPlace.parse(s) for s in text.split(",") if s.strip()]
    except LocalError as exc:
        raise UsageError(str(exc)) from exc


def _fq(text: str) -> FiniteField:
    p, _, k = text.partition("^")
    try:
        return FiniteField(int(p), int(k) if k else 1)
    except (ValueError, ScalarError) as exc:
        raise UsageError(f"bad field {text!r}: {exc}") from exc


def _load_pencil(path: str) -> Pencil:
    return pencil_from_data(read_json(path))


def _load_form_or_pencil(path: str):
    data = read_json(path)
    if isinstance(data, dict) and "gram" in data:
        return form_from_data(data)
    return pencil_from_data(data)


def _verdict_json(P: Pencil):
    try:
        return plane_criterion(ResidueContext(P))
    except (ResidueError, PencilError) as exc:
        raise ValidationError(str(exc)) from exc


# --------------------------------------------------------------------------
# commands; each returns (json object, exit code)

def cmd_analyze(args):
    places = _places(args.places) if args.places else None
    return analyze(_load_pencil(args.input), places).to_json(), EXIT_OK


def cmd_local(args):
    places = _places(args.primes) if args.primes else []
    if args.real or not places:
        places = [REAL] + [v for v in places if not v.is_real]
    places = sorted(set(places))
    obj = _load_form_or_pencil(args.input)
    forms = {"form": obj} if isinstance(obj, QuadraticForm) else {"F": obj.F, "G": obj.G}
    return {name: [witt_index_local(q, v).to_json() for v in places] for name, q in forms.items()}, EXIT_OK


def cmd_witt(args):
    q = form_from_data(read_json(args.input))
    places = _places(args.place)
    if len(places) != 1:
        raise UsageError("witt: --place takes exactly one place")
    v = places[0]
    return witt_index_local(q, v).to_json(), EXIT_OK


def cmd_planes(args):
    K = _fq(args.fq)
    obj = _load_form_or_pencil(args.input)
    q = obj if isinstance(obj, QuadraticForm) else obj.F
    try:
        qK = q.reduce_mod(K)
    except (ScalarError, ZeroDivisionError, FormError) as exc:
        raise ValidationError(f"cannot reduce mod {K.p}: {exc}") from exc
    try:
        V = isotropic_subspace_Fq(qK, args.m)
    except GeometryError as exc:
        raise ValidationError(str(exc)) from exc
    out = {"field": args.fq, "m": args.m, "witt_index": witt_index_fq(qK), "found": V is not None}
    if V is not None:
        out["basis"] = [[c.code for c in v] for v in V.basis]
    return out, EXIT_OK


def cmd_residues(args):
    v = _verdict_json(_load_pencil(args.input))
    return {"points": [r.to_json() for r in v.table]}, EXIT_OK


def cmd_plane_criterion(args):
    return _verdict_json(_load_pencil(args.input)).to_json(), EXIT_OK


def cmd_search(args):
    P = _load_pencil(args.input)
    if (args.height is None) == (args.prime is None):
        raise UsageError("search: give exactly one of --height or --prime")
    try:
        if args.height is not None:
            x = rational_point_search(P, args.height)
            return {"height": args.height, "point": None if x is None else list(x)}, EXIT_OK
        res = local_point_search_intersection(P, args.prime, args.precision)
    except LocalError as exc:
        raise ValidationError(str(exc)) from exc
    return {"prime": args.prime, **res.to_json()}, EXIT_OK


def cmd_verify(args):
    names = args.suites or sorted(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite {unknown[0]!r}; known: {', '.join(sorted(SUITES))}")
    if args.size < 1:
        raise UsageError("--size must be positive")
    results = run_suites(names, args.seed, args.size, args.jobs)
    out = summary_json(results, args.seed, args.size)
    if args.dump:
        dump_counterexamples(results, args.dump)
    return out, EXIT_OK if out["passed"] else EXIT_SUITE


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def globals_(suppress):
        # subcommands repeat the global flags; SUPPRESS keeps them from
        # clobbering values given before the subcommand
        g = _Parser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--seed", type=int, default=d(42), help="master seed (default 42)")
        g.add_argument("--jobs", type=int, default=d(1), help="parallel workers for verify")
        g.add_argument("--json-out", metavar="PATH", default=d(None), help="write the JSON result to PATH instead of stdout")
        return g

    common = globals_(True)
    parser = _Parser(prog="quadpencil", description="Exact analysis of pencils of quadrics over Q.", parents=[globals_(False)])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, takes_input=True):
        p = sub.add_parser(name, help=help_, parents=[common])
        if takes_input:
            p.add_argument("input", help="JSON input file")
        p.set_defaults(func=fn)
        return p

    p = add("analyze", cmd_analyze, "full report for a pencil")
    p.add_argument("--places", help="comma-separated places, e.g. inf,2,3,5")
    p = add("local", cmd_local, "Witt data at several places (form or pencil input)")
    p.add_argument("--primes", default="", help="comma-separated primes")
    p.add_argument("--real", action="store_true", help="include the real place")
    p = add("witt", cmd_witt, "Witt data of a single form at one place")
    p.add_argument("--place", default="inf")
    p = add("planes", cmd_planes, "totally isotropic subspace over F_q")
    p.add_argument("--fq", required=True, help="field size as p or p^k")
    p.add_argument("--m", type=int, required=True, help="projective dimension of the subspace")
    add("residues", cmd_residues, "residue table of F + tG")
    add("plane-criterion", cmd_plane_criterion, "plane-criterion verdict")
    p = add("search", cmd_search, "bounded rational or p-adic point search")
    p.add_argument("--height", type=int)
    p.add_argument("--prime", type=int)
    p.add_argument("--precision", type=int)
    p = add("verify", cmd_verify, "seeded verification suites", takes_input=False)
    p.add_argument("suites", nargs="*", help=f"suite names (default all): {', '.join(sorted(SUITES))}")
    p.add_argument("--size", type=int, default=1, help="case-count multiplier")
    p.add_argument("--dump", metavar="DIR", help="write failing cases to DIR")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        obj, code = args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, PencilError, FormError, GeometryError, LocalError, ResidueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = dumps(obj)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

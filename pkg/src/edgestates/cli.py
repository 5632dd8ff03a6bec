"""Command-line front end: ``edgestates {build,classify,sweep,pair}``.

Exit codes: 0 success, 2 invalid arguments or parameters, 3 I/O or unreadable input.
"""

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .certify import SearchConfig, classify, dual_face_membership
from .exceptions import EdgeStatesError, NotHermitianError
from .families import Family, FamilySpec, general_state, make_spec
from .files import (
    MatrixFileError,
    complex_to_json,
    parse_vector,
    read_matrix,
    report_to_document,
    write_matrix,
)
from .maps import phi_family
from .numlin import TolerancePolicy

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

SWEEP_COLUMNS = (
    "family", "lambda", "t", "s", "t_rank", "ppt", "pairing", "edge_verdict", "min_objective", "wall_ms",
)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _float_list(text):
    items = [x for x in text.split(",") if x.strip()]
    try:
        return [float(x) for x in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _build_parser():
    parser = argparse.ArgumentParser(prog="edgestates", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a family state and write it as JSON")
    b.add_argument("--family", required=True, choices=[k.value for k in Family])
    b.add_argument("--lambda", dest="lam", type=float, required=True)
    b.add_argument("--t", type=float, default=None)
    b.add_argument("--vectors", default=None, help="JSON file with xi, eta, zeta, alpha, beta, gamma (general family)")
    b.add_argument("--normalize", action="store_true", help="divide by the trace")
    b.add_argument("--out", required=True)

    def add_tolerance(p):
        p.add_argument("--rank-tol", type=float, default=TolerancePolicy.rank_rel_tol,
                       help="relative singular-value cutoff for numerical rank (default 1e-8)")

    c = sub.add_parser("classify", help="certify a matrix file")
    c.add_argument("matrix", help="MatrixFile (JSON)")
    c.add_argument("--map-lambda", type=float, default=None, help="also pair with phi_lambda for this lambda")
    c.add_argument("--restarts", type=int, default=300, help="edge-search restarts (default 300)")
    c.add_argument("--seed", type=int, default=0, help="base seed; restart k uses seed + k")
    add_tolerance(c)
    c.add_argument("--out", default=None, help="write a ReportFile (JSON)")

    s = sub.add_parser("sweep", help="classify the named families over a parameter grid (CSV)")
    s.add_argument("--families", required=True, help="comma list from 76,75,65,44,85")
    s.add_argument("--lambda-grid", required=True, type=_float_list, help="comma list of lambda values")
    s.add_argument("--t-grid", type=_float_list, default=None, help="comma list of t values (family 85)")
    s.add_argument("--restarts", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1, help="cells evaluated concurrently (rows keep input order)")
    add_tolerance(s)
    s.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("pair", help="evaluate the pairing with phi_lambda only")
    p.add_argument("matrix", help="MatrixFile (JSON)")
    p.add_argument("--map-lambda", type=float, required=True)
    p.add_argument("--out", default=None)
    return parser


def _tolerance(args):
    try:
        return TolerancePolicy(rank_rel_tol=args.rank_tol)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _config(args):
    try:
        return SearchConfig(restarts=args.restarts, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _load(path):
    try:
        return read_matrix(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None
    except MatrixFileError as exc:
        raise CliError(f"malformed matrix file {path}: {exc}", EXIT_IO) from None


def _write_json(path, doc):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from None


def _read_vectors(path, lam, t):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc})", EXIT_IO) from None
    try:
        vecs = {name: parse_vector(doc[name]) for name in ("xi", "eta", "zeta", "alpha", "beta", "gamma")}
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: missing or invalid vector ({exc})", EXIT_IO) from None
    return FamilySpec(Family.GENERAL, lam, t=t, **vecs)


def cmd_build(args):
    kind = Family.parse(args.family)
    if kind is Family.GENERAL:
        if args.vectors is None:
            raise CliError("the general family needs --vectors", EXIT_USAGE)
        spec = _read_vectors(args.vectors, args.lam, args.t)
    else:
        spec = make_spec(kind, args.lam, args.t)
    x = general_state(spec)
    if args.normalize:
        x = x.scaled(1.0 / x.trace().real)
    meta = {"family": kind.value, "lambda": spec.lam, "t": spec.t, "normalized": bool(args.normalize)}
    try:
        write_matrix(args.out, x, meta)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror or exc}", EXIT_IO) from None
    print(f"wrote {args.out} family={kind.value} lambda={spec.lam!r}" + (f" t={spec.t!r}" if spec.t else ""))
    return EXIT_OK


def _summary(report):
    return (
        f"ppt={str(report.ppt.is_ppt).lower()} s={report.s} t={report.t} "
        f"edge={report.edge.verdict.value} min_obj={report.edge.min_objective!r}"
    )


def cmd_classify(args):
    a, meta = _load(args.matrix)
    tol, cfg = _tolerance(args), _config(args)
    phi = phi_family(args.map_lambda) if args.map_lambda is not None else None
    try:
        report = classify(a, phi, cfg, tol)
    except NotHermitianError as exc:
        raise CliError(f"{args.matrix}: {exc}", EXIT_USAGE) from None
    print(_summary(report))
    if phi is not None:
        v = report.pairing_value
        print(f"pairing={v.real!r}{v.imag:+.17g}j dual_face_member={str(report.dual_face_member).lower()}")
    if args.out:
        doc = report_to_document(report, tol, cfg, __version__, source=args.matrix, metadata=meta)
        doc["map_lambda"] = args.map_lambda
        _write_json(args.out, doc)
    return EXIT_OK


def cmd_pair(args):
    a, _ = _load(args.matrix)
    phi = phi_family(args.map_lambda)
    value, member = dual_face_membership(a, phi)
    print(f"pairing={value.real!r}{value.imag:+.17g}j dual_face_member={str(member).lower()}")
    if args.out:
        _write_json(args.out, {
            "source": args.matrix,
            "map_lambda": args.map_lambda,
            "pairing_value": complex_to_json(value),
            "dual_face_member": member,
        })
    return EXIT_OK


def _sweep_cells(families, lambdas, ts):
    cells = []
    for kind in families:
        for lam in lambdas:
            if kind is Family.F85:
                cells.extend((kind, lam, t) for t in ts)
            else:
                cells.append((kind, lam, None))
    return cells


def sweep_row(kind, lam, t, cfg, tol):
    start = time.perf_counter()
    x = general_state(make_spec(kind, lam, t))
    report = classify(x, phi_family(lam), cfg, tol)
    wall = (time.perf_counter() - start) * 1e3
    return {
        "family": kind.value,
        "lambda": repr(float(lam)),
        "t": "" if t is None else repr(float(t)),
        "s": report.s,
        "t_rank": report.t,
        "ppt": str(report.ppt.is_ppt).lower(),
        "pairing": repr(report.pairing_value.real),
        "edge_verdict": report.edge.verdict.value,
        "min_objective": repr(report.edge.min_objective),
        "wall_ms": f"{wall:.1f}",
    }


def cmd_sweep(args):
    names = [x.strip() for x in args.families.split(",") if x.strip()]
    if not names:
        raise CliError("--families must name at least one family", EXIT_USAGE)
    families = [Family.parse(x) for x in names]
    if Family.GENERAL in families:
        raise CliError("the general family cannot be swept", EXIT_USAGE)
    if not args.lambda_grid:
        raise CliError("--lambda-grid is empty", EXIT_USAGE)
    if Family.F85 in families and not args.t_grid:
        raise CliError("family 85 needs --t-grid", EXIT_USAGE)
    if args.jobs < 1:
        raise CliError("--jobs must be >= 1", EXIT_USAGE)
    tol, cfg = _tolerance(args), _config(args)
    cells = _sweep_cells(families, args.lambda_grid, args.t_grid or [])
    # validate every cell before any work starts
    for kind, lam, t in cells:
        make_spec(kind, lam, t)
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(lambda c: sweep_row(*c, cfg, tol), cells))
    try:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror or exc}", EXIT_IO) from None
    for row in rows:
        print(f"{row['family']:>2} lambda={row['lambda']} t={row['t'] or '-'} s={row['s']} t_rank={row['t_rank']} "
              f"ppt={row['ppt']} edge={row['edge_verdict']}")
    return EXIT_OK


COMMANDS = {"build": cmd_build, "classify": cmd_classify, "sweep": cmd_sweep, "pair": cmd_pair}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"edgestates: error: {exc}", file=sys.stderr)
        return exc.code
    except EdgeStatesError as exc:
        print(f"edgestates: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""gagc command line: construct, verify, embed, search and selftest.

Exit codes: 0 every check passed, 1 a verification failed or a construction
could not be completed, 2 bad parameters or unmet hypotheses, 3 I/O errors
and malformed matrix files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Optional, Sequence

import numpy as np

from gagc import matfile
from gagc.codes import DEFAULT_SEED, GrsSpec, LinearCode, grs_matrix
from gagc.constructions import (
    Check,
    ConstructionError,
    ConstructionReport,
    PreconditionError,
    Timer,
    check_distance,
    check_dimension,
    check_mds,
    check_so,
    construct_elliptic,
    construct_hermitian,
    construct_hyper_elliptic,
    construct_line,
    criterion_check,
    embed_report,
    eval_set_t3,
    eval_sets_t7,
    h_coefficient,
    residues_match,
    search_params,
)
from gagc.gf import make_field

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2, 3

T7_PARAMS = {
    1: ("a", "w", "t"),
    2: ("t",),
    3: ("t",),
    4: ("t", "a"),
    5: ("x1", "x2", "r", "a"),
    6: ("m", "r", "a"),
}


class UsageError(Exception):
    pass


def resolve_seed(cli_seed: Optional[int]) -> int:
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get("GAGC_SEED")
    if env is None or env.strip() == "":
        return DEFAULT_SEED
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"GAGC_SEED={env!r} is not an integer") from None


def _field(p: int, h: int):
    try:
        return make_field(p, h)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise PreconditionError(f"{args.theorem} needs {' '.join(missing)}")


def _write_report(report: dict[str, Any], path: Optional[str]) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _column_metadata(code: LinearCode, report: ConstructionReport) -> dict[str, str]:
    plan = report.plan
    assert plan is not None
    return {
        "theorem": report.theorem,
        "genus": str(plan.curve.genus),
        "deg": str(plan.k - 1),
        "alpha": matfile.join_ints(plan.points[:, 0]),
        "v": matfile.join_ints(plan.v),
    }


def cmd_construct(args: argparse.Namespace) -> int:
    ctx = _field(args.p, args.h)
    seed = resolve_seed(args.seed)
    _need(args, "k")
    th = args.theorem
    if th == "t3":
        _need(args, "t")
        es = eval_set_t3(ctx, args.e, args.t)
        code, report = construct_line(ctx, es, args.k, args.e, args.mds_mode, seed)
    elif th == "t5":
        _need(args, "n")
        code, report = construct_elliptic(ctx, args.e, args.variant, args.n, args.k,
                                          args.distance_mode, seed)
    elif th == "t6":
        _need(args, "n")
        code, report = construct_hyper_elliptic(ctx, args.e, args.n, args.k,
                                                args.distance_mode, seed)
    else:
        _need(args, "case")
        if args.case not in T7_PARAMS:
            raise PreconditionError(f"case must be 1..6 (got {args.case})")
        names = T7_PARAMS[args.case]
        _need(args, *names)
        es = eval_sets_t7(ctx, args.e, args.case, **{n: getattr(args, n) for n in names})
        code, report = construct_hermitian(ctx, args.e, es, args.k, args.distance_mode, seed)
    if args.out:
        matfile.write(args.out, matfile.MatrixFile(code.gen, args.e, _column_metadata(code, report)))
    _write_report(report.to_dict(), args.report)
    return EXIT_OK if report.ok else EXIT_FAIL


def _grs_from_file(mf: matfile.MatrixFile) -> Optional[GrsSpec]:
    alpha, v = mf.ints("alpha"), mf.ints("v")
    genus = mf.int("genus")
    if alpha is None or v is None or (genus or 0) != 0:
        return None
    gamma = mf.int("gamma")
    try:
        return GrsSpec(mf.ctx, alpha, v, mf.matrix.rows, infinity=gamma)
    except ValueError as exc:
        raise matfile.MatrixFileError(f"inconsistent GRS metadata: {exc}") from None


def _criterion_from_file(mf: matfile.MatrixFile, e: int) -> Check:
    """Recompute the sufficient SO condition from the column metadata."""
    ctx = mf.ctx
    alpha, v = mf.ints("alpha"), mf.ints("v")
    genus, deg, gamma = mf.int("genus"), mf.int("deg"), mf.int("gamma")
    if alpha is None or v is None or genus is None or deg is None:
        return Check("fail", "unavailable", 0, "file carries no node/multiplier metadata")
    n = mf.matrix.cols
    n_fin = n - (gamma is not None)
    if len(alpha) != n_fin or len(v) != n_fin or 0 in v:
        raise matfile.MatrixFileError("alpha= and v= must list one nonzero entry per finite column")
    with Timer() as t:
        xs = np.asarray(alpha, dtype=np.int64)
        _, first = np.unique(xs, return_index=True)
        nodes = xs[np.sort(first)]
        ok = residues_match(ctx, e, xs, np.asarray(v, dtype=np.int64), nodes)
        pe = ctx.p**e
        if gamma is not None:
            ok = ok and genus == 0 and ctx.power(gamma, pe + 1) == ctx.neg(1)
            ok = ok and (pe + 1) * deg == n_fin - 1
        elif mf.extras.get("theorem") == "embed":
            # deg is the dimension of the input code, which had to sit in the line window
            ok = ok and genus == 0 and 1 <= deg <= (n + pe - 1) // (pe + 1)
            ok = ok and ((pe + 1) * deg < n - 1 or ctx.order % (n - 1) == 0)
        else:
            k = deg + 1
            ok = ok and criterion_check(ctx.p, e, genus, k, n, h_coefficient(n, genus, k), deg)
    return Check("pass" if ok else "fail", "degree+residues", t.millis)


def cmd_verify(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    mf = matfile.read(args.infile)
    e = mf.e if args.e is None else args.e
    if not 0 <= e < mf.ctx.h:
        raise PreconditionError(f"0 <= e <= h-1 (got e={e})")
    ctx = mf.ctx
    spec = _grs_from_file(mf)
    if spec is not None and not np.array_equal(grs_matrix(spec).data, mf.matrix.data):
        spec = None
    code = LinearCode(mf.matrix, spec)
    genus, deg = mf.int("genus"), mf.int("deg")
    n, rows = code.n, mf.matrix.rows
    bound = n - deg if deg is not None else n - rows + 1
    checks = {
        "galois_so": check_so(code, e),
        "dimension": check_dimension(code, rows),
    }
    if not genus:
        checks["mds"] = check_mds(code, args.mds_mode, seed)
    else:
        checks["mds"] = check_distance(code, bound, args.distance_mode, seed)
    checks["criterion"] = _criterion_from_file(mf, e)
    report = ConstructionReport(
        ctx.p, ctx.h, e, mf.extras.get("theorem", "unknown"),
        {"source": os.path.basename(args.infile)}, n, rows, bound, checks, seed,
    )
    _write_report(report.to_dict(), args.report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_embed(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    mf = matfile.read(args.infile)
    e = mf.e if args.e is None else args.e
    if mf.int("gamma") is not None:
        raise PreconditionError("input already carries an extra coordinate")
    spec = _grs_from_file(mf)
    if spec is None:
        raise PreconditionError("embedding needs a genus-0 file with alpha= and v= metadata")
    if not np.array_equal(grs_matrix(spec).data, mf.matrix.data):
        raise PreconditionError("matrix is not the GRS generator described by alpha= and v=")
    out, case, report = embed_report(LinearCode(mf.matrix, spec), e, args.mds_mode, seed)
    if args.out:
        extras = {
            "theorem": "embed",
            "case": str(case),
            "genus": "0",
            "deg": str(spec.k),
            "alpha": matfile.join_ints(spec.alpha),
            "v": matfile.join_ints(spec.v),
        }
        if out.grs.infinity is not None:
            extras["gamma"] = str(out.grs.infinity)
        matfile.write(args.out, matfile.MatrixFile(out.gen, e, extras))
    _write_report(report.to_dict(), args.report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_search(args: argparse.Namespace) -> int:
    ctx = _field(args.p, args.h)
    rows = search_params(ctx, args.e, args.theorem)
    if args.format == "json":
        sys.stdout.write(json.dumps([r.to_dict() for r in rows], indent=2) + "\n")
    else:
        sys.stdout.write("".join(r.line() + "\n" for r in rows))
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    from gagc import selftest

    seed = resolve_seed(args.seed)
    results = selftest.run(args.level, seed, stream=sys.stdout)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gagc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                       help="sampling seed (default: $GAGC_SEED or 0xA6C0DE)")

    modes = ("auto", "exhaustive", "sampled")

    c = sub.add_parser("construct", help="build a code and its verification report")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--h", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--theorem", choices=("t3", "t5", "t6", "t7"), required=True)
    c.add_argument("--case", type=int, help="Hermitian evaluation-set family, 1..6")
    c.add_argument("--variant", choices=("U1", "U2"), default="U1", help="elliptic node set")
    for name in ("t", "n", "k", "a", "w", "x1", "x2", "r", "m"):
        c.add_argument(f"--{name}", type=int)
    c.add_argument("--out", help="matrix file to write")
    c.add_argument("--report", help="report JSON path (default: stdout)")
    c.add_argument("--mds-mode", choices=modes, default="auto")
    c.add_argument("--distance-mode", choices=modes, default="auto")
    seed_flag(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="recheck a matrix file")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--e", type=int, help="Galois exponent (default: the file's e)")
    v.add_argument("--mds-mode", choices=modes, default="auto")
    v.add_argument("--distance-mode", choices=modes, default="auto")
    v.add_argument("--report")
    seed_flag(v)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("embed", help="enlarge a GRS-form SO code by one dimension")
    m.add_argument("--in", dest="infile", required=True)
    m.add_argument("--e", type=int)
    m.add_argument("--out")
    m.add_argument("--report")
    m.add_argument("--mds-mode", choices=modes, default="auto")
    seed_flag(m)
    m.set_defaults(func=cmd_embed)

    s = sub.add_parser("search", help="list admissible parameters and k-windows")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--e", type=int, required=True)
    s.add_argument("--theorem", choices=("t3", "t5", "t6", "t7"))
    s.add_argument("--format", choices=("table", "json"), default="table")
    s.set_defaults(func=cmd_search)

    t = sub.add_parser("selftest", help="run the invariant suites")
    t.add_argument("--level", choices=("quick", "full"), default="quick")
    seed_flag(t)
    t.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PreconditionError, UsageError) as exc:
        print(f"gagc: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConstructionError as exc:
        print(f"gagc: construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, matfile.MatrixFileError) as exc:
        print(f"gagc: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

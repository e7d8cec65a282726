"""Command-line front end.

Subcommands: census, encode, decode, bounds, goodsets, beta, verify.
Reports go to stdout as JSON (or CSV with --format csv); timing goes to
stderr unless --timing folds it into the record.  With a fixed seed the
stdout bytes of a completed run are identical for any --jobs value: work
is split into a fixed task list whose results merge in canonical order.

Exit codes: 0 success, 2 invalid arguments, 3 resource budget exceeded,
4 internal invariant violation or failed verification.

Every long flag can be defaulted through an environment variable with
prefix PAVINGS_ (e.g. PAVINGS_JOBS=4, PAVINGS_MAX_NODES=10000000).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from fractions import Fraction
from multiprocessing import get_context

from . import bounds as bnd
from . import census as cns
from . import encoding as enc
from . import goodsets as gds
from . import variational as var

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _env(name: str, cast, fallback):
    raw = os.environ.get(f"PAVINGS_{name}")
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"bad value for PAVINGS_{name}: {raw!r}")


def fmt_real(x: float) -> str:
    return f"{x:.15g}"


def fmt_fraction(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(record) + "\n")
    elif fmt == "csv":
        _emit_csv([record])
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _emit_csv(records: list[dict]) -> None:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if records:
        header = list(records[0].keys())
        writer.writerow(header)
        for rec in records:
            writer.writerow([
                json.dumps(rec.get(k)) if isinstance(rec.get(k), (dict, list))
                else ("" if rec.get(k) is None else rec.get(k))
                for k in header
            ])
    sys.stdout.write(out.getvalue())


def emit_reports(reports: list[bnd.BoundReport], fmt: str) -> None:
    records = [
        {
            "name": rep.name,
            "params": ";".join(f"{k}={v}" for k, v in rep.params.items()),
            "value": fmt_real(rep.value),
            "exact_ln": "" if rep.exact_ln is None else fmt_real(rep.exact_ln),
            "holds": "" if rep.holds is None else rep.holds,
        }
        for rep in reports
    ]
    if fmt == "csv":
        _emit_csv(records)
    else:
        for rec in records:
            sys.stdout.write(json.dumps(rec) + "\n")


def _budget(args) -> cns.Budget:
    return cns.Budget(args.max_nodes, args.max_seconds)


def _read_json_arg(value: str):
    if value == "-":
        return json.load(sys.stdin)
    return json.loads(value)


# ---------------------------------------------------------------------------
# subcommands


def cmd_census(args) -> int:
    kind = "paving"
    k = None
    if args.k is not None:
        kind, k = "sk", args.k
    if args.sparse:
        kind, k = "sparse", 0
    budget = _budget(args)
    t0 = time.monotonic()

    if args.dump:
        for m in cns.enumerate_paving(args.n, args.r, budget):
            sys.stdout.write(json.dumps([list(b) for b in m.block_tuples]) + "\n")
        return EXIT_OK

    if args.by_shadow:
        if kind == "paving":
            kind, k = "sparse", 0
        sc = _shadow_census(args, budget)
        record = {
            "schema": "pavings.shadow-census/1",
            "n": args.n, "r": args.r,
            "by_shadow_size": {str(a): str(c) for a, c in sorted(sc[0].items())},
            "nodes": str(sc[1]),
        }
    else:
        count, nodes = _plain_census(args, k, budget)
        record = {
            "schema": "pavings.census/1",
            "kind": kind,
            "n": args.n, "r": args.r, "k": k,
            "count": str(count),
            "nodes": str(nodes),
        }
    if args.timing:
        record["elapsed_ms"] = fmt_real(1000.0 * (time.monotonic() - t0))
    emit(record, args.format)
    return EXIT_OK


def _plain_census(args, k, budget) -> tuple[int, int]:
    if args.jobs > 1:
        ntasks = cns.split_tasks(args.n, args.r, k)
        if ntasks > 1:
            task_args = [
                (args.n, args.r, k, i, budget.max_nodes, budget.max_seconds, False)
                for i in range(ntasks)
            ]
            with get_context("fork").Pool(args.jobs) as pool:
                parts = pool.map(cns.run_task, task_args)
            count = sum(p[0] for p in parts)
            nodes = 1 + sum(p[1] for p in parts)
            if nodes > budget.max_nodes:
                raise cns.BudgetExceeded("node budget exceeded", nodes, count, 0.0)
            return count, nodes
    res = cns._run_count(args.n, args.r, k, budget)
    return res.count, res.nodes


def _shadow_census(args, budget) -> tuple[dict[int, int], int]:
    if args.jobs > 1:
        ntasks = cns.split_tasks(args.n, args.r, 0)
        if ntasks > 1:
            task_args = [
                (args.n, args.r, 0, i, budget.max_nodes, budget.max_seconds, True)
                for i in range(ntasks)
            ]
            with get_context("fork").Pool(args.jobs) as pool:
                parts = pool.map(cns.run_task, task_args)
            tally: dict[int, int] = {}
            for _, _, part_tally in parts:
                for a, c in part_tally.items():
                    tally[a] = tally.get(a, 0) + c
            nodes = 1 + sum(p[1] for p in parts)
            if nodes > budget.max_nodes:
                raise cns.BudgetExceeded("node budget exceeded", nodes, sum(tally.values()), 0.0)
            return tally, nodes
    sc = cns.census_by_shadow(args.n, args.r, budget)
    return sc.by_shadow_size, sc.nodes


def cmd_encode(args) -> int:
    blocks = _read_json_arg(args.blocks)
    m = cns.DPartition.from_blocks(args.n, args.r - 1, blocks)
    m.validate()
    encoding = enc.encode(m)
    record = {"schema": "pavings.encoding/1"}
    record.update(encoding.to_json_dict())
    emit(record, args.format)
    return EXIT_OK


def cmd_decode(args) -> int:
    v_sets = _read_json_arg(args.v)
    m = enc.decode(v_sets, args.n, args.r)
    record = {
        "schema": "pavings.dpartition/1",
        "n": m.n, "r": m.r,
        "blocks": [list(b) for b in m.block_tuples],
    }
    emit(record, args.format)
    return EXIT_OK


def cmd_bounds(args) -> int:
    reports: list[bnd.BoundReport] = []
    if args.integral_grid:
        reports.extend(bnd.integral_sweep())
    else:
        beta = None
        if args.with_beta:
            beta = var.compute_beta(args.quad_tol, args.root_tol).beta
        reports.extend(bnd.bound_mnr(args.n, args.r, ln_p=args.ln_p, beta=beta))
        ks = [args.k] if args.k is not None else [0]
        for k in ks:
            value = bnd.bound_sk(args.n, args.r, k)
            params = {"n": args.n, "r": args.r, "k": k}
            if args.compare_census:
                res = cns.count_sk(args.n, args.r, k, _budget(args))
                reports.append(bnd.compare_census("partial_designs_total", res.count, value, params))
            else:
                reports.append(bnd.BoundReport("partial_designs_total", params, value))
            if args.a is not None:
                reports.append(bnd.BoundReport(
                    "partial_designs_fixed_shadow",
                    {"n": args.n, "r": args.r, "k": k, "a": args.a},
                    bnd.bound_skA(args.n, args.r, k, args.a),
                ))
    emit_reports(reports, args.format)
    return EXIT_OK


def cmd_goodsets(args) -> int:
    if args.count_good:
        count = gds.count_good_exact(args.n, _budget(args))
        emit({"schema": "pavings.goodcount/1", "n": args.n,
              "count": str(count), "method": "backtracking"}, args.format)
        return EXIT_OK
    if args.fmax:
        if args.t is None:
            raise ValueError("--fmax requires --t")
        prof, value = gds.f_max(args.n, args.t)
        emit({"schema": "pavings.fmax/1", "n": args.n, "t": args.t,
              "z": list(prof.z), "value": fmt_real(value)}, args.format)
        return EXIT_OK
    if args.t is None:
        raise ValueError("goodsets requires --t (or --count-good / --fmax)")
    if args.method == "exact":
        res = gds.good_prob(args.n, args.t, "exact")
        record = {
            "schema": "pavings.goodprob/1",
            "n": args.n, "t": args.t, "method": "exact",
            "value": fmt_fraction(res.exact),
            "value_real": fmt_real(res.value),
            "stderr": None, "samples": None, "seed": None,
        }
    else:
        if args.samples <= 0:
            raise ValueError("samples must be positive")
        hits = 0
        chunk_sizes = gds.mc_chunks(args.samples)
        task_args = [(args.n, args.t, args.seed, idx, size)
                     for idx, size in enumerate(chunk_sizes)]
        if args.jobs > 1 and len(task_args) > 1:
            with get_context("fork").Pool(args.jobs) as pool:
                hits = sum(pool.map(gds.mc_chunk_successes, task_args))
        else:
            hits = sum(gds.mc_chunk_successes(a) for a in task_args)
        p = hits / args.samples
        se = math.sqrt(p * (1 - p) / args.samples)
        record = {
            "schema": "pavings.goodprob/1",
            "n": args.n, "t": args.t, "method": "monte_carlo",
            "value": fmt_real(p),
            "value_real": fmt_real(p),
            "stderr": fmt_real(se),
            "samples": args.samples,
            "seed": str(args.seed),
        }
    emit(record, args.format)
    return EXIT_OK


def cmd_beta(args) -> int:
    sol = var.compute_beta(args.quad_tol, args.root_tol)
    record = {
        "schema": "pavings.beta/1",
        "lambda_star": fmt_real(sol.lambda_star),
        "beta": fmt_real(sol.beta),
        "enclosure": [fmt_real(sol.enclosure[0]), fmt_real(sol.enclosure[1])],
        "quad_tol": fmt_real(sol.quad_tol),
        "root_tol": fmt_real(sol.root_tol),
        "evaluations": str(sol.evaluations),
    }
    emit(record, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    failures = 0
    checked = 0
    detail: dict[str, int] = {}

    def note(name: str, ok: bool) -> None:
        nonlocal failures
        detail[name] = detail.get(name, 0) + (not ok)
        if not ok:
            failures += 1

    if args.suite == "encoding":
        for m in cns.enumerate_paving(args.n, args.r, _budget(args)):
            checked += 1
            m.validate()
            note("roundtrip", enc.roundtrip_ok(m))
            rep = enc.check_encoding_lemmas(m)
            note("stable", rep.stable_ok)
            note("size", rep.size_ok)
            note("v0v1", rep.v0v1_ok)
            note("shadow_identity", rep.shadow_identity_ok)
            note("profile_tradeoff", bool(bnd.check_v0v1_tradeoff(m).holds))
    elif args.suite == "bounds":
        for rep in bnd.integral_sweep():
            checked += 1
            note("integral", bool(rep.holds))
        k = 0
        while args.r + k <= args.n - 1:
            res = cns.count_sk(args.n, args.r, k, _budget(args))
            value = bnd.bound_sk(args.n, args.r, k)
            rep = bnd.compare_census("partial_designs_total", res.count, value,
                                     {"n": args.n, "r": args.r, "k": k})
            checked += 1
            N = math.comb(args.n - args.r + 1, k + 1)
            note("census_bound", bool(rep.holds) if N >= 2 else True)
            k += 1
    elif args.suite == "goodsets":
        n = args.n
        tmax = math.floor(gds.size_budget(n))
        brute = gds.count_good_exact(n, _budget(args))
        note("count_formula", brute == gds.count_good_by_profiles(n))
        checked += 1
        for t in range(tmax + 1):
            checked += 1
            total = sum(gds.hypergeom_pmf(n, t, gds.MiddleProfile(n, z))
                        for z in _all_category_profiles(n, t))
            note("pmf_sums_to_one", total == 1)
    else:
        raise ValueError(f"unknown suite {args.suite!r}")

    record = {
        "schema": "pavings.verify/1",
        "suite": args.suite,
        "n": args.n, "r": args.r,
        "checked": str(checked),
        "failures": str(failures),
        "detail": {k: str(v) for k, v in detail.items()},
    }
    emit(record, args.format)
    return EXIT_OK if failures == 0 else EXIT_INVARIANT


def _all_category_profiles(n: int, t: int):
    """Profiles bounded by the full category sizes k_i = (i-1)(n-i)."""
    ks = [(i - 1) * (n - i) for i in range(2, n)]
    cur: list[int] = []

    def rec(idx: int, rem: int):
        if idx == len(ks):
            if rem == 0:
                yield tuple(cur)
            return
        if rem > sum(ks[idx:]):
            return
        for z in range(min(ks[idx], rem) + 1):
            cur.append(z)
            yield from rec(idx + 1, rem - z)
            cur.pop()

    yield from rec(0, t)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pavings",
        description="Exact censuses, window encodings, counting bounds, and "
                    "good-set probabilities for paving matroids.",
        epilog="Flag defaults can be set via environment variables with "
               "prefix PAVINGS_ (PAVINGS_SEED, PAVINGS_JOBS, PAVINGS_FORMAT, "
               "PAVINGS_SAMPLES, PAVINGS_QUAD_TOL, PAVINGS_ROOT_TOL, "
               "PAVINGS_MAX_NODES, PAVINGS_MAX_SECONDS).",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"),
                        default=_env("FORMAT", str, "json"))
    common.add_argument("--seed", type=int, default=_env("SEED", int, 0))
    common.add_argument("--jobs", type=int, default=_env("JOBS", int, 1))
    common.add_argument("--max-nodes", type=int,
                        default=_env("MAX_NODES", int, cns.DEFAULT_MAX_NODES))
    common.add_argument("--max-seconds", type=float,
                        default=_env("MAX_SECONDS", float, cns.DEFAULT_MAX_SECONDS))
    common.add_argument("--timing", action="store_true",
                        help="include elapsed_ms in the stdout record")

    tols = argparse.ArgumentParser(add_help=False)
    tols.add_argument("--quad-tol", type=float,
                      default=_env("QUAD_TOL", float, var.DEFAULT_QUAD_TOL))
    tols.add_argument("--root-tol", type=float,
                      default=_env("ROOT_TOL", float, var.DEFAULT_ROOT_TOL))

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common], help="count or list paving matroids")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, default=None,
                   help="restrict dependent hyperplanes to size r+k")
    p.add_argument("--sparse", action="store_true", help="shorthand for --k 0")
    p.add_argument("--by-shadow", action="store_true",
                   help="group sparse matroids by circuit-hyperplane shadow size")
    p.add_argument("--dump", action="store_true",
                   help="newline-delimited JSON block lists instead of a count")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("encode", parents=[common], help="window encoding of a matroid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--blocks", required=True,
                   help="JSON list of hyperplane element lists, or - for stdin")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="matroid from a window family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--v", required=True,
                   help="JSON list of r-subsets, or - for stdin")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("bounds", parents=[common, tols], help="evaluate counting bounds")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--a", type=int, default=None, help="fixed shadow size")
    p.add_argument("--ln-p", type=float, default=None,
                   help="log paving count for the matroid conversion")
    p.add_argument("--with-beta", action="store_true",
                   help="include the variational upper bracket (rank 3)")
    p.add_argument("--compare-census", action="store_true",
                   help="attach exact censuses where feasible")
    p.add_argument("--integral-grid", action="store_true",
                   help="sweep the integral comparison grid instead")
    p.set_defaults(func=cmd_bounds, format=_env("FORMAT", str, "csv"))

    p = sub.add_parser("goodsets", parents=[common], help="good-set probabilities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--method", choices=("exact", "mc"), default="exact")
    p.add_argument("--samples", type=int, default=_env("SAMPLES", int, 100_000))
    p.add_argument("--count-good", action="store_true", help="count all good sets")
    p.add_argument("--fmax", action="store_true",
                   help="discrete rate-function maximiser at --t")
    p.set_defaults(func=cmd_goodsets)

    p = sub.add_parser("beta", parents=[common, tols],
                       help="solve the variational constant")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=("encoding", "bounds", "goodsets"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except cns.BudgetExceeded as exc:
        sys.stdout.write(json.dumps({
            "schema": "pavings.partial/1",
            "error": "budget_exceeded",
            "message": str(exc),
            "nodes": str(exc.nodes),
            "partial_count": str(exc.partial_count),
        }) + "\n")
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except cns.InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, enc.NotEncodable, json.JSONDecodeError) as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

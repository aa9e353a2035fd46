"""Command-line entry point: gen, reduce, solve, verify, bounds.

Summaries go to stdout; documents go to files only. Exit codes: 0 all
verified, 1 unexpected falsification, 2 usage/limit/parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import gadgets, matching, model, solvers, verify

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_ERROR = 2


class UsageError(ValueError):
    pass


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _limits(args: argparse.Namespace) -> solvers.SolverLimits:
    return solvers.SolverLimits(max_items=args.max_items)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "e2":
        instance = matching.generate_e2(args.q, args.seed)
    else:
        if args.planted_size is None:
            raise UsageError("--planted-size is required for kind=planted")
        instance = matching.planted_instance(
            args.q, args.planted_size, args.extra, args.seed)
    report = matching.validate(instance, bound=2)
    _write(args.out, matching.serialize_3dm(instance))
    print(f"q={instance.q} T={report.tuple_count} e2_valid={report.e2_valid}")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    instance3dm = matching.deserialize_3dm(_read(args.infile))
    beta = (gadgets.default_beta(instance3dm) if args.beta == "auto"
            else int(args.beta))
    if args.mode == "pack":
        vinst = gadgets.build_packing_instance(instance3dm, beta)
    elif args.mode == "cover":
        vinst = gadgets.build_covering_instance(instance3dm, beta)
    else:
        if args.delta is None:
            raise UsageError("--delta is required for mode=skew")
        vinst = gadgets.build_skewed_instance(
            instance3dm, beta, Fraction(args.delta))
    _write(args.out, model.serialize_instance(vinst))
    p = vinst.params
    dummies = sum(1 for it in vinst.items if it.label.kind == "Dummy")
    extra = f" m={p['m']}" if "m" in p else ""
    print(f"mode={args.mode} q={p['q']} T={p['t_count']} r={p['r']} b={p['b']} "
          f"beta={beta}{extra} dummies={dummies} items={vinst.item_count}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    vinst = model.deserialize_instance(_read(args.infile))
    limits = _limits(args)
    if args.algo == "exact":
        if vinst.flavor == "cover":
            opt, solution = solvers.solve_vbc_exact(vinst, limits)
            objective = f"covers={opt}"
        else:
            opt, solution = solvers.solve_vbp_exact(vinst, limits)
            objective = f"bins={opt}"
    elif args.algo == "ff":
        solution = solvers.first_fit(vinst)
        objective = f"bins={len(solution.bins)}"
    elif args.algo == "ffd":
        solution = solvers.first_fit_decreasing(vinst)
        objective = f"bins={len(solution.bins)}"
    else:  # greedy-cover
        solution = solvers.greedy_cover(vinst)
        objective = f"covers={len(solution.covers)}"
    if isinstance(solution, model.PackingSolution):
        model.check_packing(vinst, solution)
    else:
        model.check_covering(vinst, solution)
    if args.out:
        _write(args.out, model.serialize_solution(solution))
    print(objective)
    return EXIT_OK


_FLAVOR_CLAIMS = {
    "pack": ("intcor", "binsize", "vectorcor"),
    "skew": ("skew_intcor", "skew_binsize", "skew_vectorcor", "skew_constants"),
    "cover": ("intcor", "cover_claim1_five_subsets", "cover_claim2_dummy_pair",
              "cover_claim3_single", "cover_tuple_correspondence"),
}


def _run_claims(vinst: model.VectorInstance, claims: list[str],
                budget: int) -> list[verify.LemmaReport]:
    gadget = gadgets.gadget_from_instance(vinst)
    reports: list[verify.LemmaReport] = []
    skew_cache = cover_cache = None
    for claim in claims:
        if claim == "intcor":
            reports.append(verify.check_integer_correspondence(gadget, budget))
        elif claim == "binsize":
            reports.append(verify.check_bin_size(vinst, budget))
        elif claim == "vectorcor":
            reports.append(verify.check_vector_correspondence(vinst, budget))
        elif claim.startswith("skew_"):
            if skew_cache is None:
                skew_cache = {r.claim_id: r
                              for r in verify.check_skewed_lemmas(vinst, gadget, budget)}
            reports.append(skew_cache[claim])
        elif claim.startswith("cover_"):
            if cover_cache is None:
                cover_cache = {r.claim_id: r
                               for r in verify.check_cover_claims(vinst, budget)}
            reports.append(cover_cache[claim])
        else:
            raise UsageError(f"unknown claim: {claim}")
    return reports


def cmd_verify(args: argparse.Namespace) -> int:
    expected_falsified = set(
        c for c in (args.expected_falsified or "").split(",") if c)
    if args.claims == "counterexample":
        if args.q is None:
            raise UsageError("--q is required for the counterexample claim")
        reports = [verify.counterexample_woeginger(args.q)]
    else:
        if args.infile is None:
            raise UsageError("--in is required")
        vinst = model.deserialize_instance(_read(args.infile))
        if args.claims == "all":
            claims = list(_FLAVOR_CLAIMS[vinst.flavor])
        else:
            claims = args.claims.split(",")
        reports = _run_claims(vinst, claims, args.budget)

    doc = {"format_version": model.FORMAT_VERSION,
           "reports": [verify.report_to_json(r) for r in reports]}
    if args.out:
        _write(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    failed = False
    for report in reports:
        expected = report.claim_id in expected_falsified
        ok = report.verdict == "verified" or (expected and report.verdict == "falsified")
        if not ok:
            failed = True
        print(f"{report.claim_id}: {report.verdict}"
              + (" (expected)" if expected and report.verdict == "falsified" else ""))
    return EXIT_FALSIFIED if failed else EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    results = verify.hardness_bounds(m_range=range(args.m_min, args.m_max + 1))
    doc = {
        "format_version": model.FORMAT_VERSION,
        "bounds": [
            {
                "name": r.name,
                "exact": model.render_rational(r.exact),
                "decimal": r.decimal,
                "reference": model.render_rational(r.reference),
                "strict": r.strict,
                "satisfied": r.satisfied,
            }
            for r in results
        ],
    }
    if args.out:
        _write(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for r in results:
            rel = ">" if r.strict else ">="
            status = "ok" if r.satisfied else "VIOLATED"
            print(f"{r.name}: {r.decimal} {rel} {model.render_rational(r.reference)} [{status}]")
    if not all(r.satisfied for r in results):
        return EXIT_FALSIFIED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vbgap",
        description="Instantiate, solve, and brute-force-verify gap reductions "
                    "from 3-dimensional matching to 2-dimensional vector bin "
                    "packing and covering.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a 3DM instance")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kind", choices=("e2", "planted"), default="e2")
    p.add_argument("--planted-size", type=int, default=None)
    p.add_argument("--extra", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="reduce a 3DM instance to a vector instance")
    p.add_argument("--mode", choices=("pack", "skew", "cover"), required=True)
    p.add_argument("--beta", default="auto")
    p.add_argument("--delta", default=None, help="rational like 2/5 (skew only)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="solve a vector instance")
    p.add_argument("--algo", choices=("exact", "ff", "ffd", "greedy-cover"),
                   default="exact")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--max-items", type=int, default=solvers.DEFAULT_MAX_ITEMS)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="verify lemma claims on an instance")
    p.add_argument("--claims", default="all",
                   help="comma-separated claim ids, 'all', or 'counterexample'")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--q", type=int, default=None,
                   help="ground-set size for the counterexample claim")
    p.add_argument("--expected-falsified", default="",
                   help="comma-separated claim ids allowed to be falsified")
    p.add_argument("--budget", type=int, default=verify.DEFAULT_BUDGET)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="evaluate the hardness bounds exactly")
    p.add_argument("--m-min", type=int, default=4)
    p.add_argument("--m-max", type=int, default=64)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)
    return parser


_USAGE_ERRORS = (
    UsageError,
    model.ParseError,
    model.InvariantError,
    gadgets.GadgetError,
    matching.SizeLimitError,
    matching.InfeasibleParametersError,
    solvers.SizeLimitError,
    solvers.InfeasibleItemError,
    verify.BudgetExceededError,
    ValueError,
)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error={exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

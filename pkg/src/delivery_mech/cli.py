"""Command-line front end.

Subcommands: solve (run one algorithm on an instance file), mechanize (run a
mechanism and report payments), audit (sweep a seeded corpus), gen (write
instance families), boc (collaboration-benefit ratios of one instance).

All numbers in outputs are exact rational strings; --decimal N adds rounded
decimal renderings alongside, clearly labeled.  Exit codes: 0 success,
1 invalid input, 2 resource cap exceeded.  DELIVERY_MECH_CAP overrides the
enumeration and oracle caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path

from . import analysis
from .figures import FIGURE_BUILDERS, figure_two_collaborative_solution
from .mechanism import (
    MECHANISM_KINDS,
    VCG_KINDS,
    Caps,
    outcome_to_obj,
    run_mechanism,
    utility,
)
from .model import (
    CapExceeded,
    DeliveryError,
    Instance,
    all_pairs_distances,
    cost_of,
    evaluate_cost,
    format_rational,
    instance_to_obj,
    load_instance,
    load_solution,
    load_weights,
    parse_rational,
    save_instance,
    save_solution,
    solution_to_obj,
    travel_distances,
    validate_solution,
)
from .solvers import (
    solve_ak,
    solve_am_basic,
    solve_am_improved,
    solve_apos,
    solve_astar,
    solve_oracle,
    solve_single_lonely,
    solve_single_optimal,
)

ALGORITHMS = (
    "apos",
    "astar",
    "am",
    "am-improved",
    "ak-exact",
    "ak-approx",
    "single-opt",
    "single-lonely",
    "oracle",
)

CHECKS = ("truthfulness", "vp", "frugality", "boc", "ratios")


def caps_from_env() -> Caps:
    raw = os.environ.get("DELIVERY_MECH_CAP")
    if raw is None:
        return Caps()
    cap = int(raw)
    return Caps(enum=cap, oracle=cap)


def _decimal_string(x: Fraction, places: int) -> str:
    scaled = x * 10**places
    whole = round(scaled)
    sign = "-" if whole < 0 else ""
    digits = str(abs(whole)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _write_json(obj, path) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _solve_dispatch(name, instance, dist, weights, caps, collaboration):
    if name == "apos":
        return solve_apos(instance, dist)
    if name == "astar":
        sol, _ = solve_astar(instance, dist, weights)
        return sol
    if name == "am":
        return solve_am_basic(instance, dist, weights, cap=caps.enum)
    if name == "am-improved":
        return solve_am_improved(instance, dist, weights, cap=caps.enum).solution
    if name in ("ak-exact", "ak-approx"):
        mode = "exact" if name == "ak-exact" else "approx"
        sol, _ = solve_ak(instance, dist, weights, scp_mode=mode, cap=caps.enum)
        return sol
    if name == "single-opt":
        return solve_single_optimal(instance, dist, weights)
    if name == "single-lonely":
        sol, _ = solve_single_lonely(instance, dist, weights)
        return sol
    if name == "oracle":
        return solve_oracle(instance, dist, weights, collaboration, cap=caps.oracle)
    raise ValueError(f"unknown algorithm {name!r}")


def cmd_solve(args) -> int:
    caps = caps_from_env()
    instance = load_instance(args.instance)
    weights = load_weights(args.weights) if args.weights else instance.true_weights()
    dist = all_pairs_distances(instance)
    sol = _solve_dispatch(args.algorithm, instance, dist, weights, caps, args.collaboration)
    report = validate_solution(instance, sol)
    if not report.feasible:
        raise DeliveryError(f"solver produced an infeasible solution: {report.reason}")
    breakdown = evaluate_cost(instance, sol, weights)
    obj = solution_to_obj(sol)
    obj["algorithm"] = args.algorithm
    obj["cost"] = {
        "per_agent": {str(a): format_rational(c) for a, c in breakdown.per_agent},
        "total": format_rational(breakdown.total),
    }
    if args.decimal is not None:
        obj["cost"]["total_decimal"] = _decimal_string(breakdown.total, args.decimal)
        obj["cost"]["decimal_note"] = f"rounded to {args.decimal} places; exact values are the rational strings"
    _write_json(obj, args.out)
    return 0


def cmd_mechanize(args) -> int:
    caps = caps_from_env()
    instance = load_instance(args.instance)
    reported = load_weights(args.reported) if args.reported else instance.true_weights()
    true_w = load_weights(args.true) if args.true else instance.true_weights()
    outcome = run_mechanism(args.mechanism, instance, reported, caps=caps)
    true_util = utility(outcome, true_w)
    obj = outcome_to_obj(outcome, true_utilities=true_util)
    if args.decimal is not None:
        obj["total_payment_decimal"] = _decimal_string(
            sum(outcome.payments.values(), Fraction(0)), args.decimal
        )
        obj["social_cost_decimal"] = _decimal_string(outcome.social_cost, args.decimal)
        obj["decimal_note"] = f"rounded to {args.decimal} places; exact values are the rational strings"
    _write_json(obj, args.out)
    return 0


def _audit_one(payload) -> tuple:
    """Worker: all requested checks for one corpus instance.

    Returns (seed, records, failures).  Must stay a module-level function so
    that multiprocessing can pick it up.
    """
    seed, gen_params, mechanisms, checks = payload
    instance = analysis.gen_random_instance(seed, **gen_params)
    corpus = [(seed, instance)]
    caps = caps_from_env()
    records = []
    failures = 0

    def add(rec, failed):
        nonlocal failures
        records.append(rec)
        if failed:
            failures += 1

    for kind in mechanisms:
        applicable = not (kind in ("single-opt", "single-lonely") and instance.m != 1)
        if "truthfulness" in checks and applicable:
            found = analysis.audit_truthfulness(corpus, kind, caps=caps)
            if not found:
                add(
                    {
                        "check": "truthfulness",
                        "instance_seed": seed,
                        "mechanism": kind,
                        "agent": None,
                        "result": "pass",
                    },
                    False,
                )
            for rec in found:
                # apos-naive witnesses are expected findings, not failures
                add(rec, rec["result"] == "violation")
        if "vp" in checks and applicable and kind != "apos-naive":
            found = analysis.audit_vp(corpus, kind, caps=caps)
            if not found:
                add(
                    {
                        "check": "vp",
                        "instance_seed": seed,
                        "mechanism": kind,
                        "agent": None,
                        "result": "pass",
                    },
                    False,
                )
            for rec in found:
                add(rec, True)

    if "frugality" in checks and instance.m == 1 and instance.k > 1:
        rep = analysis.audit_frugality(instance, caps=caps)
        bad = (not rep.removal_monotone) or (
            rep.monopoly_free
            and (
                rep.within_two_opt is False
                or rep.within_two_over_ln2 is False
                or rep.eq6_holds is False
            )
        )
        add(
            {
                "check": "frugality",
                "instance_seed": seed,
                "mechanism": None,
                "agent": None,
                "result": "violation" if bad else "pass",
                "witness": {
                    "opt": format_rational(rep.opt),
                    "total_payment_opt": format_rational(rep.total_opt),
                    "total_payment_lonely": format_rational(rep.total_lonely),
                    "monopoly_free": rep.monopoly_free,
                },
            },
            bad,
        )
    if "boc" in checks:
        rep = analysis.measure_boc(instance, caps=caps)
        bad = not (
            rep.ordered
            and rep.boc_star_at_most_two
            and rep.single_package_bound in (None, True)
        )
        add(
            {
                "check": "boc",
                "instance_seed": seed,
                "mechanism": None,
                "agent": None,
                "result": "violation" if bad else "pass",
                "witness": {
                    "boc": None if rep.boc is None else format_rational(rep.boc),
                    "boc_star": None if rep.boc_star is None else format_rational(rep.boc_star),
                },
            },
            bad,
        )
    if "ratios" in checks:
        rep = analysis.audit_ratios(instance, caps=caps)
        bad = not (
            rep.am_within_two_opt
            and rep.ak_within_nine_fifths_am
            and rep.ak_within_eighteen_fifths_opt
            and rep.apos_within_weight_bound
            and rep.astar_at_most_apos
            and rep.ak_exact_matches_am
        )
        add(
            {
                "check": "ratios",
                "instance_seed": seed,
                "mechanism": None,
                "agent": None,
                "result": "violation" if bad else "pass",
                "witness": {
                    "opt": format_rational(rep.opt),
                    "am": format_rational(rep.am),
                    "ak_approx": format_rational(rep.ak_approx),
                    "apos": format_rational(rep.apos),
                    "astar": format_rational(rep.astar),
                },
            },
            bad,
        )
    return seed, records, failures


def cmd_audit(args) -> int:
    mechanisms = args.mechanisms.split(",") if args.mechanisms else list(VCG_KINDS)
    for kind in mechanisms:
        if kind not in MECHANISM_KINDS:
            raise DeliveryError(f"unknown mechanism {kind!r}")
    checks = args.checks.split(",") if args.checks else ["truthfulness", "vp"]
    for c in checks:
        if c not in CHECKS:
            raise DeliveryError(f"unknown check {c!r}")
    gen_params = {"max_n": args.max_n, "ks": tuple(int(x) for x in args.ks.split(",")), "max_m": args.max_m}
    payloads = [
        (args.corpus_seed + i, gen_params, mechanisms, checks) for i in range(args.count)
    ]
    if args.jobs > 1:
        with Pool(args.jobs) as pool:
            results = pool.map(_audit_one, payloads)
    else:
        results = [_audit_one(p) for p in payloads]
    results.sort(key=lambda r: r[0])

    lines = []
    failures = 0
    for _, records, nfail in results:
        failures += nfail
        for rec in records:
            lines.append(json.dumps(rec))
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    print(
        f"audit: {len(payloads)} instances, {len(lines)} records, {failures} failures",
        file=sys.stderr,
    )
    return 1 if failures else 0


def cmd_gen(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if args.family == "path":
        inst = analysis.gen_path_family(args.k)
        path = outdir / f"path-k{args.k}.json"
        save_instance(inst, path)
        written.append(path)
    elif args.family == "monopoly":
        inst = analysis.gen_monopoly_example(
            parse_rational(args.eps), parse_rational(args.big), parse_rational(args.span)
        )
        path = outdir / "monopoly.json"
        save_instance(inst, path)
        written.append(path)
    elif args.family == "random":
        for i in range(args.count):
            seed = args.seed + i
            inst = analysis.gen_random_instance(
                seed, max_n=args.max_n, ks=tuple(int(x) for x in args.ks.split(",")), max_m=args.max_m
            )
            path = outdir / f"rand-seed{seed}.json"
            save_instance(inst, path)
            written.append(path)
    elif args.family == "figures":
        for name, builder in FIGURE_BUILDERS.items():
            path = outdir / f"{name}.json"
            save_instance(builder(), path)
            written.append(path)
        path = outdir / "fig2-collab-solution.json"
        save_solution(figure_two_collaborative_solution(), path)
        written.append(path)
    else:
        raise DeliveryError(f"unknown family {args.family!r}")
    for path in written:
        print(path)
    return 0


def cmd_boc(args) -> int:
    caps = caps_from_env()
    instance = load_instance(args.instance)
    rep = analysis.measure_boc(instance, caps=caps)
    obj = {
        "boc": None if rep.boc is None else format_rational(rep.boc),
        "boc_star": None if rep.boc_star is None else format_rational(rep.boc_star),
        "boc_at_most_boc_star": rep.ordered,
        "boc_star_at_most_two": rep.boc_star_at_most_two,
        "single_package_bound": rep.single_package_bound,
    }
    if args.decimal is not None and rep.boc is not None:
        obj["boc_decimal"] = _decimal_string(rep.boc, args.decimal)
        obj["boc_star_decimal"] = _decimal_string(rep.boc_star, args.decimal)
        obj["decimal_note"] = f"rounded to {args.decimal} places; exact values are the rational strings"
    _write_json(obj, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delivery-mech",
        description="Energy-optimal delivery by weighted agents: solvers, truthful mechanisms, audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one algorithm on an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--weights", help="JSON file of reported weights; defaults to the instance's")
    p.add_argument("--collaboration", choices=("allowed", "forbidden"), default="allowed")
    p.add_argument("--out", default="-")
    p.add_argument("--decimal", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("mechanize", help="run a mechanism and report payments")
    p.add_argument("--instance", required=True)
    p.add_argument("--mechanism", required=True, choices=MECHANISM_KINDS)
    p.add_argument("--reported", help="JSON file of reported weights")
    p.add_argument("--true", dest="true", help="JSON file of true weights for utilities")
    p.add_argument("--out", default="-")
    p.add_argument("--decimal", type=int)
    p.set_defaults(func=cmd_mechanize)

    p = sub.add_parser("audit", help="sweep a seeded random corpus")
    p.add_argument("--corpus-seed", type=int, default=1)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--mechanisms", help="comma list; defaults to all VCG kinds")
    p.add_argument("--checks", help=f"comma list from {','.join(CHECKS)}; default truthfulness,vp")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--ks", default="2,3")
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("gen", help="write instance families to a directory")
    p.add_argument("--family", required=True, choices=("path", "monopoly", "random", "figures"))
    p.add_argument("--k", type=int, default=10, help="path family size")
    p.add_argument("--eps", default="1", help="monopoly: cheap agent weight")
    p.add_argument("--L", dest="big", default="1000", help="monopoly: expensive agent weight")
    p.add_argument("--D", dest="span", default="1", help="monopoly: package distance")
    p.add_argument("--seed", type=int, default=1, help="random family base seed")
    p.add_argument("--count", type=int, default=10, help="random family size")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--ks", default="2,3")
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("boc", help="collaboration-benefit ratios of one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--decimal", type=int)
    p.set_defaults(func=cmd_boc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DeliveryError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Audit harness: truthfulness and participation sweeps, frugality reports,
collaboration-benefit measurements, and the instance families they run on.

Bounds involving 1/ln 2 are irrational; they are handled as exact rational
enclosures tight to better than 50 decimal digits, so that comparing an
exact rational ratio against them is itself exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .mechanism import (
    APOS_NAIVE,
    SINGLE_LONELY,
    SINGLE_OPT,
    VCG_KINDS,
    Caps,
    run_mechanism,
)
from .model import (
    AgentSpec,
    DistanceOracle,
    Graph,
    Instance,
    PackageSpec,
    Unsupported,
    all_pairs_distances,
    cost_of,
    travel_distances,
)
from .schedules import DEFAULT_ENUM_CAP
from .solvers import (
    lonely_costs,
    solve_am_basic,
    solve_apos,
    solve_astar,
    solve_ak,
    solve_oracle,
    solve_single_lonely,
    solve_single_optimal_full,
)
from .solvers.noc import am_best_schedule

DEFAULT_MISREPORT_FACTORS = (
    Fraction(0),
    Fraction(1, 8),
    Fraction(1, 2),
    Fraction(7, 8),
    Fraction(9, 8),
    Fraction(2),
    Fraction(8),
)


# ---------------------------------------------------------------------------
# Exact enclosures for 1/ln 2 and 2/ln 2


def ln2_interval(terms: int = 200) -> tuple:
    """(lo, hi) rationals with lo <= ln 2 <= hi.

    ln 2 = sum_{n>=1} 1/(n 2^n); the tail after N terms is below
    1/((N+1) 2^N).  With 200 terms the enclosure is ~1e-62 wide.
    """
    lo = Fraction(0)
    for n in range(1, terms + 1):
        lo += Fraction(1, n * 2**n)
    hi = lo + Fraction(1, (terms + 1) * 2**terms)
    return lo, hi


_LN2_LO, _LN2_HI = ln2_interval()


def one_over_ln2_interval() -> tuple:
    return 1 / _LN2_HI, 1 / _LN2_LO


def two_over_ln2_interval() -> tuple:
    return 2 / _LN2_HI, 2 / _LN2_LO


def at_most_one_over_ln2(ratio: Fraction) -> bool:
    """Accept iff the exact ratio is at most the enclosure's upper end."""
    return ratio <= one_over_ln2_interval()[1]


def at_most_two_over_ln2(ratio: Fraction) -> bool:
    return ratio <= two_over_ln2_interval()[1]


# ---------------------------------------------------------------------------
# Instance families


def gen_path_family(k: int) -> Instance:
    """A path of k unit edges; agent i sits at node i-1 with weight 1/(k+i);
    one package travels end to end."""
    if k < 1:
        raise ValueError("k must be >= 1")
    nodes = tuple(f"v{i}" for i in range(k + 1))
    edges = tuple((f"v{i}", f"v{i+1}", Fraction(1)) for i in range(k))
    agents = tuple(
        AgentSpec(id=i, start=f"v{i-1}", weight=Fraction(1, k + i)) for i in range(1, k + 1)
    )
    packages = (PackageSpec(id=1, source="v0", target=f"v{k}"),)
    return Instance(graph=Graph(nodes=nodes, edges=edges), agents=agents, packages=packages)


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def path_family_optimal_cost(k: int) -> Fraction:
    """H_{2k} - H_k, the closed-form optimum of the path family."""
    return harmonic(2 * k) - harmonic(k)


def path_family_lonely_cost(k: int) -> Fraction:
    """k/(k+1), the best single-agent cost of the path family."""
    return Fraction(k, k + 1)


def gen_monopoly_example(eps: Fraction, big: Fraction, span: Fraction) -> Instance:
    """Two co-located agents (weights eps <= big) and one package of length span.

    Both single-package mechanisms pay big*span while the optimum costs
    eps*span, so the payment-to-optimum ratio big/eps is unbounded.
    """
    eps, big, span = Fraction(eps), Fraction(big), Fraction(span)
    if eps > big:
        raise ValueError("need eps <= big")
    if span <= 0:
        raise ValueError("need span > 0")
    graph = Graph(nodes=("s", "t"), edges=(("s", "t", span),))
    agents = (AgentSpec(1, "s", eps), AgentSpec(2, "s", big))
    packages = (PackageSpec(1, "s", "t"),)
    return Instance(graph=graph, agents=agents, packages=packages)


def gen_random_instance(
    seed: int,
    max_n: int = 6,
    ks: Sequence[int] = (2, 3),
    max_m: int = 2,
) -> Instance:
    """Seeded random connected instance with small exact numbers.

    Random spanning tree plus extra edges, integer lengths 1..10, weights
    with numerator and denominator in 1..8, distinct agent starts.
    """
    rng = random.Random(seed)
    n = rng.randint(3, max_n)
    k = rng.choice([x for x in ks if x <= n])
    m = rng.randint(1, max_m)
    nodes = tuple(f"v{i}" for i in range(n))
    edges = []
    for i in range(1, n):
        edges.append((f"v{rng.randrange(i)}", f"v{i}", Fraction(rng.randint(1, 10))))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.25:
                edges.append((f"v{i}", f"v{j}", Fraction(rng.randint(1, 10))))
    starts = rng.sample(range(n), k)
    agents = tuple(
        AgentSpec(
            id=i + 1,
            start=f"v{starts[i]}",
            weight=Fraction(rng.randint(1, 8), rng.randint(1, 8)),
        )
        for i in range(k)
    )
    packages = []
    for j in range(m):
        src = rng.randrange(n)
        tgt = rng.randrange(n)
        while tgt == src:
            tgt = rng.randrange(n)
        packages.append(PackageSpec(id=j + 1, source=f"v{src}", target=f"v{tgt}"))
    return Instance(graph=Graph(nodes=nodes, edges=tuple(edges)), agents=agents, packages=tuple(packages))


@dataclass(frozen=True)
class AuditCorpus:
    entries: tuple  # of (seed, Instance)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def single_package(self) -> "AuditCorpus":
        return AuditCorpus(tuple((s, inst) for s, inst in self.entries if inst.m == 1))


def make_corpus(base_seed: int, count: int, **params) -> AuditCorpus:
    return AuditCorpus(
        tuple(
            (base_seed + i, gen_random_instance(base_seed + i, **params))
            for i in range(count)
        )
    )


# ---------------------------------------------------------------------------
# Truthfulness and voluntary participation


def _chosen_only(kind, instance, dist, reported, caps):
    """The kind's algorithm without the pivot runs (misreport sweeps only
    need the chosen solution; the pivot of the lying agent is fixed)."""
    from .mechanism import AK_APPROX, AK_EXACT, AM, ASTAR

    if kind == ASTAR:
        best, _ = solve_astar(instance, dist, reported)
        return best
    if kind == AM:
        sched, _ = am_best_schedule(instance, dist, reported, cap=caps.enum)
        from .schedules import realize_schedule

        return realize_schedule(instance, dist, sched)
    if kind in (AK_EXACT, AK_APPROX):
        mode = "exact" if kind == AK_EXACT else "approx"
        best, _ = solve_ak(instance, dist, reported, scp_mode=mode, cap=caps.enum)
        return best
    if kind == SINGLE_OPT:
        return solve_single_optimal_full(instance, dist, reported).solution
    if kind == SINGLE_LONELY:
        best, _ = solve_single_lonely(instance, dist, reported)
        return best
    if kind == APOS_NAIVE:
        return solve_apos(instance, dist)
    raise ValueError(f"unknown mechanism kind {kind!r}")


def audit_truthfulness(
    corpus: Iterable,
    kind: str,
    factors: Sequence[Fraction] = DEFAULT_MISREPORT_FACTORS,
    caps: Caps = Caps(),
) -> list:
    """Sweep the misreport grid; return violation (or witness) records.

    For the VCG kinds a record is a genuine truthfulness violation and the
    list must come back empty.  For apos-naive the records are the expected
    witnesses of the impossibility argument: the algorithm ignores weights,
    so under any payment rule that guarantees participation (the minimal one
    pays w'_i * d_i) an over-report strictly raises the agent's utility.
    """
    records = []
    for seed, instance in corpus:
        if instance.k <= 1:
            continue
        if kind in (SINGLE_OPT, SINGLE_LONELY) and instance.m != 1:
            continue
        truth = instance.true_weights()
        dist = all_pairs_distances(instance)

        if kind == APOS_NAIVE:
            chosen = solve_apos(instance, dist)
            d = travel_distances(instance, dist, chosen)
            for agent in instance.agents:
                if d[agent.id] == 0:
                    continue
                for f in factors:
                    if f <= 1:
                        continue
                    lie = truth[agent.id] * f
                    gain = (lie - truth[agent.id]) * d[agent.id]
                    if gain > 0:
                        records.append(
                            {
                                "check": "truthfulness",
                                "instance_seed": seed,
                                "mechanism": kind,
                                "agent": agent.id,
                                "result": "witness",
                                "witness": {
                                    "factor": str(f),
                                    "utility_gain_under_vp_floor": str(gain),
                                },
                            }
                        )
                        break
            continue

        outcome = run_mechanism(kind, instance, truth, caps=caps, dist=dist)
        u_truth = outcome.utilities  # truthful reports: evaluation == truth
        for agent in instance.agents:
            q = outcome.pivots[agent.id]
            for f in factors:
                lie = dict(truth)
                lie[agent.id] = truth[agent.id] * f
                chosen_lie = _chosen_only(kind, instance, dist, lie, caps)
                # With others truthful, u_i(lie) = Q_i - cost(chosen_lie, w).
                u_lie = q - cost_of(instance, dist, chosen_lie, truth)
                if u_lie > u_truth[agent.id]:
                    records.append(
                        {
                            "check": "truthfulness",
                            "instance_seed": seed,
                            "mechanism": kind,
                            "agent": agent.id,
                            "result": "violation",
                            "witness": {
                                "factor": str(f),
                                "utility_truth": str(u_truth[agent.id]),
                                "utility_lie": str(u_lie),
                            },
                        }
                    )
    return records


def audit_vp(corpus: Iterable, kind: str, caps: Caps = Caps()) -> list:
    """Truthful utilities must be >= 0 and the pivot solutions must cost at
    least the chosen one.  Returns violation records (empty for VCG kinds)."""
    records = []
    for seed, instance in corpus:
        if instance.k <= 1:
            continue
        if kind in (SINGLE_OPT, SINGLE_LONELY) and instance.m != 1:
            continue
        truth = instance.true_weights()
        dist = all_pairs_distances(instance)
        outcome = run_mechanism(kind, instance, truth, caps=caps, dist=dist)
        chosen_cost = outcome.social_cost
        for agent in instance.agents:
            if outcome.utilities[agent.id] < 0:
                records.append(
                    {
                        "check": "vp",
                        "instance_seed": seed,
                        "mechanism": kind,
                        "agent": agent.id,
                        "result": "violation",
                        "witness": {"utility": str(outcome.utilities[agent.id])},
                    }
                )
            alt = cost_of(instance, dist, outcome.pivot_solutions[agent.id], truth)
            if chosen_cost > alt:
                records.append(
                    {
                        "check": "vp-cost-inequality",
                        "instance_seed": seed,
                        "mechanism": kind,
                        "agent": agent.id,
                        "result": "violation",
                        "witness": {"chosen": str(chosen_cost), "deleted": str(alt)},
                    }
                )
    return records


# ---------------------------------------------------------------------------
# Frugality


@dataclass(frozen=True)
class FrugalityReport:
    opt: Fraction
    opt_minus: dict  # agent id -> Fraction
    lopt: Fraction
    lopt_minus: dict  # agent id -> Fraction
    payments_opt: dict
    payments_lonely: dict
    total_opt: Fraction
    total_lonely: Fraction
    ratio_opt: Fraction | None  # total/OPT, None when OPT = 0
    ratio_lonely: Fraction | None
    monopoly_free: bool
    removal_monotone: bool  # OPT <= OPT_{-i} and LOPT <= LOPT_{-i} for all i
    within_two_opt: bool | None  # asserted bounds, None when not monopoly-free
    within_two_over_ln2: bool | None
    eq6_holds: bool | None


def audit_frugality(instance: Instance, caps: Caps = Caps(), dist: DistanceOracle | None = None) -> FrugalityReport:
    if instance.m != 1:
        raise Unsupported("frugality audit needs exactly one package")
    if instance.k <= 1:
        raise Unsupported("frugality audit needs at least two agents")
    if dist is None:
        dist = all_pairs_distances(instance)
    truth = instance.true_weights()

    full = solve_single_optimal_full(instance, dist, truth)
    opt = full.cost
    opt_minus = {}
    for a in instance.agents:
        sub = instance.without_agent(a.id)
        sub_w = {x: w for x, w in truth.items() if x != a.id}
        opt_minus[a.id] = solve_single_optimal_full(sub, dist, sub_w).cost

    lon = lonely_costs(instance, dist, truth)
    lopt = min(lon.values())
    lopt_minus = {
        a.id: min(c for x, c in lon.items() if x != a.id) for a in instance.agents
    }

    out_opt = run_mechanism(SINGLE_OPT, instance, truth, caps=caps, dist=dist)
    out_lon = run_mechanism(SINGLE_LONELY, instance, truth, caps=caps, dist=dist)
    total_opt = sum(out_opt.payments.values(), Fraction(0))
    total_lonely = sum(out_lon.payments.values(), Fraction(0))

    monopoly_free = full.cost_two_plus is not None and full.cost_two_plus == opt
    removal_monotone = all(opt_minus[a] >= opt for a in opt_minus) and all(
        lopt_minus[a] >= lopt for a in lopt_minus
    )

    within_two = None
    within_ln2 = None
    eq6 = None
    if monopoly_free and opt > 0:
        within_two = total_opt <= 2 * opt
        within_ln2 = at_most_two_over_ln2(total_lonely / opt)
        d = travel_distances(instance, dist, full.solution)
        eq6 = all(
            opt_minus[aid] <= opt + truth[aid] * d[aid]
            for aid in d
            if d[aid] > 0
        )
    return FrugalityReport(
        opt=opt,
        opt_minus=opt_minus,
        lopt=lopt,
        lopt_minus=lopt_minus,
        payments_opt=out_opt.payments,
        payments_lonely=out_lon.payments,
        total_opt=total_opt,
        total_lonely=total_lonely,
        ratio_opt=(total_opt / opt) if opt > 0 else None,
        ratio_lonely=(total_lonely / opt) if opt > 0 else None,
        monopoly_free=monopoly_free,
        removal_monotone=removal_monotone,
        within_two_opt=within_two,
        within_two_over_ln2=within_ln2,
        eq6_holds=eq6,
    )


# ---------------------------------------------------------------------------
# Benefit of collaboration and approximation ratios


@dataclass(frozen=True)
class BocReport:
    boc: Fraction | None  # None when the optimum costs 0
    boc_star: Fraction | None
    ordered: bool  # BoC <= BoC*
    boc_star_at_most_two: bool
    single_package_bound: bool | None  # BoC <= 1/ln 2, m = 1 only


def measure_boc(instance: Instance, caps: Caps = Caps(), dist: DistanceOracle | None = None) -> BocReport:
    if dist is None:
        dist = all_pairs_distances(instance)
    truth = instance.true_weights()
    opt_sol = solve_oracle(instance, dist, truth, "allowed", cap=caps.oracle)
    opt = cost_of(instance, dist, opt_sol, truth)
    noc_sol = solve_oracle(instance, dist, truth, "forbidden", cap=caps.oracle)
    noc = cost_of(instance, dist, noc_sol, truth)
    _, star = am_best_schedule(instance, dist, truth, cap=caps.enum)
    if opt == 0:
        return BocReport(None, None, True, True, None)
    boc = noc / opt
    boc_star = star / opt
    live_single = len([p for p in instance.packages if p.source != p.target]) == 1
    return BocReport(
        boc=boc,
        boc_star=boc_star,
        ordered=boc <= boc_star,
        boc_star_at_most_two=boc_star <= 2,
        single_package_bound=at_most_one_over_ln2(boc) if live_single else None,
    )


@dataclass(frozen=True)
class RatioReport:
    opt: Fraction
    am: Fraction
    ak_exact: Fraction
    ak_approx: Fraction
    apos: Fraction
    astar: Fraction
    am_within_two_opt: bool
    ak_within_nine_fifths_am: bool
    ak_within_eighteen_fifths_opt: bool
    apos_within_weight_bound: bool
    astar_at_most_apos: bool
    ak_exact_matches_am: bool


def audit_ratios(instance: Instance, caps: Caps = Caps(), dist: DistanceOracle | None = None) -> RatioReport:
    """Worst-case bounds checked as properties against the exact oracle."""
    if dist is None:
        dist = all_pairs_distances(instance)
    truth = instance.true_weights()
    opt = cost_of(
        instance, dist, solve_oracle(instance, dist, truth, "allowed", cap=caps.oracle), truth
    )
    _, am = am_best_schedule(instance, dist, truth, cap=caps.enum)
    akx_sol, _ = solve_ak(instance, dist, truth, scp_mode="exact", cap=caps.enum)
    akx = cost_of(instance, dist, akx_sol, truth)
    aka_sol, _ = solve_ak(instance, dist, truth, scp_mode="approx", cap=caps.enum)
    aka = cost_of(instance, dist, aka_sol, truth)
    apos = cost_of(instance, dist, solve_apos(instance, dist), truth)
    if instance.k > 1:
        astar_sol, _ = solve_astar(instance, dist, truth)
        astar = cost_of(instance, dist, astar_sol, truth)
    else:
        astar = apos
    w = [a.weight for a in instance.agents]
    w_max, w_min = max(w), min(w)
    return RatioReport(
        opt=opt,
        am=am,
        ak_exact=akx,
        ak_approx=aka,
        apos=apos,
        astar=astar,
        am_within_two_opt=am <= 2 * opt,
        ak_within_nine_fifths_am=aka <= Fraction(9, 5) * am,
        ak_within_eighteen_fifths_opt=aka <= Fraction(18, 5) * opt,
        apos_within_weight_bound=apos * w_min <= 4 * w_max * opt,
        astar_at_most_apos=astar <= apos,
        ak_exact_matches_am=akx == am,
    )

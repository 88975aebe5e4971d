#!/usr/bin/env python3
"""Truthful mechanisms in action: selection, Clarke-pivot payments, and why
lying does not pay (plus the one algorithm for which no payment rule works).
"""

from fractions import Fraction

import delivery_mech as dm
from delivery_mech import analysis
from delivery_mech.figures import figure_four_left, figure_four_right, figure_three

# --- best-of-forests mechanism on the three-agent scenario -----------------
inst = figure_three()
out = dm.run_mechanism("astar", inst, inst.true_weights())
print("scenario with forest candidates costing (46, 46, 10, 160):")
print("  chosen social cost:", out.social_cost)
print("  payments:", {a: str(p) for a, p in sorted(out.payments.items())})
print("  (removing agent 2 unlocks the cheap solution, so agents 1 and 3")
print("   are paid their externality; agent 2 is idle and gets nothing)")
print()

# --- lying is never profitable ---------------------------------------------
truth = inst.true_weights()
agent = 3
for factor in (Fraction(1, 2), Fraction(2), Fraction(8)):
    lie = dict(truth)
    lie[agent] = truth[agent] * factor
    out_lie = dm.run_mechanism("astar", inst, lie)
    u_lie = dm.utility(out_lie, truth)[agent]
    u_truth = dm.utility(out, truth)[agent]
    print(f"agent {agent} reports {factor} * true weight: utility {u_lie} "
          f"(truthful: {u_truth}, gain {u_lie - u_truth})")
assert all(
    dm.utility(dm.run_mechanism('astar', inst, {**truth, agent: truth[agent] * f}), truth)[agent]
    <= dm.utility(out, truth)[agent]
    for f in analysis.DEFAULT_MISREPORT_FACTORS
)
print()

# --- the two single-package mechanisms and their payments ------------------
for name, builder in (("left", figure_four_left), ("right", figure_four_right)):
    inst = builder()
    rep = analysis.audit_frugality(inst)
    print(f"single-package example ({name}): optimum {rep.opt}")
    print(f"  optimal mechanism pays {rep.total_opt}, lonely mechanism pays {rep.total_lonely}")
print("neither mechanism is always cheaper: 51 > 48 on the left, 48 < 50 on the right")
print()

# --- monopoly: payments cannot be bounded against the optimum --------------
mono = analysis.gen_monopoly_example(Fraction(1), Fraction(1000), Fraction(1))
out = dm.run_mechanism("single-opt", mono, mono.true_weights())
print("monopoly family (cheap agent 1, expensive agent 2, both at the source):")
print("  optimum:", out.social_cost, " total payment:", sum(out.payments.values()))
print("  ratio equals the weight gap and grows without bound")
print()

# --- position-only routing cannot be made truthful with participation ------
corpus = analysis.make_corpus(400, 5)
witnesses = analysis.audit_truthfulness(corpus, "apos-naive")
w = witnesses[0]
print("witness against payment-equipped position-only routing:")
print(" ", w)
print("(the algorithm ignores reports, so any participation-respecting")
print(" payment must scale with the report, and over-reporting always wins)")

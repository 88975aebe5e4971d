#!/usr/bin/env python3
"""Tour of the solvers on the bundled example instances.

Everything is exact rational arithmetic: the numbers printed below are not
approximations, they are the numbers.
"""

from fractions import Fraction

import delivery_mech as dm
from delivery_mech.figures import figure_two, figure_two_collaborative_solution

inst = figure_two()
dist = dm.all_pairs_distances(inst)
weights = inst.true_weights()

print("The bundled collaboration example: 2 agents (weights 2 and 3), 3 packages.")
print("nodes:", inst.graph.nodes)
print()

# The unrestricted optimum lets agents hand packages over at nodes.
opt = dm.solve_oracle(inst, dist, weights, "allowed")
d = dm.travel_distances(inst, dist, opt)
print("collaborative optimum:", dm.evaluate_cost(inst, opt, weights).total)
print("  travel distances:", {a: str(x) for a, x in d.items()})
print("  (2*17 + 3*4 = 46)")
print()

# Forbid collaboration: every package is handled by a single agent, but
# intermediate drops and free end positions are still allowed.
noc = dm.solve_oracle(inst, dist, weights, "forbidden")
print("best non-collaborative:", dm.evaluate_cost(inst, noc, weights).total)
print("  (2*16 + 3*5 = 47 -- collaboration is worth exactly 1 here)")
print()

# Restrict further: direct source->target carries and return to start.
best = dm.solve_am_basic(inst, dist, weights)
print("best direct-delivery-with-return:", dm.evaluate_cost(inst, best, weights).total)
print("  agent 1 delivers everything; order (1, 2, 3) travels",
      dm.schedule_travel_distance(inst, dist, 1, (1, 2, 3)))
print()

# A solution is a set of per-agent itineraries; feasibility means some
# interleaving of them is causally consistent (handovers happen after drops).
sol = figure_two_collaborative_solution()
report = dm.validate_solution(inst, sol)
print("bundled collaborative solution feasible:", report.feasible)
print("its cost:", dm.evaluate_cost(inst, sol, weights).total)
print()

# The ratios of these three values are the benefit-of-collaboration numbers.
from delivery_mech import analysis

rep = analysis.measure_boc(inst)
print("BoC =", rep.boc, " BoC* =", rep.boc_star)
assert rep.boc == Fraction(47, 46) and rep.boc_star == Fraction(72, 46)

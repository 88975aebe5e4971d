from fractions import Fraction

import pytest

import delivery_mech as dm
from delivery_mech import analysis
from delivery_mech.mechanism import VCG_KINDS
from conftest import tiny_path_instance


def test_astar_mechanism_fig3_payments(fig3):
    out = dm.run_mechanism("astar", fig3, fig3.true_weights())
    assert out.payments == {1: Fraction(40), 2: Fraction(0), 3: Fraction(156)}
    assert out.social_cost == Fraction(10)


def test_single_opt_fig4_left_payments(fig4_left):
    out = dm.run_mechanism("single-opt", fig4_left, fig4_left.true_weights())
    assert out.payments == {1: Fraction(12), 2: Fraction(15), 3: Fraction(24)}
    assert sum(out.payments.values()) == Fraction(51)


def test_single_lonely_fig4_left_pays_selected_only(fig4_left):
    out = dm.run_mechanism("single-lonely", fig4_left, fig4_left.true_weights())
    assert out.payments == {1: Fraction(0), 2: Fraction(0), 3: Fraction(48)}


def test_fig4_right_utilities_under_truth(fig4_right):
    out = dm.run_mechanism("single-opt", fig4_right, fig4_right.true_weights())
    assert out.payments == {1: Fraction(20), 2: Fraction(18), 3: Fraction(10)}
    u = dm.utility(out, fig4_right.true_weights())
    assert u == {1: Fraction(2), 2: Fraction(8), 3: Fraction(0)}


def test_lonely_non_selected_agent_utility_zero(small_corpus):
    for seed, inst in small_corpus:
        if inst.m != 1:
            continue
        out = dm.run_mechanism("single-lonely", inst, inst.true_weights())
        used = [a for a in out.distances if out.distances[a] > 0]
        for aid in inst.agent_ids():
            if aid not in used:
                assert out.payments[aid] == 0
                assert out.utilities[aid] == 0


def test_truthful_utilities_nonnegative_all_vcg_kinds(small_corpus):
    for seed, inst in list(small_corpus)[:10]:
        for kind in VCG_KINDS:
            if kind in ("single-opt", "single-lonely") and inst.m != 1:
                continue
            out = dm.run_mechanism(kind, inst, inst.true_weights())
            assert all(u >= 0 for u in out.utilities.values()), (seed, kind)


def test_payment_decomposition_identity(small_corpus):
    for seed, inst in list(small_corpus)[:10]:
        for kind in VCG_KINDS + ("apos-naive",):
            if kind in ("single-opt", "single-lonely") and inst.m != 1:
                continue
            out = dm.run_mechanism(kind, inst, inst.true_weights())
            k = inst.k
            lhs = (
                sum(out.payments.values())
                - sum(out.pivots.values())
                + (k - 1) * out.social_cost
            )
            assert lhs == 0, (seed, kind)


def test_mechanism_refuses_single_agent():
    g = dm.Graph(nodes=("a", "b"), edges=(("a", "b", Fraction(1)),))
    inst = dm.Instance(
        graph=g,
        agents=(dm.AgentSpec(1, "a", Fraction(1)),),
        packages=(dm.PackageSpec(1, "a", "b"),),
    )
    with pytest.raises(dm.Unsupported):
        dm.run_mechanism("am", inst, inst.true_weights())


def test_mechanism_requires_full_report():
    inst = tiny_path_instance()
    with pytest.raises(dm.StructuralError):
        dm.run_mechanism("am", inst, {1: Fraction(1)})


def test_outcome_json_shape(fig4_left):
    out = dm.run_mechanism("single-opt", fig4_left, fig4_left.true_weights())
    obj = dm.outcome_to_obj(out, true_utilities=dm.utility(out, fig4_left.true_weights()))
    assert set(obj) == {
        "mechanism",
        "solution",
        "payments",
        "pivots",
        "utilities",
        "total_payment",
        "social_cost",
        "true_utilities",
    }
    assert obj["total_payment"] == "51"
    assert obj["payments"] == {"1": "12", "2": "15", "3": "24"}


def test_apos_naive_pivots_follow_the_same_rule(fig3):
    out = dm.run_mechanism("apos-naive", fig3, fig3.true_weights())
    # algorithm ignores weights: chosen solution equals the full forest run
    dist = dm.all_pairs_distances(fig3)
    assert out.solution == dm.solve_apos(fig3, dist)
    assert out.social_cost == Fraction(46)

from fractions import Fraction

import pytest

import delivery_mech as dm
from delivery_mech import analysis


# ---------------------------------------------------------------------------
# Exact irrational enclosures


def test_ln2_interval_tight_and_correct():
    lo, hi = analysis.ln2_interval()
    assert lo < hi
    assert hi - lo < Fraction(1, 10**50)
    # ln 2 is between the two; sanity against a coarse certified bound
    assert Fraction(693, 1000) < lo and hi < Fraction(6932, 10000)


def test_one_over_ln2_ordering():
    lo, hi = analysis.one_over_ln2_interval()
    assert Fraction(144, 100) < lo < hi < Fraction(145, 100)
    assert analysis.at_most_one_over_ln2(Fraction(10, 7))
    assert not analysis.at_most_one_over_ln2(Fraction(29, 20))


# ---------------------------------------------------------------------------
# Families


def test_path_family_shape_and_k1():
    inst = analysis.gen_path_family(1)
    dist = dm.all_pairs_distances(inst)
    res = dm.solve_single_optimal_full(inst, dist, inst.true_weights())
    assert res.cost == Fraction(1, 2)


def test_path_family_k10_harmonic_value():
    inst = analysis.gen_path_family(10)
    dist = dm.all_pairs_distances(inst)
    res = dm.solve_single_optimal_full(inst, dist, inst.true_weights())
    assert res.cost == Fraction(155685007, 232792560)


def test_path_family_k50_ratio_window():
    k = 50
    ratio = analysis.path_family_lonely_cost(k) / analysis.path_family_optimal_cost(k)
    assert ratio > Fraction(142, 100)
    assert analysis.at_most_one_over_ln2(ratio)


def test_monopoly_example_payment_formula():
    for eps, big, span in ((Fraction(1), Fraction(1000), Fraction(1)),
                           (Fraction(2, 3), Fraction(5), Fraction(7, 2))):
        inst = analysis.gen_monopoly_example(eps, big, span)
        out = dm.run_mechanism("single-opt", inst, inst.true_weights())
        assert out.payments[1] == big * span
        assert out.payments[2] == 0
        assert out.social_cost == eps * span
        lon = dm.run_mechanism("single-lonely", inst, inst.true_weights())
        assert sum(lon.payments.values()) == big * span


def test_monopoly_symmetric_edge_case():
    inst = analysis.gen_monopoly_example(Fraction(3), Fraction(3), Fraction(2))
    out = dm.run_mechanism("single-opt", inst, inst.true_weights())
    assert sum(out.payments.values()) == out.social_cost == Fraction(6)


def test_monopoly_rejects_bad_parameters():
    with pytest.raises(ValueError):
        analysis.gen_monopoly_example(Fraction(2), Fraction(1), Fraction(1))
    with pytest.raises(ValueError):
        analysis.gen_monopoly_example(Fraction(1), Fraction(2), Fraction(0))


def test_random_instances_reproducible():
    a = analysis.gen_random_instance(123)
    b = analysis.gen_random_instance(123)
    assert a == b
    assert a.k > 1


# ---------------------------------------------------------------------------
# Audits


def test_truthfulness_clean_on_sample(small_corpus):
    sub = analysis.AuditCorpus(tuple(list(small_corpus)[:8]))
    for kind in ("astar", "am", "ak-approx", "single-opt"):
        assert analysis.audit_truthfulness(sub, kind) == []


def test_vp_clean_on_sample(small_corpus):
    sub = analysis.AuditCorpus(tuple(list(small_corpus)[:8]))
    for kind in ("astar", "am", "ak-exact", "single-lonely"):
        assert analysis.audit_vp(sub, kind) == []


def test_apos_naive_always_yields_witness(small_corpus):
    sub = analysis.AuditCorpus(tuple(list(small_corpus)[:8]))
    found = analysis.audit_truthfulness(sub, "apos-naive")
    assert found
    assert all(r["result"] == "witness" for r in found)


def test_symmetric_agents_have_symmetric_utilities():
    # mirror-image instance: both agents see the same world
    g = dm.Graph(
        nodes=("c", "l", "r", "sl", "sr"),
        edges=(
            ("c", "l", Fraction(2)),
            ("c", "r", Fraction(2)),
            ("l", "sl", Fraction(1)),
            ("r", "sr", Fraction(1)),
        ),
    )
    inst = dm.Instance(
        graph=g,
        agents=(dm.AgentSpec(1, "l", Fraction(2)), dm.AgentSpec(2, "r", Fraction(2))),
        packages=(dm.PackageSpec(1, "sl", "l"), dm.PackageSpec(2, "sr", "r")),
    )
    corpus = analysis.AuditCorpus(((0, inst),))
    assert analysis.audit_truthfulness(corpus, "am") == []
    out = dm.run_mechanism("am", inst, inst.true_weights())
    assert out.utilities[1] == out.utilities[2]


# ---------------------------------------------------------------------------
# Frugality


def test_frugality_fig4_left(fig4_left):
    rep = analysis.audit_frugality(fig4_left)
    assert rep.opt == Fraction(37)
    assert rep.opt_minus == {1: Fraction(40), 2: Fraction(40), 3: Fraction(45)}
    assert rep.total_opt == Fraction(51)
    assert rep.total_lonely == Fraction(48)
    assert rep.monopoly_free
    assert rep.removal_monotone
    assert rep.within_two_opt and rep.within_two_over_ln2 and rep.eq6_holds


def test_frugality_fig4_right(fig4_right):
    rep = analysis.audit_frugality(fig4_right)
    assert rep.opt == Fraction(38)
    assert rep.opt_minus == {1: Fraction(40), 2: Fraction(46), 3: Fraction(38)}
    assert tuple(rep.payments_opt[i] for i in (1, 2, 3)) == (
        Fraction(20),
        Fraction(18),
        Fraction(10),
    )
    assert rep.total_opt == Fraction(48)
    assert rep.total_lonely == Fraction(50)
    assert rep.monopoly_free


def test_neither_single_package_mechanism_always_cheaper(fig4_left, fig4_right):
    left = analysis.audit_frugality(fig4_left)
    right = analysis.audit_frugality(fig4_right)
    assert left.total_opt > left.total_lonely
    assert right.total_opt < right.total_lonely


def test_frugality_monopoly_flags_false():
    inst = analysis.gen_monopoly_example(Fraction(1), Fraction(1000), Fraction(1))
    rep = analysis.audit_frugality(inst)
    assert not rep.monopoly_free
    assert rep.ratio_opt == Fraction(1000)
    assert rep.within_two_opt is None and rep.eq6_holds is None


def test_frugality_sweep_on_m1_corpus(small_corpus):
    for seed, inst in small_corpus.single_package():
        rep = analysis.audit_frugality(inst)
        assert rep.removal_monotone
        if rep.monopoly_free:
            assert rep.within_two_opt
            assert rep.within_two_over_ln2
            assert rep.eq6_holds


def test_frugality_requires_single_package(fig2):
    with pytest.raises(dm.Unsupported):
        analysis.audit_frugality(fig2)


# ---------------------------------------------------------------------------
# Benefit of collaboration


def test_boc_fig2_values(fig2):
    rep = analysis.measure_boc(fig2)
    assert rep.boc == Fraction(47, 46)
    assert rep.boc_star == Fraction(72, 46)
    assert rep.ordered and rep.boc_star_at_most_two


def test_boc_single_agent_instances_coincide():
    g = dm.Graph(
        nodes=("a", "b", "c"),
        edges=(("a", "b", Fraction(1)), ("b", "c", Fraction(3))),
    )
    inst = dm.Instance(
        graph=g,
        agents=(dm.AgentSpec(1, "a", Fraction(2)),),
        packages=(dm.PackageSpec(1, "b", "c"),),
    )
    rep = analysis.measure_boc(inst)
    # k = 1: collaboration is impossible, so the restricted and unrestricted
    # optima coincide and BoC collapses to 1
    assert rep.boc == 1


def test_boc_path_family_small_k_matches_closed_forms():
    for k in (2, 3):
        inst = analysis.gen_path_family(k)
        rep = analysis.measure_boc(inst)
        assert rep.boc == analysis.path_family_lonely_cost(k) / analysis.path_family_optimal_cost(k)
        assert rep.single_package_bound


def test_boc_closed_form_ratio_increasing_toward_bound():
    ratios = [
        analysis.path_family_lonely_cost(k) / analysis.path_family_optimal_cost(k)
        for k in range(1, 13)
    ]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert all(analysis.at_most_one_over_ln2(r) for r in ratios)


def test_boc_sweep(small_corpus):
    for seed, inst in list(small_corpus)[:10]:
        rep = analysis.measure_boc(inst)
        assert rep.ordered
        assert rep.boc_star_at_most_two
        assert rep.single_package_bound in (None, True)


def test_ratio_report_sweep(small_corpus):
    for seed, inst in list(small_corpus)[:10]:
        rep = analysis.audit_ratios(inst)
        assert rep.am_within_two_opt
        assert rep.ak_within_nine_fifths_am
        assert rep.ak_within_eighteen_fifths_opt
        assert rep.apos_within_weight_bound
        assert rep.astar_at_most_apos
        assert rep.ak_exact_matches_am

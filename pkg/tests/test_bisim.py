"""Open maps, the fixed-point decision, and the run-based oracle."""

import random

import pytest

import hdabisim as hb
from hdabisim import Cube, PrecubicalSet
from hdabisim.generators import random_hda, sub_hda


def identity_morphism(hda, pointed=True):
    return hb.PrecubicalMorphism(
        hda.space, hda.space, {c: c for c in hda.space.ids()},
        pointed=pointed, source_initial=hda.initial, target_initial=hda.initial)


def test_open_map_identity(fig1_left, fig3):
    for loaded in (fig1_left, fig3):
        result = hb.open_map_check(identity_morphism(loaded.hda),
                                   loaded.hda, loaded.hda)
        assert result.ok


def test_open_map_boundary_inclusion_fails(fig1_right, fig1_left):
    inclusion = hb.PrecubicalMorphism(
        fig1_right.hda.space, fig1_left.hda.space,
        {c: c for c in fig1_right.hda.space.ids()},
        pointed=True, source_initial="i", target_initial="i")
    assert hb.check_morphism(inclusion)
    result = hb.open_map_check(inclusion, fig1_right.hda, fig1_left.hda)
    assert not result.ok
    x1, y2, k = result.counterexample
    # The first failing obligation in (dimension, id) order: edge a has the
    # filler above it in the target but nothing in the source.
    assert (x1, y2, k) == ("a", "ab", 2)


def test_projections_of_full_unfoldings_are_open(fig3, fig1_left):
    for loaded in (fig3, fig1_left):
        depth = hb.longest_pointed_path_length(loaded.hda)
        unfolding = hb.unfold(loaded.hda, depth)
        assert unfolding.complete
        result = hb.open_map_check(unfolding.projection, unfolding.tree,
                                   loaded.hda)
        assert result.ok


def test_bisimilar_figures(fig1_left, fig1_right, fig5_x, fig5_y):
    assert hb.bisimilar(fig1_left.hda, fig1_right.hda).result is False
    assert hb.bisimilar(fig5_x.hda, fig5_y.hda).result is True


def test_bisimilar_reflexive_with_diagonal_witness(fig3):
    decision = hb.bisimilar(fig3.hda, fig3.hda)
    assert decision.result is True
    diagonal = {(c, c) for c in fig3.hda.space.ids()}
    assert diagonal <= set(decision.witness)
    assert hb.verify_bisim_relation(fig3.hda, fig3.hda, decision.witness) == []


def test_witness_passes_independent_audit(fig5_x, fig5_y):
    decision = hb.bisimilar(fig5_x.hda, fig5_y.hda)
    assert decision.result is True
    assert hb.verify_bisim_relation(fig5_x.hda, fig5_y.hda, decision.witness) == []


def test_labeled_bisim(ab_square, ac_square, fig1_left, fig1_right):
    same = hb.labeled_bisimilar(ab_square.hda, ab_square.labeling,
                                ab_square.hda, ab_square.labeling)
    assert same.result is True
    different = hb.labeled_bisimilar(ab_square.hda, ab_square.labeling,
                                     ac_square.hda, ac_square.labeling)
    assert different.result is False
    figures = hb.labeled_bisimilar(fig1_left.hda, fig1_left.labeling,
                                   fig1_right.hda, fig1_right.labeling)
    assert figures.result is False


def test_labeled_bisim_rejects_mismatched_alphabets(fig1_left, ab_square):
    with pytest.raises(hb.ModelError, match="alphabet"):
        hb.labeled_bisimilar(fig1_left.hda, fig1_left.labeling,
                             ab_square.hda, ab_square.labeling)


def test_hp_alias(fig1_left, fig1_right, fig5_x, fig5_y, ab_square, ac_square):
    assert hb.hp_bisimilar(fig1_left.hda, fig1_right.hda).result is False
    assert hb.hp_bisimilar(fig5_x.hda, fig5_y.hda).result is True
    both = hb.hp_bisimilar(ab_square.hda, ac_square.hda,
                           ab_square.labeling, ac_square.labeling)
    assert both.result is False
    assert "hp-bisimilarity" in both.justification


def test_bisim_symmetric_random():
    rng = random.Random(303)
    for trial in range(10):
        x = random_hda(rng, max_cubes=14, max_dim=2, cyclic=bool(trial % 2))
        y = random_hda(rng, max_cubes=14, max_dim=2, cyclic=bool(trial % 3 == 0))
        assert hb.bisimilar(x, y).result == hb.bisimilar(y, x).result


def test_bisim_invariant_under_renaming(fig1_left, fig5_y):
    def renamed(hda):
        mapping = {c: f"n_{c}" for c in hda.space.ids()}
        cubes = [
            Cube(mapping[c], hda.space.dim(c),
                 tuple(mapping[f] for f in hda.space.cube(c).lower),
                 tuple(mapping[f] for f in hda.space.cube(c).upper))
            for c in hda.space.ids()
        ]
        return hb.HDA(PrecubicalSet(cubes), mapping[hda.initial])

    for hda, other in ((fig1_left.hda, fig5_y.hda), (fig5_y.hda, fig1_left.hda)):
        expected = hb.bisimilar(hda, other).result
        assert hb.bisimilar(renamed(hda), other).result == expected


def test_unreachable_parts_do_not_change_the_answer():
    rng = random.Random(404)
    for _ in range(8):
        x = random_hda(rng, max_cubes=22, max_dim=2, stray=True)
        y = random_hda(rng, max_cubes=22, max_dim=2, stray=True)
        full = hb.bisimilar(x, y).result
        trimmed = hb.bisimilar(sub_hda(x, set(hb.reachable(x))),
                               sub_hda(y, set(hb.reachable(y)))).result
        assert full == trimmed


def test_every_hda_is_bisimilar_to_its_unfolding(fig3, fig1_left):
    for loaded in (fig3, fig1_left):
        depth = hb.longest_pointed_path_length(loaded.hda)
        unfolding = hb.unfold(loaded.hda, depth)
        assert hb.bisimilar(loaded.hda, unfolding.tree).result is True


def test_span_of_open_maps_implies_bisimilarity(fig1_left):
    # The unfolding projection and the identity on the tree form a span
    # from the tree onto both sides.
    depth = hb.longest_pointed_path_length(fig1_left.hda)
    unfolding = hb.unfold(fig1_left.hda, depth)
    tree = unfolding.tree
    left = unfolding.projection
    right = identity_morphism(tree)
    assert hb.open_map_check(left, tree, fig1_left.hda).ok
    assert hb.open_map_check(right, tree, tree).ok
    assert hb.bisimilar(fig1_left.hda, tree).result is True


def test_oracle_fig1_definite_false(fig1_left, fig1_right):
    decision = hb.hp_oracle(fig1_left.hda, fig1_right.hda, 4)
    assert decision.result is False
    assert decision.definite


def test_oracle_acyclic_reflexive(fig3):
    depth = hb.longest_pointed_path_length(fig3.hda)
    decision = hb.hp_oracle(fig3.hda, fig3.hda, depth)
    assert decision.result is True
    assert decision.definite


def test_oracle_cyclic_inconclusive_positive(fig5_x, fig5_y):
    decision = hb.hp_oracle(fig5_x.hda, fig5_y.hda, 6)
    assert decision.result == "inconclusive"
    assert not decision.definite
    assert decision.witness  # no violation found within the bound


def test_oracle_agrees_with_fixed_point_random():
    rng = random.Random(505)
    for _ in range(15):
        x = random_hda(rng, max_cubes=18, max_dim=2)
        y = random_hda(rng, max_cubes=18, max_dim=2)
        depth = max(hb.longest_pointed_path_length(x),
                    hb.longest_pointed_path_length(y))
        oracle = hb.hp_oracle(x, y, depth)
        assert oracle.definite
        assert oracle.result == hb.bisimilar(x, y).result


def test_oracle_labeled(ab_square, ac_square):
    decision = hb.hp_oracle(ab_square.hda, ac_square.hda, 5,
                            ab_square.labeling, ac_square.labeling)
    assert decision.result is False
    assert decision.definite


def test_decision_json_shape(fig1_left, fig1_right):
    report = hb.bisimilar(fig1_left.hda, fig1_right.hda).to_json()
    assert report["result"] is False
    assert report["witness"] is None
    assert "justification" in report and "counterexample" in report
    report = hb.bisimilar(fig1_left.hda, fig1_left.hda).to_json()
    assert report["result"] is True
    assert ["i", "i"] in report["witness"]


def test_oracle_definite_false_on_cyclic_input(fig5_x):
    # A dead-end target: the two-cycle can always continue, the single edge
    # cannot, and the violation shows up within the bound even though the
    # left side is cyclic, so the verdict is definite.
    dead = hb.HDA(PrecubicalSet([
        Cube("p", 0), Cube("q", 0), Cube("e", 1, ("p",), ("q",)),
    ]), "p")
    decision = hb.hp_oracle(fig5_x.hda, dead, 5)
    assert decision.result is False
    assert decision.definite


def test_fixed_point_iteration_count_is_deterministic(fig1_left, fig1_right):
    first = hb.bisimilar(fig1_left.hda, fig1_right.hda)
    second = hb.bisimilar(fig1_left.hda, fig1_right.hda)
    assert first.iterations == second.iterations
    assert first.to_json() == second.to_json()


def test_span_with_renamed_tree(fig3):
    # Z -> X by projection and Z -> Y by an isomorphism onto a renamed copy
    # of Z: both legs are open, so X and Y must be bisimilar.
    depth = hb.longest_pointed_path_length(fig3.hda)
    tree = hb.unfold(fig3.hda, depth).tree
    mapping = {c: f"copy_{j}" for j, c in enumerate(tree.space.ids())}
    copy_cubes = [
        Cube(mapping[c], tree.space.dim(c),
             tuple(mapping[f] for f in tree.space.cube(c).lower),
             tuple(mapping[f] for f in tree.space.cube(c).upper))
        for c in tree.space.ids()
    ]
    copy = hb.HDA(PrecubicalSet(copy_cubes), mapping[tree.initial])
    leg = hb.PrecubicalMorphism(tree.space, copy.space, mapping, pointed=True,
                                source_initial=tree.initial,
                                target_initial=copy.initial)
    assert hb.check_morphism(leg)
    assert hb.open_map_check(leg, tree, copy).ok
    assert hb.bisimilar(fig3.hda, copy).result is True


def test_labeled_oracle_agrees_with_labeled_fixed_point():
    from hdabisim.generators import grid_labeling

    events = hb.EventSet(("ea", "eb", "ec"))
    rng = random.Random(606)
    for _ in range(12):
        x = random_hda(rng, max_cubes=16, max_dim=3)
        y = random_hda(rng, max_cubes=16, max_dim=3)
        lx, ly = grid_labeling(x, events), grid_labeling(y, events)
        assert hb.validate_labeling(x, lx).ok and hb.validate_labeling(y, ly).ok
        depth = max(hb.longest_pointed_path_length(x),
                    hb.longest_pointed_path_length(y))
        fixed = hb.labeled_bisimilar(x, lx, y, ly)
        oracle = hb.hp_oracle(x, y, depth, lx, ly)
        assert oracle.definite
        assert fixed.result == oracle.result


def test_oracle_rejects_half_labeled_calls(fig1_left, fig1_right):
    with pytest.raises(hb.ModelError):
        hb.hp_oracle(fig1_left.hda, fig1_right.hda, 4, fig1_left.labeling, None)


def test_oracle_sound_on_cyclic_inputs():
    # At any bound: a deleted initial pair is final, and true bisimilarity
    # never shows up as a definite refusal.
    rng = random.Random(707)
    for trial in range(12):
        x = random_hda(rng, max_cubes=12, max_dim=2, cyclic=True)
        y = random_hda(rng, max_cubes=12, max_dim=2,
                       cyclic=bool(trial % 2))
        truth = hb.bisimilar(x, y).result
        oracle = hb.hp_oracle(x, y, 6)
        if oracle.result is False:
            assert truth is False
        if truth is True:
            assert oracle.result in (True, "inconclusive")
        assert hb.bisimilar(x, x).result is True


def test_oracle_cap_propagates(fig1_left):
    with pytest.raises(hb.CapExceeded):
        hb.hp_oracle(fig1_left.hda, fig1_left.hda, 5, cap=1)


def test_labeled_witness_audit(ab_square):
    decision = hb.labeled_bisimilar(ab_square.hda, ab_square.labeling,
                                    ab_square.hda, ab_square.labeling)
    assert decision.result is True
    audit = hb.verify_bisim_relation(ab_square.hda, ab_square.hda,
                                     decision.witness,
                                     ab_square.labeling, ab_square.labeling)
    assert audit == []

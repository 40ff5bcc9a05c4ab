"""Static model layer: validation, morphisms, products, reachability, tori."""

import math
import random

import pytest

import hdabisim as hb
from hdabisim import Cube, EventSet, PrecubicalSet

from conftest import load, model_dict


def test_figure_models_validate():
    for name in ("fig1_left.json", "fig1_right.json", "fig2_square.json",
                 "fig3.json", "fig5_x.json", "fig5_y.json",
                 "ab_square_abc.json", "ac_square_abc.json"):
        loaded = load(name)
        report = hb.validate_model(loaded.hda, loaded.labeling)
        assert report.ok, (name, [v.detail for v in report.violations])


def test_single_point_validates():
    space = PrecubicalSet([Cube("v", 0)])
    assert hb.validate_precubical(space).ok
    assert hb.validate_model(hb.HDA(space, "v")).ok


def test_identity_violation_names_indices():
    # Redirect the bottom-left corner of the plain square so the two corner
    # expressions disagree at (k=1, l=2, nu=mu=0).
    data = model_dict("fig2_square.json")
    data["cubes"].append({"id": "c00b", "dim": 0, "d0": [], "d1": []})
    for cube in data["cubes"]:
        if cube["id"] == "btm":
            cube["d0"] = ["c00b"]
    loaded = hb.model_from_dict(data)
    report = hb.validate_model(loaded.hda)
    kinds = {v.kind for v in report.violations}
    assert "identity" in kinds
    bad = next(v for v in report.violations if v.kind == "identity")
    assert bad.cube == "x"
    assert (bad.data["k"], bad.data["ell"], bad.data["nu"], bad.data["mu"]) == (1, 2, 0, 0)
    assert {bad.data["left"], bad.data["right"]} == {"c00", "c00b"}


def test_dangling_face_rejected():
    data = model_dict("fig2_square.json")
    for cube in data["cubes"]:
        if cube["id"] == "top":
            cube["d1"] = ["nowhere"]
    report = hb.validate_model(hb.model_from_dict(data).hda)
    assert not report.ok
    assert any(v.kind == "dangling-face" for v in report.violations)


def test_face_arity_rejected():
    data = model_dict("fig2_square.json")
    for cube in data["cubes"]:
        if cube["id"] == "x":
            cube["d0"] = ["l"]
    report = hb.validate_model(hb.model_from_dict(data).hda)
    assert any(v.kind == "face-arity" for v in report.violations)


def test_initial_must_be_zero_dimensional():
    data = model_dict("fig2_square.json")
    data["initial"] = "btm"
    report = hb.validate_model(hb.model_from_dict(data).hda)
    assert any(v.kind == "initial-dimension" for v in report.violations)
    data["initial"] = "ghost"
    report = hb.validate_model(hb.model_from_dict(data).hda)
    assert any(v.kind == "initial-missing" for v in report.violations)


def test_self_linked_cubes_are_allowed():
    # A loop edge has both faces on the same vertex; that is legal in
    # general models.
    space = PrecubicalSet([Cube("v", 0), Cube("e", 1, ("v",), ("v",))])
    assert hb.validate_precubical(space).ok


def test_morphism_identity_and_inclusion(fig2, fig1_left, fig1_right):
    space = fig2.hda.space
    ident = hb.PrecubicalMorphism(space, space, {c: c for c in space.ids()},
                                  pointed=True, source_initial="c00",
                                  target_initial="c00")
    assert hb.check_morphism(ident)

    hollow, filled = fig1_right.hda, fig1_left.hda
    inclusion = hb.PrecubicalMorphism(
        hollow.space, filled.space,
        {c: c for c in hollow.space.ids()},
        pointed=True, source_initial="i", target_initial="i")
    assert hb.check_morphism(inclusion)


def test_morphism_dimension_violation(fig2):
    space = fig2.hda.space
    collapse = {c: c for c in space.ids()}
    collapse["btm"] = "c00"  # an edge onto a vertex
    assert not hb.check_morphism(hb.PrecubicalMorphism(space, space, collapse))


def test_morphism_must_be_total(fig2):
    space = fig2.hda.space
    with pytest.raises(hb.ModelError):
        hb.check_morphism(hb.PrecubicalMorphism(space, space, {"x": "x"}))


def test_product_with_point(fig1_left):
    point = PrecubicalSet([Cube("pt", 0)])
    prod = hb.product(point, fig1_left.hda.space)
    assert hb.validate_precubical(prod).ok
    assert len(prod) == len(fig1_left.hda.space.by_dim(0))
    assert all(prod.dim(c) == 0 for c in prod.ids())


def test_product_edge_with_itself():
    edge = PrecubicalSet([Cube("s", 0), Cube("t", 0),
                          Cube("e", 1, ("s",), ("t",))])
    prod = hb.product(edge, edge)
    assert hb.validate_precubical(prod).ok
    assert len(prod.by_dim(0)) == 4
    assert len(prod.by_dim(1)) == 1


def test_product_fig1_counts(fig1_left, fig1_right):
    prod = hb.product(fig1_left.hda.space, fig1_right.hda.space)
    assert hb.validate_precubical(prod).ok
    assert len(prod.by_dim(0)) == 16
    assert len(prod.by_dim(1)) == 16
    assert len(prod.by_dim(2)) == 0


def test_product_counts_random():
    from hdabisim.generators import random_hda

    rng = random.Random(42)
    for _ in range(5):
        x = random_hda(rng, max_cubes=14, max_dim=2)
        y = random_hda(rng, max_cubes=14, max_dim=2)
        prod = hb.product(x.space, y.space)
        assert hb.validate_precubical(prod).ok
        for n in range(max(x.space.max_dim(), y.space.max_dim()) + 1):
            assert len(prod.by_dim(n)) == len(x.space.by_dim(n)) * len(y.space.by_dim(n))


def test_reachable_fig3(fig3):
    # Every cell of the drawn computation is reachable, including the faces
    # of the filled square.
    assert hb.reachable(fig3.hda) == frozenset(fig3.hda.space.ids())


def test_reachable_isolated_initial():
    space = PrecubicalSet([Cube("i", 0), Cube("u", 0), Cube("w", 0),
                           Cube("e", 1, ("u",), ("w",))])
    assert hb.reachable(hb.HDA(space, "i")) == frozenset({"i"})


def test_reachable_fig1_right(fig1_right):
    assert hb.reachable(fig1_right.hda) == frozenset(fig1_right.hda.space.ids())


def test_reachable_is_face_closed_and_witnessed():
    from hdabisim.generators import random_hda

    rng = random.Random(11)
    for trial in range(8):
        hda = random_hda(rng, max_cubes=18, max_dim=3,
                         cyclic=bool(trial % 2), stray=True)
        reach = hb.reachable(hda)
        assert hda.initial in reach
        space = hda.space
        for x in reach:
            for nu in (0, 1):
                for k in range(1, space.dim(x) + 1):
                    assert space.face(x, k, nu) in reach
        # Every reachable cube is the endpoint of some enumerated pointed
        # path, and path validity is checked independently.
        seen = set()
        for path in hb.enumerate_pointed_paths(hda, len(space)):
            assert hb.is_cube_path(space, path.seq)
            seen.add(path.end)
            if seen == reach:
                break
        assert seen == reach


def test_torus_two_events():
    space, labeling = hb.torus(EventSet(("a", "b")), 2)
    assert hb.validate_precubical(space).ok
    assert len(space.by_dim(0)) == 1
    assert space.by_dim(1) == ("a", "b")
    assert space.by_dim(2) == ("a.a", "a.b", "b.b")
    hda = hb.HDA(space, "()")
    assert hb.validate_labeling(hda, labeling).ok


def test_torus_empty_alphabet():
    space, _labeling = hb.torus(EventSet(()), 3)
    assert list(space.ids()) == ["()"]


def test_torus_single_event_maxdim3():
    space, _labeling = hb.torus(EventSet(("a",)), 3)
    assert [len(space.by_dim(n)) for n in range(4)] == [1, 1, 1, 1]


def test_torus_counts_are_multiset_numbers():
    for names in (("a",), ("a", "b"), ("a", "b", "c")):
        space, _ = hb.torus(EventSet(names), 3)
        assert hb.validate_precubical(space).ok
        s = len(names)
        for n in range(4):
            assert len(space.by_dim(n)) == math.comb(s + n - 1, n)


def test_validate_labeling_fig1(fig1_left):
    assert hb.validate_labeling(fig1_left.hda, fig1_left.labeling).ok


def test_validate_labeling_zero_dimensional():
    space = PrecubicalSet([Cube("u", 0), Cube("w", 0)])
    labeling = hb.Labeling(EventSet(("a",)), {"u": (), "w": ()})
    assert hb.validate_labeling(hb.HDA(space, "u"), labeling).ok


def test_validate_labeling_unsorted_tuple(fig1_left):
    bad = dict(fig1_left.labeling.assign)
    bad["ab"] = (2, 1)
    report = hb.validate_labeling(fig1_left.hda,
                                  hb.Labeling(fig1_left.labeling.events, bad))
    assert any(v.kind == "label-unsorted" and v.cube == "ab"
               for v in report.violations)


def test_validate_labeling_face_incompatibility(fig1_left):
    bad = dict(fig1_left.labeling.assign)
    bad["a"] = (2,)  # now removing direction 2 from the square mismatches
    report = hb.validate_labeling(fig1_left.hda,
                                  hb.Labeling(fig1_left.labeling.events, bad))
    offender = next(v for v in report.violations if v.kind == "label-face")
    assert offender.cube == "ab"
    assert offender.data["k"] == 2


def test_validate_labeling_missing_assignment(fig1_left):
    partial = {c: t for c, t in fig1_left.labeling.assign.items() if c != "b2"}
    report = hb.validate_labeling(fig1_left.hda,
                                  hb.Labeling(fig1_left.labeling.events, partial))
    assert any(v.kind == "label-missing" and v.cube == "b2"
               for v in report.violations)


def test_face_identity_exhaustive_on_valid_models(fig1_left, fig3):
    # Spot-check the identity by hand on every high cube of the figures.
    for loaded in (fig1_left, fig3):
        space = loaded.hda.space
        for x in space.ids():
            for ell in range(2, space.dim(x) + 1):
                for k in range(1, ell):
                    for nu in (0, 1):
                        for mu in (0, 1):
                            left = space.face(space.face(x, ell, mu), k, nu)
                            right = space.face(space.face(x, k, nu), ell - 1, mu)
                            assert left == right


def test_event_set_rejects_bad_names():
    with pytest.raises(hb.ModelError):
        EventSet(("a", "a"))
    with pytest.raises(hb.ModelError):
        EventSet(("a.b",))
    with pytest.raises(hb.ModelError):
        EventSet(("",))


def test_empty_model_rejected():
    report = hb.validate_model(hb.HDA(PrecubicalSet([]), "i"))
    assert any(v.kind == "empty-model" for v in report.violations)
    assert any(v.kind == "initial-missing" for v in report.violations)


def test_pointed_morphism_requires_initials(fig2):
    space = fig2.hda.space
    f = hb.PrecubicalMorphism(space, space, {c: c for c in space.ids()},
                              pointed=True)
    with pytest.raises(hb.ModelError, match="initial"):
        hb.check_morphism(f)


def test_labeling_face_deletion_directly(fig1_left, fig3):
    for loaded in (fig1_left, fig3):
        space, labeling = loaded.hda.space, loaded.labeling
        for x in space.ids():
            tup = labeling.assign[x]
            for nu in (0, 1):
                for k in range(1, space.dim(x) + 1):
                    face = space.face(x, k, nu)
                    assert labeling.assign[face] == tup[:k - 1] + tup[k:]


def test_grid_ambients_are_valid():
    from hdabisim.generators import grid_hda

    for sizes in ((1,), (2, 2), (1, 1, 1), (2, 1, 2)):
        hda = grid_hda(sizes)
        assert hb.validate_model(hda).ok
        assert hb.reachable(hda) == frozenset(hda.space.ids())

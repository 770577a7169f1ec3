"""Toric fiber models: disk enumeration, contraction complexes, thresholds."""

import random
from fractions import Fraction as F

import pytest

from torsionlab.errors import EmptyInterior, FiberOnBoundary
from torsionlab.novikov import NovikovElement, from_text
from torsionlab.rationals import INFINITE, is_infinite
from torsionlab.toric import (
    Facet,
    MomentModel,
    boundary_covector,
    coordinate_intervals,
    cylinder_factor,
    displacement_bound,
    enumerate_disks,
    facet_areas,
    floer_cohomology,
    floer_model,
    model_from_factors,
    model_from_json,
    model_to_json,
    optimize_threshold,
    potential,
    product,
    projective_factor,
    sphere_factor,
    torsion_threshold_at,
)


def translated(model: MomentModel, shift) -> MomentModel:
    facets = tuple(
        Facet(f.normal,
              f.offset + sum(n * s for n, s in zip(f.normal, shift)),
              f.kind)
        for f in model.facets)
    return MomentModel(model.dim, facets, model.description)


def random_model(rng: random.Random):
    """Small random product model with a strictly interior fiber."""
    factors = []
    fiber = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(("sphere", "sphere", "cp", "cylinder"))
        if kind == "sphere":
            area = F(rng.randint(1, 8), rng.randint(1, 3))
            factors.append(sphere_factor(area))
            fiber.append(area * F(rng.randint(1, 7), 8))
        elif kind == "cp":
            k = rng.randint(1, 2)
            size = F(rng.randint(k + 1, 8))
            factors.append(projective_factor(k, size))
            coords = [F(rng.randint(1, 3), 4) for _ in range(k)]
            assert sum(coords) < size
            fiber.extend(coords)
        else:
            factors.append(cylinder_factor())
            fiber.append(F(rng.randint(1, 9), 4))
    return product(*factors), fiber


# -- constructors ---------------------------------------------------------

def test_sphere_factor_facets():
    model = sphere_factor(F(3, 2))
    assert model.dim == 1
    assert [(f.normal, f.offset) for f in model.facets] == \
        [((1,), F(0)), ((-1,), F(-3, 2))]
    assert all(f.kind == "closed" for f in model.facets)


def test_projective_factor_facets():
    model = projective_factor(2, 10)
    assert model.dim == 2
    assert [(f.normal, f.offset) for f in model.facets] == \
        [((1, 0), F(0)), ((0, 1), F(0)), ((-1, -1), F(-10))]


def test_cylinder_factor_is_single_open_facet():
    model = cylinder_factor()
    assert model.dim == 1
    assert len(model.facets) == 1
    assert model.facets[0].kind == "open"


def test_product_pads_normals():
    model = product(sphere_factor(1), projective_factor(2, 5))
    assert model.dim == 3
    assert [f.normal for f in model.facets] == [
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -1, -1)]
    assert model.description == "S2(1) x CP2(5)"


def test_nonprimitive_normal_rejected():
    with pytest.raises(ValueError):
        Facet((2, 4), F(1))


def test_invalid_constructor_arguments():
    with pytest.raises(ValueError):
        sphere_factor(0)
    with pytest.raises(ValueError):
        projective_factor(0, 3)


# -- disks, areas, potential ----------------------------------------------

def test_facet_areas_equator():
    assert facet_areas(sphere_factor(1), [F(1, 2)]) == (F(1, 2), F(1, 2))


def test_facet_areas_off_center_sphere():
    assert facet_areas(sphere_factor(5), [F(2)]) == (F(2), F(3))


def test_facet_areas_projective_space():
    assert facet_areas(projective_factor(2, 10), [F(2), F(2)]) == \
        (F(2), F(2), F(6))


def test_facet_areas_boundary_rejected():
    with pytest.raises(FiberOnBoundary):
        facet_areas(sphere_factor(1), [F(0)])
    with pytest.raises(FiberOnBoundary):
        facet_areas(sphere_factor(1), [F(2)])


def test_enumerate_disks_cylinder():
    disks = enumerate_disks(cylinder_factor(), [F(3, 4)])
    assert len(disks) == 1
    assert disks[0].boundary == (1,)
    assert disks[0].area == F(3, 4)


def test_enumerate_disks_concatenates_factors():
    model = product(cylinder_factor(), sphere_factor(1))
    disks = enumerate_disks(model, [F(3, 4), F(1, 2)])
    assert [d.boundary for d in disks] == [(1, 0), (0, 1), (0, -1)]
    assert [d.area for d in disks] == [F(3, 4), F(1, 2), F(1, 2)]


def test_potential_merges_equal_areas():
    assert potential(sphere_factor(1), [F(1, 2)]) == from_text("2*T(1/2)")


def test_potential_off_center():
    assert potential(sphere_factor(5), [F(2)]) == from_text("T(2) + T(3)")
    assert potential(cylinder_factor(), [F(3, 4)]) == from_text("T(3/4)")


# -- covector and complex -------------------------------------------------

def test_covector_cancels_at_equator():
    (w,) = boundary_covector(sphere_factor(1), [F(1, 2)])
    assert w.is_zero()


def test_covector_reference_configuration():
    model = product(sphere_factor(F(3, 2)), sphere_factor(5), sphere_factor(5))
    w = boundary_covector(model, [F(3, 4), F(2), F(2)])
    assert w[0].is_zero()
    expected = from_text("T(2) - T(3)").retruncate(w[1].trunc)
    assert w[1] == expected
    assert w[2] == expected


def test_covector_cylinder_times_sphere():
    w = boundary_covector(product(cylinder_factor(), sphere_factor(1)),
                          [F(3, 4), F(1, 2)])
    assert w[0] == from_text("T(3/4)").retruncate(w[0].trunc)
    assert w[1].is_zero()


def test_floer_model_ranks_are_binomial():
    model = product(sphere_factor(1), sphere_factor(2), sphere_factor(3))
    fm = floer_model(model, [F(1, 4), F(1, 2), F(1)])
    assert fm.complex.ranks == (1, 3, 3, 1)


def test_contraction_squares_to_zero():
    rng = random.Random(20260816)
    for _ in range(25):
        model, fiber = random_model(rng)
        fm = floer_model(model, fiber)
        fm.complex.validate()
        for lower, upper in zip(fm.complex.differentials,
                                fm.complex.differentials[1:]):
            if min(upper.shape) == 0 or min(lower.shape) == 0:
                continue
            # entries of the composition vanish identically, not merely
            # below the truncation level: contraction squares to zero
            assert all(entry.is_zero() for row in (upper * lower).entries
                       for entry in row)


# -- cohomology decompositions --------------------------------------------

def test_cohomology_of_equator_product_is_free():
    model = product(sphere_factor(1), sphere_factor(1))
    dec = floer_cohomology(model, [F(1, 2), F(1, 2)])
    assert dec.betti == 4
    assert dec.torsion == ()
    assert is_infinite(torsion_threshold_at(model, [F(1, 2), F(1, 2)]))


def test_cohomology_reference_configuration():
    model = product(sphere_factor(F(3, 2)), sphere_factor(5), sphere_factor(5))
    dec = floer_cohomology(model, [F(3, 4), F(2), F(2)])
    assert dec.betti == 0
    assert dec.torsion == (F(2), F(2), F(2), F(2))
    assert torsion_threshold_at(model, [F(3, 4), F(2), F(2)]) == F(2)


def test_cohomology_projective_configuration():
    model = product(sphere_factor(F(3, 2)), projective_factor(2, 10))
    dec = floer_cohomology(model, [F(3, 4), F(2), F(2)])
    assert dec.betti == 0
    assert dec.torsion == (F(2), F(2), F(2), F(2))


def test_cohomology_cylinder_times_sphere():
    model = product(cylinder_factor(), sphere_factor(1))
    dec = floer_cohomology(model, [F(3, 4), F(1, 2)])
    assert dec.betti == 0
    assert dec.torsion == (F(3, 4), F(3, 4))
    assert displacement_bound(model, [F(3, 4), F(1, 2)]) == F(3, 4)


def test_single_sphere_threshold_formula():
    rng = random.Random(7)
    for _ in range(30):
        area = F(rng.randint(1, 9), rng.randint(1, 3))
        s = area * F(rng.randint(1, 15), 16)
        model = sphere_factor(area)
        value = torsion_threshold_at(model, [s])
        if s == area / 2:
            assert is_infinite(value)
        else:
            assert value == min(s, area - s)


def test_free_rank_positive_iff_covector_vanishes():
    rng = random.Random(99)
    for _ in range(25):
        model, fiber = random_model(rng)
        w = boundary_covector(model, fiber)
        dec = floer_cohomology(model, fiber)
        if all(c.is_zero() for c in w):
            assert dec.betti == 2 ** model.dim
            assert dec.torsion == ()
        else:
            assert dec.betti == 0


def test_threshold_dominates_minimum_covector_valuation():
    rng = random.Random(1234)
    for _ in range(25):
        model, fiber = random_model(rng)
        w = boundary_covector(model, fiber)
        valuations = [c.valuation() for c in w if not c.is_zero()]
        if not valuations:
            continue
        assert torsion_threshold_at(model, fiber) >= min(valuations)


def test_threshold_translation_invariance():
    rng = random.Random(5150)
    for _ in range(10):
        model, fiber = random_model(rng)
        shift = [F(rng.randint(-8, 8), 4) for _ in range(model.dim)]
        moved = translated(model, shift)
        here = torsion_threshold_at(model, fiber)
        there = torsion_threshold_at(
            moved, [x + s for x, s in zip(fiber, shift)])
        assert here == there


def test_threshold_factor_permutation_invariance():
    first = sphere_factor(F(3, 2))
    second = projective_factor(2, 7)
    fiber_a = [F(1, 4), F(1), F(2)]
    dec_ab = floer_cohomology(product(first, second), fiber_a)
    dec_ba = floer_cohomology(product(second, first),
                              [F(1), F(2), F(1, 4)])
    assert dec_ab.betti == dec_ba.betti
    assert dec_ab.torsion == dec_ba.torsion


# -- optimization ---------------------------------------------------------

def test_intervals_of_product_polytope():
    model = product(sphere_factor(F(3, 2)), projective_factor(2, 10))
    assert coordinate_intervals(model) == [
        (F(0), F(3, 2)), (F(0), F(10)), (F(0), F(10))]


def test_intervals_of_cylinder_need_cap():
    model = product(cylinder_factor(), sphere_factor(1))
    with pytest.raises(ValueError):
        coordinate_intervals(model)
    assert coordinate_intervals(model, cap=4) == [
        (F(0), F(4)), (F(0), F(1))]


def test_optimize_equator_short_circuit():
    result = optimize_threshold(sphere_factor(1), resolution=2)
    assert result.fiber == (F(1, 2),)
    assert is_infinite(result.value)
    assert result.non_displaceable


def test_optimize_product_equators():
    result = optimize_threshold(product(sphere_factor(1), sphere_factor(1)),
                                resolution=2)
    assert result.fiber == (F(1, 2), F(1, 2))
    assert is_infinite(result.value)


def test_optimize_grid_values_without_refinement():
    assert optimize_threshold(sphere_factor(1), resolution=3,
                              refine_rounds=0).value == F(1, 3)
    assert optimize_threshold(sphere_factor(1), resolution=9,
                              refine_rounds=0).value == F(4, 9)


def test_optimize_refinement_finds_equator_from_odd_grid():
    result = optimize_threshold(sphere_factor(1), resolution=3)
    assert is_infinite(result.value)
    assert result.fiber == (F(1, 2),)


def test_optimize_monotone_under_grid_refinement():
    rng = random.Random(31337)
    for _ in range(6):
        model, _ = random_model(rng)
        cap = F(3)
        coarse = optimize_threshold(model, resolution=3, cap=cap,
                                    refine_rounds=0)
        fine = optimize_threshold(model, resolution=6, cap=cap,
                                  refine_rounds=0)
        assert fine.value >= coarse.value


def test_optimize_cylinder_pushes_to_cap():
    result = optimize_threshold(cylinder_factor(), resolution=4, cap=2,
                                refine_rounds=0)
    assert result.fiber == (F(3, 2),)
    assert result.value == F(3, 2)


def test_optimize_empty_grid():
    with pytest.raises(EmptyInterior):
        optimize_threshold(sphere_factor(1), resolution=1, refine_rounds=0)


# -- serialization --------------------------------------------------------

def test_model_json_round_trip():
    model = product(sphere_factor(F(3, 2)), cylinder_factor(),
                    projective_factor(2, 10))
    blob = model_to_json(model)
    again = model_from_json(blob)
    assert again == model


def test_model_from_factor_shorthand():
    model = model_from_factors([
        {"sphere": "3/2"}, {"sphere": "5"}, {"sphere": "5"}])
    assert model == product(sphere_factor(F(3, 2)), sphere_factor(5),
                            sphere_factor(5))
    mixed = model_from_factors([
        {"cp": {"k": 2, "lambda": "10"}}, {"cylinder": True}])
    assert mixed.dim == 3
    assert mixed.facets[-1].kind == "open"


def test_factor_shorthand_rejects_garbage():
    with pytest.raises(ValueError):
        model_from_factors([])
    with pytest.raises(ValueError):
        model_from_factors([{"sphere": "1", "cylinder": True}])
    with pytest.raises(ValueError):
        model_from_factors([{"torus": "1"}])

import random
from fractions import Fraction

import pytest

from dynalg import (
    DynSystem,
    FiniteGroup,
    InvariantMeasure,
    StructureError,
    extreme_invariant_measures,
    orbits,
    product_with_cyclic,
    validate_system,
)

from _support import random_free_system


def test_z2_translation_free_minimal(z2):
    rep = validate_system(z2)
    assert rep.free and rep.minimal


def test_trivial_action_not_free():
    grp = FiniteGroup.cyclic(2)
    sys = DynSystem(grp, ("0",), ((0,), (0,)))
    rep = validate_system(sys)
    assert not rep.free


def test_double_swap_free_not_minimal(double_swap):
    rep = validate_system(double_swap)
    assert rep.free and not rep.minimal
    assert rep.orbits == ((0, 1), (2, 3))


def test_declared_flag_mismatch():
    grp = FiniteGroup.cyclic(2)
    sys = DynSystem(grp, ("0",), ((0,), (0,)), declared_free=True)
    with pytest.raises(StructureError):
        validate_system(sys)


def test_malformed_table_rejected():
    with pytest.raises(StructureError):
        FiniteGroup(("a", "b"), ((0, 1), (1, 1)))  # b has no inverse


def test_non_associative_table_rejected():
    # a "multiplication" with an identity but broken associativity
    table = ((0, 1, 2), (1, 0, 0), (2, 0, 1))
    grp = FiniteGroup(("e", "a", "b"), table)
    with pytest.raises(StructureError, match="associativity"):
        grp.validate()


def test_orbits_examples(z3, double_swap, trivial_two):
    assert orbits(z3) == ((0, 1, 2),)
    assert orbits(double_swap) == ((0, 1), (2, 3))
    assert orbits(trivial_two) == ((0,), (1,))


def test_extreme_measures_z3(z3):
    (mu,) = extreme_invariant_measures(z3)
    assert mu.weights == (Fraction(1, 3),) * 3


def test_extreme_measures_double_swap(double_swap):
    mus = extreme_invariant_measures(double_swap)
    assert len(mus) == 2
    assert mus[0].weights == (Fraction(1, 2), Fraction(1, 2), 0, 0)
    assert mus[1].weights == (0, 0, Fraction(1, 2), Fraction(1, 2))


def test_extreme_measures_point_masses(trivial_two):
    mus = extreme_invariant_measures(trivial_two)
    assert [mu.weights for mu in mus] == [(1, 0), (0, 1)]


def test_invariant_measure_validation(double_swap):
    with pytest.raises(StructureError):
        InvariantMeasure(double_swap, (Fraction(1), 0, 0, 0))  # not invariant
    mu = InvariantMeasure(
        double_swap, (Fraction(1, 4),) * 4
    )
    assert mu.measure({0, 2}) == Fraction(1, 2)


def test_convex_combinations_are_all_invariant_measures(double_swap):
    mus = extreme_invariant_measures(double_swap)
    blend = tuple(
        Fraction(1, 3) * a + Fraction(2, 3) * b
        for a, b in zip(mus[0].weights, mus[1].weights)
    )
    InvariantMeasure(double_swap, blend)  # validates invariance and mass


def test_product_with_cyclic_trivial_factor(z3):
    prod = product_with_cyclic(z3, 1)
    rep = validate_system(prod)
    assert rep.group_order == 3 and rep.n_points == 3
    assert rep.free and rep.minimal


def test_product_with_cyclic_z2(z2):
    prod = product_with_cyclic(z2, 2)
    rep = validate_system(prod)
    assert rep.group_order == 4 and rep.n_points == 4
    assert rep.free


def test_product_of_trivial_is_cyclic():
    one = DynSystem.translation(FiniteGroup.trivial())
    prod = product_with_cyclic(one, 3)
    rep = validate_system(prod)
    assert rep.group_order == 3 and rep.n_points == 3 and rep.free and rep.minimal


def test_product_preserves_freeness_and_orbit_count():
    rng = random.Random(7)
    for _ in range(20):
        sys = random_free_system(rng)
        n = rng.randint(1, 3)
        prod = product_with_cyclic(sys, n)
        validate_system(prod)
        assert prod.is_free == sys.is_free
        assert len(prod.orbit_partition) == len(sys.orbit_partition)


def test_action_rows_are_permutations():
    rng = random.Random(3)
    for _ in range(20):
        sys = random_free_system(rng)
        validate_system(sys)
        for g in range(sys.group.order):
            assert sorted(sys.act[g]) == list(range(sys.n_points))


def test_measures_linearly_independent():
    rng = random.Random(11)
    for _ in range(10):
        sys = random_free_system(rng)
        mus = extreme_invariant_measures(sys)
        # distinct supports make independence immediate; check disjointness
        supports = [frozenset(x for x, w in enumerate(mu.weights) if w) for mu in mus]
        for i in range(len(supports)):
            for j in range(i + 1, len(supports)):
                assert not (supports[i] & supports[j])

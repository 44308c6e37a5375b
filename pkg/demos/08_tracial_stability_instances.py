"""Evaluating tracial-stability instances and searching for maps.

An instance fixes a matrix size, a tolerance, a finite set of elements,
and a nonzero positive function; a candidate map passes when its matrix
units normalize, the unit remainder fits below h, and its commutators
against the finite set are small.

Run with:  python3 demos/08_tracial_stability_instances.py
"""

from fractions import Fraction

from dynalg import (
    CrossedElement,
    DynSystem,
    FiniteGroup,
    Func,
    TzsInstance,
    check_tzs_instance,
    identity_embedding,
    search_tzs_map,
)


def main():
    z3 = DynSystem.translation(FiniteGroup.cyclic(3))
    phi = identity_embedding(z3)

    inst = TzsInstance(
        n=3,
        epsilon=Fraction(1, 10),
        F=(CrossedElement.unit(z3), CrossedElement.unitary(z3, 1)),
        h=Func.indicator(z3, {0}),
    )
    report = check_tzs_instance(inst, phi)
    print("normalizer condition:", report.normalizer_condition)
    print("remainder condition: ", report.remainder_condition)
    print("commutator condition:", report.commutator_condition,
          "(max %.3f, factor %d, eps %s)" % (
              report.max_commutator, report.commutator_bound_factor, inst.epsilon))

    # with F = {unit} the commutators vanish and everything passes
    easy = TzsInstance(
        n=3, epsilon=Fraction(1, 10),
        F=(CrossedElement.unit(z3),), h=Func.indicator(z3, {0}),
    )
    print("unit-only instance all pass:",
          check_tzs_instance(easy, phi).all_pass)

    # the bounded search rediscovers the orbit castle for that instance
    found = search_tzs_map(easy)
    print("search found a map with phi(1) = %r" % found.unit_image())

    # a hopeless instance: tiny tolerance against a unitary
    hard = TzsInstance(
        n=2, epsilon=Fraction(1, 1000),
        F=(CrossedElement.unitary(z3, 1),), h=Func.indicator(z3, {0}),
    )
    print("hopeless instance search:", search_tzs_map(hard))


if __name__ == "__main__":
    main()

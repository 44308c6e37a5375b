"""Finite dynamical systems: validation, orbits, invariant measures.

Run with:  python3 demos/01_systems_and_measures.py
"""

from dynalg import (
    DynSystem,
    FiniteGroup,
    extreme_invariant_measures,
    product_with_cyclic,
    validate_system,
)


def show(sys, name):
    rep = validate_system(sys)
    print("%s: |G|=%d, |X|=%d, free=%s, minimal=%s" % (
        name, rep.group_order, rep.n_points, rep.free, rep.minimal))
    print("  orbits:", [tuple(sys.points[x] for x in o) for o in rep.orbits])
    for mu in extreme_invariant_measures(sys):
        print("  extreme measure:", [str(w) for w in mu.weights])


def main():
    z3 = DynSystem.translation(FiniteGroup.cyclic(3))
    show(z3, "Z/3 translation")

    # Z/2 acting freely on four points: two swapped pairs, hence two orbits
    grp = FiniteGroup.cyclic(2)
    double = DynSystem.disjoint_union(
        DynSystem.translation(grp), DynSystem.translation(grp)
    )
    show(double, "Z/2 double swap")

    # the trivial group: every point is its own orbit, point masses are extreme
    one = FiniteGroup.trivial()
    two_points = DynSystem.disjoint_union(
        DynSystem.translation(one), DynSystem.translation(one)
    )
    show(two_points, "trivial group on two points")

    # the product with a cyclic shift keeps freeness and the orbit count
    prod = product_with_cyclic(z3, 2)
    show(prod, "Z/3 translation times a 2-cycle")


if __name__ == "__main__":
    main()

"""The type semigroup of a finite system and almost unperforation.

Run with:  python3 demos/06_type_semigroup.py
"""

from dynalg import (
    DiagTuple,
    DynSystem,
    FiniteGroup,
    almost_unperforation_check,
    cuntz_oracle,
    type_semigroup,
)


def main():
    z3 = DynSystem.translation(FiniteGroup.cyclic(3))
    W = type_semigroup(z3, max_n=2)
    print("classes (canonical representatives):")
    for idx, rep in enumerate(W.classes):
        print("  [%d] =" % idx, [sorted(f.support) for f in rep.entries])

    a = DiagTuple.indicators(z3, [{0}])
    b = DiagTuple.indicators(z3, [{1}])
    ab = DiagTuple.indicators(z3, [{0, 1}])
    ia, ib, iab = W.class_of(a), W.class_of(b), W.class_of(ab)
    print("[chi_0] = class", ia, ", [chi_1] = class", ib)
    print("[chi_0] + [chi_1] = class", W.add_classes(ia, ib),
          "= [chi_{0,1}] = class", iab)

    ok, violation = almost_unperforation_check(W)
    print("almost unperforated within the bound:", ok, violation or "")

    # the finite-dimensional rank oracle agrees with subequivalence here
    print("rank oracle chi_0 vs chi_{1,2}:",
          cuntz_oracle(a, DiagTuple.indicators(z3, [{1, 2}])))


if __name__ == "__main__":
    main()

"""The dynamical preorder, witness search, and measure comparisons.

Run with:  python3 demos/04_subequivalence_and_witnesses.py
"""

from dynalg import (
    DiagTuple,
    DynSystem,
    FiniteGroup,
    d_tau,
    diag_subequivalent,
    dynamical_comparison_check,
    extreme_invariant_measures,
    search_subequivalence,
)


def main():
    z3 = DynSystem.translation(FiniteGroup.cyclic(3))

    # one point fits inside a two-point target after translating
    w = search_subequivalence(z3, [{0}], [{1, 2}])
    print("{0} into {1,2}:", w)

    # two tagged points cannot fit one tagged target (pigeonhole)
    print("{0,1} into {2}:", search_subequivalence(z3, [{0, 1}], [{2}]))

    # tuples compare through their supports
    a = DiagTuple.indicators(z3, [{0}, {1}])
    b = DiagTuple.indicators(z3, [{0, 1, 2}])
    ok, witness = diag_subequivalent(a, b)
    print("diag(chi_0, chi_1) <= diag(1):", ok)
    print("witness rows:", witness.rows)

    # d_tau reads the measure of the support
    (mu,) = extreme_invariant_measures(z3)
    for f in a.entries:
        print("d_tau entry:", d_tau(f, mu))

    # strictly smaller measure for every invariant measure forces
    # subequivalence, checked exhaustively over subset pairs
    result = dynamical_comparison_check(z3)
    print("dynamical comparison holds:", result.holds,
          "(%d pairs)" % result.pairs_checked)


if __name__ == "__main__":
    main()

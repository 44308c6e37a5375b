"""Compiling witnesses into one-sided normalizers and back.

A witness for (a - eps)_+ against b becomes a matrix r-normalizer t with
t*(b - delta)_+ t = (a - eps)_+ exactly; the reverse direction reads a
witness off such a t.  The demo runs the round trip and the three-way
consistency suite.

Run with:  python3 demos/05_witness_compiler.py
"""

from fractions import Fraction

from dynalg import (
    DiagTuple,
    DynSystem,
    FiniteGroup,
    compile_witness,
    extract_witness,
    matrix_is_r_normalizer,
    prop_equivalence_suite,
    search_subequivalence,
)


def main():
    z3 = DynSystem.translation(FiniteGroup.cyclic(3))
    a = DiagTuple.indicators(z3, [{0}])
    b = DiagTuple.indicators(z3, [{1, 2}])
    eps = Fraction(1, 2)

    w = search_subequivalence(z3, a.cutdown(eps).supports(), b.supports())
    print("witness:", w.rows)

    cert = compile_witness(a, b, eps, w)
    print("delta:", cert.delta)
    print("t entries:")
    for i, row in enumerate(cert.t.entries):
        for j, entry in enumerate(row):
            if not entry.is_zero:
                print("  t[%d][%d] = %r" % (i, j, entry))
    print("t is a matrix r-normalizer:", matrix_is_r_normalizer(cert.t))

    back = extract_witness(a, b, cert.epsilon, cert.delta, cert.t)
    print("extracted witness:", back.rows)

    report = prop_equivalence_suite(a, b)
    print("subequivalent:", report.subequivalent,
          "consistent:", report.consistent)
    for row in report.eps_results:
        print("  eps=%s compiled=%s residual=%s" % (
            row.eps, row.compiled,
            "%.3g" % row.residual_norm if row.residual_norm is not None else "-"))

    refuted = prop_equivalence_suite(
        DiagTuple.indicators(z3, [{0, 1}]), DiagTuple.indicators(z3, [{2}])
    )
    print("refuted case consistent:", refuted.consistent)


if __name__ == "__main__":
    main()

import random
from fractions import Fraction

import pytest

from dynalg import (
    DiagTuple,
    Func,
    InvalidWitness,
    MatrixElement,
    NotPositive,
    PreconditionFailed,
    RadScalar,
    SupportOverlap,
    Witness,
    check_witness,
    compile_witness,
    cuntz_oracle,
    extract_witness,
    is_r_normalizer_by_support,
    matrix_is_r_normalizer,
    prop_equivalence_suite,
    search_subequivalence,
    single_row_rnormalizer,
)

from _support import random_free_system


def chi_tuple(sys, *subsets):
    return DiagTuple.indicators(sys, subsets)


def rational_tuple(rng, sys, size):
    pool = [Fraction(1), Fraction(1, 2), Fraction(2), Fraction(1, 3), Fraction(3, 4)]
    entries = []
    for _ in range(size):
        vals = {
            x: RadScalar(rng.choice(pool))
            for x in range(sys.n_points)
            if rng.random() < 0.55
        }
        entries.append(Func.from_dict(sys, vals))
    return DiagTuple(sys, tuple(entries))


# -- compile -------------------------------------------------------------------


def test_compile_standard_z3_instance(z3):
    a = chi_tuple(z3, {0})
    b = chi_tuple(z3, {1, 2})
    w = Witness((((frozenset({0}), 1, 0),),))
    cert = compile_witness(a, b, Fraction(1, 2), w)
    assert cert.delta == Fraction(1, 2)
    assert matrix_is_r_normalizer(cert.t, "entrywise")
    assert matrix_is_r_normalizer(cert.t, "support")
    # t = (1/sqrt(1-delta)) sqrt(1/2) (translate term): single entry
    entry = cert.t.entries[0][0]
    assert entry.nonzero_groups == (1,)
    assert entry.coeffs[1].values[1] == RadScalar(1)  # sqrt(1/2)/sqrt(1/2) = 1


def test_compile_zero_target(z3):
    a = chi_tuple(z3, {0})
    b = chi_tuple(z3, {1, 2})
    w = Witness((tuple(),))
    cert = compile_witness(a, b, Fraction(2), w)  # eps above max(a)
    assert all(e.is_zero for row in cert.t.entries for e in row)


def test_compile_two_piece_partition(z4):
    # a two-point support split across two pieces with different moves
    a = chi_tuple(z4, {0, 1})
    b = chi_tuple(z4, {2, 3})
    w = Witness(
        ((
            (frozenset({0}), 2, 0),
            (frozenset({1}), 2, 0),
        ),)
    )
    cert = compile_witness(a, b, Fraction(1, 2), w)
    # sum of squares of the partition roots rebuilds the cutdown exactly
    total = Func.zero(z4)
    for f in cert.partition_roots.values():
        total = total + f * f
    assert total == a.cutdown(Fraction(1, 2)).entries[0]


def test_compile_rejects_bad_witness(z3):
    a = chi_tuple(z3, {0, 1})
    b = chi_tuple(z3, {2})
    w = Witness((((frozenset({0, 1}), 1, 0),),))
    with pytest.raises(InvalidWitness):
        compile_witness(a, b, Fraction(1, 2), w)


def test_compile_rejects_nonpositive_eps(z3):
    a = chi_tuple(z3, {0})
    b = chi_tuple(z3, {1, 2})
    w = Witness((((frozenset({0}), 1, 0),),))
    with pytest.raises(NotPositive):
        compile_witness(a, b, 0, w)


# -- extract -------------------------------------------------------------------


def test_extract_roundtrip_z3(z3):
    a = chi_tuple(z3, {0})
    b = chi_tuple(z3, {1, 2})
    w = Witness((((frozenset({0}), 1, 0),),))
    cert = compile_witness(a, b, Fraction(1, 2), w)
    w2 = extract_witness(a, b, cert.epsilon, cert.delta, cert.t)
    assert check_witness(
        z3, a.cutdown(cert.epsilon).supports(), b.supports(), w2
    )


def test_extract_zero_certificate(z3):
    a = chi_tuple(z3, {0})
    b = chi_tuple(z3, {1, 2})
    t = MatrixElement.zero(z3, 1)
    w = extract_witness(a, b, Fraction(2), Fraction(1, 2), t)
    assert w.rows == (tuple(),)


def test_extract_rejects_corrupted_t(z3):
    a = chi_tuple(z3, {0})
    b = chi_tuple(z3, {1, 2})
    w = Witness((((frozenset({0}), 1, 0),),))
    cert = compile_witness(a, b, Fraction(1, 2), w)
    bad = cert.t + cert.t  # doubles the entry, breaks the identity
    with pytest.raises(PreconditionFailed):
        extract_witness(a, b, cert.epsilon, cert.delta, bad)


def test_extract_handbuilt_two_group_elements(z4):
    # b covers two tagged targets reached with two different moves
    a = chi_tuple(z4, {0, 1})
    b = chi_tuple(z4, {1}, {3})
    w = search_subequivalence(z4, a.cutdown(Fraction(1, 2)).supports(), b.supports())
    cert = compile_witness(a, b, Fraction(1, 2), w)
    w2 = extract_witness(a, b, cert.epsilon, cert.delta, cert.t)
    rows = [trip for row in w2.rows for trip in row]
    assert len({s for _, s, _ in rows}) >= 2
    assert check_witness(z4, a.cutdown(Fraction(1, 2)).supports(), b.supports(), w2)


# -- randomized exactness ---------------------------------------------------------


def test_compile_exactness_randomized():
    rng = random.Random(40)
    done = 0
    while done < 60:
        sys = random_free_system(rng, max_points=6)
        a = rational_tuple(rng, sys, rng.randint(1, 2))
        b = rational_tuple(rng, sys, rng.randint(1, 2))
        eps = rng.choice([Fraction(1, 4), Fraction(1, 2), Fraction(1)])
        acut = a.cutdown(eps)
        w = search_subequivalence(sys, acut.supports(), b.supports())
        if w is None:
            continue
        done += 1
        cert = compile_witness(a, b, eps, w)  # verifies the identity internally
        assert matrix_is_r_normalizer(cert.t, "entrywise")
        assert matrix_is_r_normalizer(cert.t, "support")
        w2 = extract_witness(a, b, eps, cert.delta, cert.t)
        assert check_witness(sys, acut.supports(), b.supports(), w2)
        assert cuntz_oracle(a.cutdown(eps), b)


# -- single-row assembly ------------------------------------------------------------


def test_single_row_single_term(z3):
    f = Func.indicator(z3, {0})
    v = single_row_rnormalizer(f, [f], [0])
    assert v == __import__("dynalg").CrossedElement.monomial(f, 0)
    assert is_r_normalizer_by_support(v)


def test_single_row_two_terms(z4):
    f = Func.indicator(z4, {0, 1})
    h1 = Func.indicator(z4, {0})
    h2 = Func.indicator(z4, {1})
    v = single_row_rnormalizer(f, [h1, h2], [1, 2])
    assert is_r_normalizer_by_support(v)


def test_single_row_overlap_rejected(z4):
    f = Func.indicator(z4, {0})
    with pytest.raises(SupportOverlap):
        single_row_rnormalizer(f, [f, f], [0, 0])


def test_single_row_randomized():
    rng = random.Random(41)
    for _ in range(40):
        sys = random_free_system(rng, max_points=6)
        pts = list(range(sys.n_points))
        rng.shuffle(pts)
        f = Func.indicator(sys, pts[: rng.randint(1, sys.n_points)])
        k = rng.randint(1, min(3, sys.group.order))
        parts = [[] for _ in range(k)]
        for x in f.support:
            parts[rng.randrange(k)].append(x)
        weights = [Func.indicator(sys, p) for p in parts]
        moves = rng.sample(range(sys.group.order), k)
        try:
            v = single_row_rnormalizer(f, weights, moves)
        except SupportOverlap:
            continue
        assert is_r_normalizer_by_support(v)


# -- the three-way equivalence suite -------------------------------------------------


def test_suite_consistent_when_subequivalent(z3):
    a = chi_tuple(z3, {0})
    b = chi_tuple(z3, {1, 2})
    report = prop_equivalence_suite(a, b)
    assert report.subequivalent and report.consistent
    assert all(r.compiled for r in report.eps_results)
    assert all(
        r.residual_norm <= r.residual_bound for r in report.eps_results
    )


def test_suite_identity_case(z3):
    a = chi_tuple(z3, {0, 1})
    report = prop_equivalence_suite(a, a)
    assert report.subequivalent and report.consistent


def test_suite_refutation(z3):
    a = chi_tuple(z3, {0, 1})
    b = chi_tuple(z3, {2})
    report = prop_equivalence_suite(a, b)
    assert not report.subequivalent and report.consistent
    assert any(not r.witness_found for r in report.eps_results)
    assert any("no witness" in note for note in report.notes)


def test_suite_randomized_consistency():
    rng = random.Random(42)
    for _ in range(25):
        sys = random_free_system(rng, max_points=5, max_group=3)
        a = rational_tuple(rng, sys, 1)
        b = rational_tuple(rng, sys, 1)
        report = prop_equivalence_suite(a, b)
        assert report.consistent

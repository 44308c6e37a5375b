"""Compilation between combinatorial witnesses and one-sided normalizers.

A witness for (a - eps)_+ against b compiles to a matrix r-normalizer t
with

    t* (b - delta)_+ t = (a - eps)_+        (exact, coefficientwise)

and such a t decompiles back to a witness.  The compiler works through
exact square roots: each source piece carries the square root of its
share of (a_i - eps)_+, and each target carries the inverse square root
of (b_l - delta)_+ on the translated footprint.  Disjointness of the
translated pieces guarantees that every scalar sum along the way
combines like radicals, so a radical mismatch inside the compiler is an
internal invariant failure, not a user error.

delta is chosen as half the minimum of b over the translated witness
footprint; on a finite space this always keeps the footprint inside the
support of (b - 2*delta)_+.  The cover is disjointified first-piece-wins
in row order, and closures are identities (finite spaces are discrete),
so pieces are used as given.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import (
    CrossedElement,
    DiagTuple,
    Func,
    MatrixElement,
    operator_norm,
)
from .comparison import Witness, check_witness, diag_subequivalent, search_subequivalence
from .errors import (
    InvalidWitness,
    NotPositive,
    NotRational,
    PreconditionFailed,
    SupportOverlap,
)
from .normalizers import (
    coefficient_supports_disjoint,
    is_r_normalizer,
    matrix_is_r_normalizer,
)
from .scalars import RadScalar

__all__ = [
    "CompiledWitness",
    "compile_witness",
    "extract_witness",
    "single_row_rnormalizer",
    "prop_equivalence_suite",
    "EquivalenceSuiteReport",
]


@dataclass(frozen=True)
class CompiledWitness:
    """An r-normalizer t with t*(b-delta)_+ t = (a-eps)_+, plus the
    square-root data used to assemble it."""

    t: MatrixElement
    delta: Fraction
    epsilon: Fraction
    partition_roots: dict  # (i, j) -> Func, the h_{i,j}
    target_inverse_roots: dict  # l -> Func, the inverse roots on the footprint


def _require_rational_tuple(a: DiagTuple, name: str) -> None:
    for f in a.entries:
        for v in f.values:
            if not (isinstance(v, RadScalar) and v.is_rational):
                raise NotRational("%s must be rational-valued" % name)


def compile_witness(
    a: DiagTuple, b: DiagTuple, eps, w: Witness
) -> CompiledWitness:
    """Compile a witness for (a - eps)_+ against b into an exact certificate.

    Preconditions: a, b rational-valued positive tuples, eps > 0, and w a
    valid witness for the supports of (a - eps)_+ against the supports of
    b (checked, InvalidWitness otherwise).  The returned matrix satisfies
    the r-normalizer predicate and the exact conjugation identity; both
    are re-verified before returning.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise NotPositive("eps must be positive")
    if a.system is not b.system:
        raise InvalidWitness("tuples over different systems")
    _require_rational_tuple(a, "a")
    _require_rational_tuple(b, "b")
    sys = a.system
    acut = a.cutdown(eps)
    F = acut.supports()
    V = b.supports()
    if not check_witness(sys, F, V, w):
        raise InvalidWitness("witness does not certify the cutdown supports")

    n = max(len(a), len(b))

    # Disjointify the cover: each source point joins its first covering piece.
    pieces: dict[tuple[int, int], set] = {}
    for i, row in enumerate(w.rows):
        for p in sorted(F[i]):
            for j, (U, s, k) in enumerate(row):
                if p in U:
                    pieces.setdefault((i, j), set()).add(p)
                    break

    # delta: half the minimum of b over the translated witness pieces.
    min_val: Optional[Fraction] = None
    for (i, j), pts in pieces.items():
        _, s, k = w.rows[i][j]
        for p in pts:
            v = b.entries[k].values[sys.act[s][p]].as_fraction()
            if min_val is None or v < min_val:
                min_val = v
    delta = min_val / 2 if min_val is not None else Fraction(1)

    # Square-root partition of (a_i - eps)_+ along the disjointified cover.
    roots: dict[tuple[int, int], Func] = {}
    for (i, j), pts in pieces.items():
        roots[(i, j)] = acut.entries[i].restrict(pts).sqrt()

    # Inverse square roots of (b_l - delta)_+ on the needed footprint.
    footprint: dict[int, set] = {}
    for (i, j), pts in pieces.items():
        _, s, k = w.rows[i][j]
        footprint.setdefault(k, set()).update(sys.act[s][p] for p in pts)
    inv_roots: dict[int, Func] = {}
    for l, pts in sorted(footprint.items()):
        vals = {}
        for q in pts:
            shifted = b.entries[l].values[q].as_fraction() - delta
            vals[q] = RadScalar.sqrt_of(shifted).inverse()
        inv_roots[l] = Func.from_dict(sys, vals)

    # t_{l i} = sum over pieces tagged l of  bhat_l . u_s . h_{i,j}
    zero = CrossedElement.zero(sys)
    entries = [[zero for _ in range(n)] for _ in range(n)]
    for (i, j), pts in sorted(pieces.items()):
        _, s, k = w.rows[i][j]
        h = roots[(i, j)]
        coeff = inv_roots[k] * h.compose_action(sys.group.inv(s))
        entries[k][i] = entries[k][i] + CrossedElement.monomial(coeff, s)
    t = MatrixElement(sys, entries)

    if not matrix_is_r_normalizer(t, method="entrywise"):
        raise InvalidWitness("compiled matrix fails the r-normalizer predicate")
    bcut = b.cutdown(delta).padded(n).to_matrix()
    lhs = (t.adjoint() * bcut) * t
    rhs = acut.padded(n).to_matrix()
    if lhs != rhs:
        raise InvalidWitness("compiled certificate fails the exact identity")
    return CompiledWitness(
        t=t,
        delta=delta,
        epsilon=eps,
        partition_roots=roots,
        target_inverse_roots=inv_roots,
    )


def extract_witness(
    a: DiagTuple, b: DiagTuple, eps, delta, t: MatrixElement
) -> Witness:
    """Recover a witness from an exact r-normalizer certificate.

    Preconditions (verified, PreconditionFailed otherwise): t is a matrix
    r-normalizer and t*(b-delta)_+ t = (a-eps)_+ exactly.  The returned
    witness covers the supports of (a-eps)_+ by the pulled-back supports
    of the entries of t against b; it need not reproduce the witness that
    produced t, but it always passes check_witness.
    """
    eps = Fraction(eps)
    delta = Fraction(delta)
    sys = a.system
    if not matrix_is_r_normalizer(t, method="entrywise"):
        raise PreconditionFailed("t is not a matrix r-normalizer")
    n = t.n
    acut = a.cutdown(eps)
    bcut = b.cutdown(delta)
    lhs = (t.adjoint() * bcut.padded(n).to_matrix()) * t
    if lhs != acut.padded(n).to_matrix():
        raise PreconditionFailed("t*(b-delta)_+t differs from (a-eps)_+")

    V = b.supports()
    rows = []
    for i in range(len(a)):
        triples = []
        for k in range(n):
            if k >= len(b):
                break
            entry = t.entries[k][i]
            for s in entry.nonzero_groups:
                meet = entry.coeffs[s].support & V[k]
                if not meet:
                    continue
                sinv = sys.group.inv(s)
                U = frozenset(sys.act[sinv][q] for q in meet)
                triples.append((U, s, k))
        triples.sort(key=lambda t3: (t3[1], t3[2], sorted(t3[0])))
        rows.append(tuple(triples))
    w = Witness(tuple(rows))
    assert check_witness(sys, acut.supports(), V, w), "extracted witness invalid"
    return w


def single_row_rnormalizer(
    f: Func, weights: Sequence[Func], moves: Sequence[int]
) -> CrossedElement:
    """Assemble v = sum_i ((f h_i)^(1/2) . alpha_{s_i^{-1}}) u_{s_i}.

    Requires the translated supports of the square roots to be pairwise
    disjoint (SupportOverlap names the first failing pair); the result
    then passes the one-sided support criterion by construction.
    """
    if len(weights) != len(moves):
        raise ValueError("need one group element per weight")
    sys = f.system
    if not f.is_positive:
        raise NotPositive("f must be positive")
    coeffs = []
    for h in weights:
        if not h.is_positive:
            raise NotPositive("weights must be positive")
        coeffs.append((f * h).sqrt())
    translated = [c.compose_action(sys.group.inv(s)) for c, s in zip(coeffs, moves)]
    seen: set = set()
    for idx, c in enumerate(translated):
        if seen & c.support:
            prev = next(
                i for i, d in enumerate(translated[:idx]) if d.support & c.support
            )
            raise SupportOverlap(
                "translated supports of terms %d and %d overlap" % (prev, idx)
            )
        seen |= c.support
    v = CrossedElement.zero(sys)
    for c, s in zip(translated, moves):
        v = v + CrossedElement.monomial(c, s)
    assert coefficient_supports_disjoint(v)
    if sys.is_free:
        assert is_r_normalizer(v)
    return v


@dataclass(frozen=True)
class EpsResult:
    eps: Fraction
    witness_found: bool
    compiled: bool
    delta: Optional[Fraction]
    residual_norm: Optional[float]
    residual_bound: Optional[float]


@dataclass(frozen=True)
class EquivalenceSuiteReport:
    subequivalent: bool
    eps_results: tuple[EpsResult, ...]
    consistent: bool
    notes: tuple[str, ...]


def _default_eps_grid(a: DiagTuple) -> list[Fraction]:
    values = sorted(
        {
            v.as_fraction()
            for f in a.entries
            for v in f.values
            if isinstance(v, RadScalar) and v.is_rational and v.re > 0
        }
    )
    if not values:
        return [Fraction(1, 2)]
    grid = {values[0] / 2}
    grid.update(values)
    grid.add(values[-1] + 1)
    return sorted(grid)


def prop_equivalence_suite(
    a: DiagTuple, b: DiagTuple, eps_grid: Optional[Sequence] = None
) -> EquivalenceSuiteReport:
    """Cross-check the three faces of subequivalence on an eps grid.

    (i) the combinatorial preorder, decided by search; (ii) approximate
    conjugation, measured as the float norm of t* b t - a for the
    compiled t; (iii) exact conjugation after cutdowns, via the compiler.
    The grid always contains an eps below the smallest positive value of
    a, where the cutdown supports equal the full supports, so a failed
    search there refutes (i).  Item (ii) is a finite-grid surrogate for a
    limit statement; the report notes this.
    """
    holds, _ = diag_subequivalent(a, b)
    grid = [Fraction(e) for e in eps_grid] if eps_grid is not None else _default_eps_grid(a)
    n = max(len(a), len(b))
    results = []
    consistent = True
    for eps in grid:
        acut = a.cutdown(eps)
        w = search_subequivalence(a.system, acut.supports(), b.supports())
        if w is None:
            results.append(EpsResult(eps, False, False, None, None, None))
            if holds:
                consistent = False
            continue
        cert = compile_witness(a, b, eps, w)
        tmat = cert.t
        residual = (tmat.adjoint() * b.padded(n).to_matrix()) * tmat - a.padded(n).to_matrix()
        res_norm = operator_norm(residual).value
        tnorm = operator_norm(tmat).value
        bound = float(eps) + float(cert.delta) * tnorm * tnorm + 1e-6
        results.append(
            EpsResult(eps, True, True, cert.delta, res_norm, bound)
        )
        if res_norm > bound:
            consistent = False
    if not holds:
        # (i) false must be matched by a refuted search at some grid point
        if all(r.witness_found for r in results):
            consistent = False
    notes = (
        "approximate-conjugation rows are a finite eps-grid surrogate for the "
        "limit statement; residuals are reported with the bound eps + delta*||t||^2",
    )
    if not holds:
        notes = notes + ("no witness within the search bound; no claim beyond the grid",)
    return EquivalenceSuiteReport(
        subequivalent=holds,
        eps_results=tuple(results),
        consistent=consistent,
        notes=notes,
    )

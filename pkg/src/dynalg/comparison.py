"""Dynamical subequivalence, witness search, and the type semigroup.

A tuple of sets (F_1, ..., F_n) is subequivalent to (V_1, ..., V_m) when
each F_i is covered by pieces U_{i,j} whose translates s_{i,j}U_{i,j},
tagged with target indices k_{i,j}, fit disjointly inside the tagged
targets V_{k_{i,j}}.  On a finite space every subset is clopen, so for
diagonal tuples the single maximal choice F_i = supp(a_i) decides the
preorder.

The search assigns a (group element, target) pair to every point rather
than enumerating covers; grouping an injective per-point assignment by
its pairs produces a witness and conversely, so the two formulations are
equivalent.  Search order is lexicographic in (point, group, target)
indices and complete: None means no witness exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .algebra import (
    CrossedElement,
    DiagTuple,
    Func,
    MatrixElement,
    NORM_TOL,
    matrix_orbit_blocks,
)
from .dynsys import DynSystem, InvariantMeasure, extreme_invariant_measures
from .errors import IndexOutOfRange, NotFree, NotPositive, ResourceBound

import numpy as np

__all__ = [
    "Witness",
    "check_witness",
    "search_subequivalence",
    "diag_subequivalent",
    "d_tau",
    "d_tau_tuple",
    "ComparisonResult",
    "dynamical_comparison_check",
    "TypeSemigroup",
    "type_semigroup",
    "almost_unperforation_check",
    "cuntz_oracle",
]


@dataclass(frozen=True)
class Witness:
    """Rows of triples (U, s, k): piece, group element, target index."""

    rows: tuple[tuple[tuple[frozenset, int, int], ...], ...]

    def __post_init__(self):
        for row in self.rows:
            for U, s, k in row:
                if not U:
                    raise ValueError("witness pieces must be nonempty")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def translated_tagged_sets(self, sys: DynSystem):
        for i, row in enumerate(self.rows):
            for U, s, k in row:
                yield i, frozenset(sys.act[s][x] for x in U), s, k


def check_witness(
    sys: DynSystem,
    F: Sequence[Iterable[int]],
    V: Sequence[Iterable[int]],
    w: Witness,
) -> bool:
    """Verify the cover and tagged-disjointness conditions exactly."""
    F = [frozenset(s) for s in F]
    V = [frozenset(s) for s in V]
    if len(w.rows) != len(F):
        raise IndexOutOfRange("witness has %d rows for %d source sets" % (len(w.rows), len(F)))
    for row in w.rows:
        for U, s, k in row:
            if not (0 <= s < sys.group.order):
                raise IndexOutOfRange("group index %d out of range" % s)
            if not (0 <= k < len(V)):
                raise IndexOutOfRange("target index %d out of range" % k)
            for x in U:
                if not (0 <= x < sys.n_points):
                    raise IndexOutOfRange("point index %d out of range" % x)
    for i, row in enumerate(w.rows):
        covered = frozenset().union(*(U for U, _, _ in row)) if row else frozenset()
        if not F[i] <= covered:
            return False
    seen: set[tuple[int, int]] = set()
    for _, translated, _, k in w.translated_tagged_sets(sys):
        if not translated <= V[k]:
            return False
        tagged = {(x, k) for x in translated}
        if seen & tagged:
            return False
        seen |= tagged
    return True


def _assignment_to_witness(
    points: Sequence[tuple[int, int]], choice: Sequence[tuple[int, int]], n_rows: int
) -> Witness:
    grouped: list[dict[tuple[int, int], set]] = [dict() for _ in range(n_rows)]
    for (i, p), (s, k) in zip(points, choice):
        grouped[i].setdefault((s, k), set()).add(p)
    rows = tuple(
        tuple(
            (frozenset(pts), s, k)
            for (s, k), pts in sorted(g.items())
        )
        for g in grouped
    )
    return Witness(rows)


def search_subequivalence(
    sys: DynSystem,
    F: Sequence[Iterable[int]],
    V: Sequence[Iterable[int]],
) -> Optional[Witness]:
    """Exhaustive backtracking search for a witness; None means none exists.

    Each point of each F_i gets a pair (s, k) with s.point in V_k, all
    tagged images distinct.  Points are visited in (row, point) order and
    pairs tried in (group, target) order, so the returned witness is the
    lexicographically least one.  Subtrees that cannot be completed for
    counting reasons (per orbit, remaining points exceed unused tagged
    targets) are pruned; the prune only removes infeasible branches, so
    completeness is preserved.
    """
    F = [frozenset(s) for s in F]
    V = [frozenset(s) for s in V]
    points = [(i, p) for i, Fi in enumerate(F) for p in sorted(Fi)]
    if not points:
        return Witness(tuple(() for _ in F))
    choices = []
    for _, p in points:
        opts = [
            (s, k)
            for s in range(sys.group.order)
            for k in range(len(V))
            if sys.act[s][p] in V[k]
        ]
        if not opts:
            return None
        choices.append(opts)

    orbit_of = sys.orbit_id
    n_orbits = len(sys.orbit_partition)
    capacity = [0] * n_orbits
    for k, Vk in enumerate(V):
        for q in Vk:
            capacity[orbit_of[q]] += 1
    remaining_after = [[0] * n_orbits for _ in range(len(points) + 1)]
    for d in range(len(points) - 1, -1, -1):
        counts = list(remaining_after[d + 1])
        counts[orbit_of[points[d][1]]] += 1
        remaining_after[d] = counts

    used: set[tuple[int, int]] = set()
    used_per_orbit = [0] * n_orbits
    choice: list[tuple[int, int]] = []

    def feasible(depth: int) -> bool:
        rem = remaining_after[depth]
        return all(rem[o] <= capacity[o] - used_per_orbit[o] for o in range(n_orbits))

    def dfs(depth: int) -> bool:
        if depth == len(points):
            return True
        if not feasible(depth):
            return False
        _, p = points[depth]
        for s, k in choices[depth]:
            q = sys.act[s][p]
            tag = (q, k)
            if tag in used:
                continue
            used.add(tag)
            used_per_orbit[orbit_of[q]] += 1
            choice.append((s, k))
            if dfs(depth + 1):
                return True
            choice.pop()
            used_per_orbit[orbit_of[q]] -= 1
            used.remove(tag)
        return False

    if dfs(0):
        return _assignment_to_witness(points, choice, len(F))
    return None


def diag_subequivalent(a: DiagTuple, b: DiagTuple) -> tuple[bool, Optional[Witness]]:
    """Decide a <= b in the dynamical preorder, with a witness when true.

    On a finite space the compact subsets of supp(a_i) are all its
    subsets, and the maximal choice F_i = supp(a_i) dominates.
    """
    w = search_subequivalence(a.system, a.supports(), b.supports())
    return (w is not None), w


def d_tau(f, mu: InvariantMeasure) -> Fraction:
    """Measure of the open support of a positive function (exact)."""
    if not f.is_positive:
        raise NotPositive("d_tau needs a positive function")
    return mu.measure(f.support)


def d_tau_tuple(a: DiagTuple, mu: InvariantMeasure) -> Fraction:
    return sum((d_tau(f, mu) for f in a.entries), Fraction(0))


@dataclass(frozen=True)
class ComparisonResult:
    holds: bool
    counterexample: Optional[tuple[frozenset, frozenset]]
    pairs_checked: int
    exhausted: bool


def dynamical_comparison_check(
    sys: DynSystem, max_pairs: Optional[int] = None
) -> ComparisonResult:
    """Check O < V in measure implies O subequivalent to V, over all pairs.

    Iterates subset pairs (O, V) in bitmask order.  A pair qualifies when
    every extreme invariant measure gives mu(O) < mu(V); strictness for
    the extreme measures forces strictness for all convex combinations,
    so the extreme ones suffice.  Returns the first failing pair if any.
    ``max_pairs`` truncates the enumeration (the result then reports
    exhausted=False).
    """
    measures = extreme_invariant_measures(sys)
    nx = sys.n_points
    subsets = [frozenset(x for x in range(nx) if m >> x & 1) for m in range(1 << nx)]
    mvals = [[mu.measure(s) for mu in measures] for s in subsets]
    checked = 0
    for io, O in enumerate(subsets):
        for iv, V in enumerate(subsets):
            if max_pairs is not None and checked >= max_pairs:
                return ComparisonResult(True, None, checked, exhausted=False)
            checked += 1
            if not all(mo < mv for mo, mv in zip(mvals[io], mvals[iv])):
                continue
            if search_subequivalence(sys, [O], [V]) is None:
                return ComparisonResult(False, (O, V), checked, exhausted=True)
    return ComparisonResult(True, None, checked, exhausted=True)


# -- the type semigroup --------------------------------------------------


def _subeq_supports(sys: DynSystem, A, B) -> bool:
    return search_subequivalence(sys, A, B) is not None


def _dtau_key(measures, supports) -> tuple:
    return tuple(
        sum((mu.measure(s) for s in supports), Fraction(0)) for mu in measures
    )


def _mask_of(s: frozenset) -> int:
    return sum(1 << x for x in s)


class TypeSemigroup:
    """Equivalence classes of diagonal indicator tuples, truncated at max_n.

    ``classes`` holds lexicographically least representatives; the order
    relation and the addition table are decided by witness search against
    the representatives.  Entries are memoized on first use, since the
    full tables grow quadratically in the class count; ``order`` and
    ``add`` materialize them for table-sized systems.  A constructed
    instance may also carry explicit tables (used by table-level checks
    and fixtures), which then answer every query.
    """

    def __init__(
        self,
        system: DynSystem,
        max_n: int,
        classes: Sequence[DiagTuple],
        support_reps: Optional[Sequence[tuple]] = None,
        buckets: Optional[dict] = None,
        order: Optional[Sequence[Sequence[bool]]] = None,
        add: Optional[dict] = None,
    ):
        self.system = system
        self.max_n = max_n
        self.classes = tuple(classes)
        if support_reps is None:
            support_reps = [rep.supports() for rep in self.classes]
        self._support_reps = tuple(
            tuple(s for s in rep if s) for rep in support_reps
        )
        if buckets is None:
            measures = extreme_invariant_measures(system)
            buckets = {}
            for idx, rep in enumerate(self._support_reps):
                buckets.setdefault(_dtau_key(measures, rep), []).append(idx)
        self._buckets = buckets
        self._explicit_order = (
            tuple(tuple(bool(v) for v in row) for row in order)
            if order is not None
            else None
        )
        self._explicit_add = dict(add) if add is not None else None
        self._le_memo: dict = {}
        self._add_memo: dict = {}

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def zero_class(self) -> int:
        return 0

    def le(self, i: int, j: int) -> bool:
        """Class i below class j in the induced order."""
        if self._explicit_order is not None:
            return self._explicit_order[i][j]
        if i == j:
            return True
        key = (i, j)
        hit = self._le_memo.get(key)
        if hit is None:
            hit = _subeq_supports(
                self.system, self._support_reps[i], self._support_reps[j]
            )
            self._le_memo[key] = hit
        return hit

    def add_classes(self, i: int, j: int) -> Optional[int]:
        """Class of the direct sum, or None when it leaves the table."""
        if self._explicit_add is not None:
            return self._explicit_add[(i, j)]
        if i > j:
            i, j = j, i
        key = (i, j)
        if key not in self._add_memo:
            combined = self._support_reps[i] + self._support_reps[j]
            self._add_memo[key] = self.class_of_supports(combined)
        return self._add_memo[key]

    def multiple(self, i: int, m: int) -> Optional[int]:
        """Class of m copies of class i, or None when it leaves the table."""
        if m == 0:
            return self.zero_class
        acc = i
        for _ in range(m - 1):
            acc = self.add_classes(acc, i)
            if acc is None:
                return None
        return acc

    def class_of_supports(self, supports) -> Optional[int]:
        """Locate the class of a tuple of supports; None if out of table."""
        stripped = tuple(sorted((frozenset(s) for s in supports if s), key=_mask_of))
        if not stripped:
            return self.zero_class
        if len(stripped) > self.max_n:
            return None
        measures = extreme_invariant_measures(self.system)
        key = _dtau_key(measures, stripped)
        for idx in self._buckets.get(key, ()):
            rep = self._support_reps[idx]
            if _subeq_supports(self.system, stripped, rep) and _subeq_supports(
                self.system, rep, stripped
            ):
                return idx
        return None

    def class_of(self, a: DiagTuple) -> Optional[int]:
        return self.class_of_supports(a.supports())

    @property
    def order(self) -> tuple:
        """The full order table (materializes on first access)."""
        if self._explicit_order is None:
            self._explicit_order = tuple(
                tuple(self.le(i, j) for j in range(self.n_classes))
                for i in range(self.n_classes)
            )
        return self._explicit_order

    @property
    def add(self) -> dict:
        """The full addition table (materializes on first access)."""
        if self._explicit_add is None:
            table = {}
            for i in range(self.n_classes):
                for j in range(i, self.n_classes):
                    table[(i, j)] = table[(j, i)] = self.add_classes(i, j)
            self._explicit_add = table
        return self._explicit_add


def type_semigroup(sys: DynSystem, max_n: int, budget: int = 500_000) -> TypeSemigroup:
    """Enumerate indicator tuples up to size max_n and quotient by mutual
    subequivalence (decided by witness search both ways).

    Candidates are enumerated in lexicographic order (length, then entry
    bitmasks ascending), so the first member seen of each class is its
    canonical representative.  Tuples with a zero entry other than the
    single zero tuple are skipped: dropping zero entries never changes a
    class, and the shorter stripped tuple is enumerated earlier.  Buckets
    keyed by the exact measure vector of the supports limit the pairwise
    comparisons; the preorder is monotone in that vector, so distinct
    keys can never be mutually subequivalent.  Raises ResourceBound when
    more than ``budget`` candidates would be enumerated.
    """
    nx = sys.n_points
    measures = extreme_invariant_measures(sys)
    nonzero_masks = list(range(1, 1 << nx))
    total = 1 + sum(
        _count_multisets(len(nonzero_masks), k) for k in range(1, max_n + 1)
    )
    if total > budget:
        raise ResourceBound(
            "semigroup enumeration needs %d candidates, budget is %d" % (total, budget)
        )

    mask_sets = {m: frozenset(x for x in range(nx) if m >> x & 1) for m in range(1 << nx)}
    mask_measures = [
        [mu.measure(mask_sets[m]) for mu in measures] for m in range(1 << nx)
    ]
    reps: list[tuple[frozenset, ...]] = []
    buckets: dict = {}

    def classify(masks: tuple) -> None:
        key = tuple(
            sum(mask_measures[m][t] for m in masks) for t in range(len(measures))
        )
        supports = None
        for idx in buckets.get(key, ()):
            if supports is None:
                supports = tuple(mask_sets[m] for m in masks if m)
            if _subeq_supports(sys, supports, reps[idx]) and _subeq_supports(
                sys, reps[idx], supports
            ):
                return
        if supports is None:
            supports = tuple(mask_sets[m] for m in masks if m)
        buckets.setdefault(key, []).append(len(reps))
        reps.append(supports)

    classify((0,))  # the zero class, represented by one zero entry
    for k in range(1, max_n + 1):
        for combo in itertools.combinations_with_replacement(nonzero_masks, k):
            classify(combo)

    class_reps = []
    for rep in reps:
        entries = tuple(Func.indicator(sys, s) for s in rep) or (Func.zero(sys),)
        class_reps.append(DiagTuple(sys, entries))
    return TypeSemigroup(
        system=sys,
        max_n=max_n,
        classes=tuple(class_reps),
        support_reps=tuple(reps),
        buckets=buckets,
    )


def _count_multisets(n: int, k: int) -> int:
    from math import comb

    return comb(n + k - 1, k)


def almost_unperforation_check(W: TypeSemigroup):
    """Verify (n+1)x <= ny implies x <= y within the computed table.

    Returns (True, None) or (False, (x, y, n)) with the first violation.
    Only multiples representable inside the table are examined; for each
    n the candidate classes are filtered by representability first.
    """
    for n in range(1, W.max_n + 1):
        xs = [
            (x, W.multiple(x, n + 1))
            for x in range(W.n_classes)
            if W.multiple(x, n + 1) is not None
        ]
        ys = [
            (y, W.multiple(y, n))
            for y in range(W.n_classes)
            if W.multiple(y, n) is not None
        ]
        for x, xx in xs:
            for y, yy in ys:
                if W.le(xx, yy) and not W.le(x, y):
                    return False, (x, y, n)
    return True, None


# -- finite-dimensional Cuntz oracle --------------------------------------


def _as_matrix(a: Union[DiagTuple, CrossedElement]) -> MatrixElement:
    if isinstance(a, DiagTuple):
        return a.to_matrix()
    if isinstance(a, CrossedElement):
        return MatrixElement(a.system, ((a,),))
    raise TypeError("expected a DiagTuple or CrossedElement")


def _check_positive(a: Union[DiagTuple, CrossedElement], tol: float) -> None:
    if isinstance(a, DiagTuple):
        return  # positivity is a construction invariant of DiagTuple
    mat = a.rep_matrix()
    if not np.allclose(mat, mat.conj().T, atol=tol):
        raise NotPositive("element is not self-adjoint within tolerance")
    eigs = np.linalg.eigvalsh(mat)
    if eigs.size and eigs.min() < -tol:
        raise NotPositive("element has an eigenvalue below -%g" % tol)


def cuntz_oracle(
    a: Union[DiagTuple, CrossedElement],
    b: Union[DiagTuple, CrossedElement],
    tol: float = NORM_TOL,
) -> bool:
    """Blockwise rank comparison: rank_O(a) <= rank_O(b) for every orbit.

    For a free action the crossed product is a direct sum of matrix
    algebras, one per orbit, where Cuntz subequivalence of positive
    elements is exactly rank domination block by block.  Ranks are exact
    for rational entries and float-with-tolerance otherwise.
    """
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.system is not mb.system:
        raise ValueError("inputs over different systems")
    if not ma.system.is_free:
        raise NotFree("the rank oracle requires a free action")
    _check_positive(a, tol)
    _check_positive(b, tol)
    blocks_a = matrix_orbit_blocks(ma)
    blocks_b = matrix_orbit_blocks(mb)
    return all(
        ba.rank(tol) <= bb.rank(tol) for ba, bb in zip(blocks_a, blocks_b)
    )

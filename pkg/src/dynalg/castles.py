"""Castles, castle order zero maps, and tracial-Z-stability instances.

A castle is a family of towers (V_t, S_t), V_t a subset of the space and
S_t a tuple of distinct group elements, whose levels {s.V_t} are pairwise
disjoint.  Equipping each tower with a positive contraction f_t supported
in V_t and unit-modulus phases theta_{t,i} on that support yields a map

    phi(e_ij) = sum_t u_{s_{t,i}} theta_{t,i} conj(theta_{t,j}) f_t u_{s_{t,j}}^*

which is completely positive, contractive, order zero, and sends matrix
units to normalizers.  Conversely every normalizer-preserving cpc order
zero map over a free system decomposes into such data; both directions
are implemented here with exact round-trip verification.  A finite space
carries only finitely many disjoint levels, so castles here always have
finitely many towers and the norm-decay condition a castle with
infinitely many towers would need is vacuous.

Order-zero verification is exact and finite: beyond the documented
family of orthogonal positive pairs (diagonal projections p_S against
their complements), the verifier checks the matrix-unit product
relations

    phi(e_ij) phi(e_kl) = 0 for j != k,
    phi(e_ij) phi(e_jl) independent of j,

which make products of images factor through matrix products by
bilinearity, so vanishing on the finite family extends to every
orthogonal pair.  Complete positivity is certified by positivity of the
Choi matrix in the faithful representation (absolute tolerance 1e-9).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import CrossedElement, Func, NORM_TOL, operator_norm, regular_rep
from .comparison import Witness, search_subequivalence
from .dynsys import DynSystem
from .errors import (
    EmptyShape,
    ExactnessError,
    InvalidCastle,
    InvalidCastleData,
    NotFree,
    NotNormalizerPreserving,
    NotOrderZero,
    ResourceBound,
)
from .normalizers import check_normalizer_preserving
from .scalars import RadScalar

__all__ = [
    "Castle",
    "CastleOzmData",
    "OrderZeroMap",
    "TzsInstance",
    "TzsReport",
    "AfCertificate",
    "validate_castle",
    "shape_invariance",
    "almost_finiteness_certificate",
    "orbit_castle",
    "build_castle_ozm",
    "identity_embedding",
    "verify_order_zero",
    "verify_cpc",
    "verify_normalizer_preserving",
    "decompose_ozm",
    "check_tzs_instance",
    "search_tzs_map",
]


@dataclass(frozen=True)
class Castle:
    """Towers (base set, shape tuple); levels must be pairwise disjoint."""

    system: DynSystem
    towers: tuple[tuple[frozenset, tuple[int, ...]], ...]

    def levels(self):
        for t, (base, shape) in enumerate(self.towers):
            for s in shape:
                yield t, s, frozenset(self.system.act[s][x] for x in base)

    def footprint(self) -> frozenset:
        out: set[int] = set()
        for _, _, level in self.levels():
            out |= level
        return frozenset(out)


def validate_castle(c: Castle) -> bool:
    """Exact pairwise disjointness of all levels; shapes must not repeat
    group elements."""
    for _, (base, shape) in enumerate(c.towers):
        if len(set(shape)) != len(shape):
            return False
        if not all(0 <= s < c.system.group.order for s in shape):
            return False
        if not all(0 <= x < c.system.n_points for x in base):
            return False
    seen: set[int] = set()
    for _, _, level in c.levels():
        if seen & level:
            return False
        seen |= level
    return True


def shape_invariance(shape: Iterable[int], K: Iterable[int], sys: DynSystem) -> Fraction:
    """max over g in K of |gS symmetric-difference S| / |S|, exact."""
    S = set(shape)
    if not S:
        raise EmptyShape("shape invariance of an empty set")
    grp = sys.group
    worst = Fraction(0)
    for g in K:
        gS = {grp.mul(g, s) for s in S}
        value = Fraction(len(gS ^ S), len(S))
        if value > worst:
            worst = value
    return worst


@dataclass(frozen=True)
class AfCertificate:
    ok: bool
    invariance_ok: bool
    invariance_values: tuple[Fraction, ...]
    prime_size_ok: bool
    remainder_ok: bool
    remainder: frozenset
    target: frozenset
    witness: Optional[Witness]
    diameter_ok: Optional[bool]


def almost_finiteness_certificate(
    sys: DynSystem,
    K: Iterable[int],
    delta,
    castle: Castle,
    primes: Sequence[Iterable[int]],
    strict_diameter: bool = False,
) -> AfCertificate:
    """Check a castle as an approximation certificate at scale (K, delta).

    Conditions: (a) every shape is (K, delta)-invariant; (b) every prime
    subset satisfies |S'| < delta |S|; (c) the uncovered remainder is
    subequivalent to the union of the prime levels.  A level-diameter
    condition has no content on a discrete finite space; with
    ``strict_diameter`` the surrogate |V_t| = 1 is enforced instead.
    """
    delta = Fraction(delta)
    if not validate_castle(castle):
        raise InvalidCastle("castle levels are not pairwise disjoint")
    K = list(K)
    primes = [set(p) for p in primes]
    if len(primes) != len(castle.towers):
        raise InvalidCastle("need one prime subset per tower")
    for (base, shape), prime in zip(castle.towers, primes):
        if not prime <= set(shape):
            raise InvalidCastle("prime subset not contained in its shape")

    values = tuple(
        shape_invariance(shape, K, sys) if K else Fraction(0)
        for _, shape in castle.towers
    )
    invariance_ok = all(v < delta for v in values)
    prime_size_ok = all(
        Fraction(len(prime)) < delta * len(shape)
        for (_, shape), prime in zip(castle.towers, primes)
    )
    remainder = frozenset(range(sys.n_points)) - castle.footprint()
    target: set[int] = set()
    for (base, shape), prime in zip(castle.towers, primes):
        for s in prime:
            target |= {sys.act[s][x] for x in base}
    witness = search_subequivalence(sys, [remainder], [frozenset(target)])
    remainder_ok = witness is not None
    diameter_ok = None
    if strict_diameter:
        diameter_ok = all(len(base) <= 1 for base, _ in castle.towers)
    ok = (
        invariance_ok
        and prime_size_ok
        and remainder_ok
        and (diameter_ok is not False)
    )
    return AfCertificate(
        ok=ok,
        invariance_ok=invariance_ok,
        invariance_values=values,
        prime_size_ok=prime_size_ok,
        remainder_ok=remainder_ok,
        remainder=remainder,
        target=frozenset(target),
        witness=witness,
        diameter_ok=diameter_ok,
    )


@dataclass(frozen=True)
class CastleOzmData:
    """A castle with equal-size shapes, weights, and phases.

    weights[t] is a positive contraction supported in the tower base;
    phases[t][i] is unit-modulus on that support and zero outside.
    """

    castle: Castle
    weights: tuple[Func, ...]
    phases: tuple[tuple[Func, ...], ...]
    n: int

    def validate(self) -> None:
        c = self.castle
        if not validate_castle(c):
            raise InvalidCastleData("underlying castle is invalid")
        if len(self.weights) != len(c.towers) or len(self.phases) != len(c.towers):
            raise InvalidCastleData("need one weight and one phase row per tower")
        for (base, shape), f, th_row in zip(c.towers, self.weights, self.phases):
            if len(shape) != self.n:
                raise InvalidCastleData("tower shape size differs from n")
            if not f.is_positive:
                raise InvalidCastleData("weight is not positive")
            if not f.support <= base:
                raise InvalidCastleData("weight supported outside its tower base")
            if not f.sup_le_one():
                raise InvalidCastleData("weight exceeds norm one")
            if len(th_row) != self.n:
                raise InvalidCastleData("phase row size differs from n")
            for theta in th_row:
                if theta.support != f.support:
                    raise InvalidCastleData("phase not carried by the weight support")
                for x in f.support:
                    if not theta.values[x].is_unit_modulus():
                        raise InvalidCastleData("phase value is not unit modulus")

    @classmethod
    def with_trivial_phases(
        cls, castle: Castle, weights: Sequence[Func], n: int
    ) -> "CastleOzmData":
        phases = tuple(
            tuple(Func.indicator(castle.system, f.support) for _ in range(n))
            for f in weights
        )
        return cls(castle=castle, weights=tuple(weights), phases=phases, n=n)


class OrderZeroMap:
    """A linear map given by its matrix-unit images."""

    def __init__(self, system: DynSystem, n: int, images: dict):
        self.system = system
        self.n = n
        self.images = {
            (i, j): images[(i, j)] for i in range(n) for j in range(n)
        }

    @classmethod
    def zero(cls, system: DynSystem, n: int) -> "OrderZeroMap":
        z = CrossedElement.zero(system)
        return cls(system, n, {(i, j): z for i in range(n) for j in range(n)})

    def image(self, i: int, j: int) -> CrossedElement:
        return self.images[(i, j)]

    def unit_image(self) -> CrossedElement:
        acc = CrossedElement.zero(self.system)
        for i in range(self.n):
            acc = acc + self.images[(i, i)]
        return acc

    def apply(self, coefficients) -> CrossedElement:
        """Linear extension to a scalar matrix."""
        acc = CrossedElement.zero(self.system)
        for i in range(self.n):
            for j in range(self.n):
                c = coefficients[i][j]
                img = self.images[(i, j)]
                if img.is_zero:
                    continue
                term = img.scaled(c)
                if not term.is_zero:
                    acc = acc + term
        return acc

    def __eq__(self, other):
        if not isinstance(other, OrderZeroMap):
            return NotImplemented
        return (
            self.system is other.system
            and self.n == other.n
            and all(
                self.images[(i, j)] == other.images[(i, j)]
                for i in range(self.n)
                for j in range(self.n)
            )
        )

    __hash__ = None

    def __repr__(self):
        return "OrderZeroMap(n=%d over %r)" % (self.n, self.system)


def build_castle_ozm(data: CastleOzmData) -> OrderZeroMap:
    """Assemble the map from castle data and verify its three properties."""
    data.validate()
    sys = data.castle.system
    grp = sys.group
    n = data.n
    images = {}
    for i in range(n):
        for j in range(n):
            acc = CrossedElement.zero(sys)
            for (base, shape), f, th_row in zip(
                data.castle.towers, data.weights, data.phases
            ):
                psi = th_row[i] * th_row[j].conj() * f
                if psi.is_zero:
                    continue
                si, sj = shape[i], shape[j]
                g = grp.mul(si, grp.inv(sj))
                coeff = psi.compose_action(grp.inv(si))
                acc = acc + CrossedElement.monomial(coeff, g)
            images[(i, j)] = acc
    phi = OrderZeroMap(sys, n, images)
    if not verify_order_zero(phi):
        raise InvalidCastleData("assembled map fails the order-zero relations")
    if not verify_cpc(phi):
        raise InvalidCastleData("assembled map fails complete positivity")
    if not verify_normalizer_preserving(phi):
        raise InvalidCastleData("assembled map fails normalizer preservation")
    return phi


def orbit_castle(sys: DynSystem, orbit_index: int = 0) -> Castle:
    """The one-tower castle over a free orbit: base its least point, shape
    the whole group."""
    if not sys.is_free:
        raise NotFree("orbit castles need a free action")
    orbit = sys.orbit_partition[orbit_index]
    base = frozenset({orbit[0]})
    shape = tuple(range(sys.group.order))
    return Castle(sys, ((base, shape),))


def identity_embedding(sys: DynSystem) -> OrderZeroMap:
    """The isomorphism of the full matrix algebra with the crossed product
    of a free transitive system, as a castle map over the orbit castle."""
    if not (sys.is_free and sys.is_minimal):
        raise NotFree("identity embedding needs a free transitive system")
    castle = orbit_castle(sys)
    base = castle.towers[0][0]
    weights = (Func.indicator(sys, base),)
    data = CastleOzmData.with_trivial_phases(castle, weights, sys.group.order)
    return build_castle_ozm(data)


# -- verifiers -------------------------------------------------------------


def verify_order_zero(phi: OrderZeroMap) -> bool:
    """Exact order-zero check via matrix-unit relations plus the diagonal
    positive-pair family.

    The relations certify that products of images vanish on every
    orthogonal pair, positive or not.  For completely positive maps that
    is equivalent to annihilating orthogonal positives, which is the
    defining property; the toolkit's maps are checked for complete
    positivity alongside.
    """
    n = phi.n
    img = phi.images
    for i in range(n):
        for j in range(n):
            a = img[(i, j)]
            if a.is_zero:
                continue
            for k in range(n):
                if k == j:
                    continue
                for l in range(n):
                    if not (a * img[(k, l)]).is_zero:
                        return False
    for i in range(n):
        for l in range(n):
            ref = None
            for j in range(n):
                prod = img[(i, j)] * img[(j, l)]
                if ref is None:
                    ref = prod
                elif prod != ref:
                    return False
    # documented positive family: diagonal projections against complements
    for bits in range(1, 1 << n):
        S = [i for i in range(n) if bits >> i & 1]
        T = [i for i in range(n) if not bits >> i & 1]
        if not T:
            continue
        pS = CrossedElement.zero(phi.system)
        for i in S:
            pS = pS + img[(i, i)]
        pT = CrossedElement.zero(phi.system)
        for i in T:
            pT = pT + img[(i, i)]
        if not (pS * pT).is_zero:
            return False
    return True


def verify_cpc(phi: OrderZeroMap, tol: float = NORM_TOL) -> bool:
    """Complete positivity via the Choi matrix in the representation,
    contractivity via the operator norm of the unit image.

    Adjoint symmetry phi(e_ij)* = phi(e_ji) is checked exactly first; it
    is necessary for positivity and keeps the Choi matrix hermitian up to
    float error only.
    """
    n = phi.n
    for i in range(n):
        for j in range(i, n):
            if phi.images[(i, j)].adjoint() != phi.images[(j, i)]:
                return False
    dim = phi.system.group.order * phi.system.n_points
    choi = np.zeros((n * dim, n * dim), dtype=complex)
    for i in range(n):
        for j in range(n):
            block = regular_rep(phi.images[(i, j)])
            choi[i * dim : (i + 1) * dim, j * dim : (j + 1) * dim] = block
    if not np.allclose(choi, choi.conj().T, atol=tol):
        return False
    eigs = np.linalg.eigvalsh(choi)
    if eigs.size and eigs.min() < -tol:
        return False
    return operator_norm(phi.unit_image()).value <= 1 + tol


def verify_normalizer_preserving(phi: OrderZeroMap) -> bool:
    """Every matrix-unit image is a normalizer of C(X)."""
    return check_normalizer_preserving(phi.images, phi.n)


# -- decomposition ---------------------------------------------------------


def decompose_ozm(phi: OrderZeroMap) -> CastleOzmData:
    """Recover castle data from a normalizer-preserving cpc order zero map.

    Requires a free system.  The coefficients of phi(e_1i) against u_g^*
    have pairwise disjoint supports; partitioning the support of
    phi(e_11) by the induced (group-vector, value) profile produces the
    tower bases, weights, and phases.  The rebuilt map is compared to phi
    exactly before returning.
    """
    sys = phi.system
    if not sys.is_free:
        raise NotFree("decomposition needs a free action")
    n = phi.n
    for i in range(n):
        for j in range(i, n):
            if phi.images[(i, j)].adjoint() != phi.images[(j, i)]:
                raise NotOrderZero("images are not adjoint-symmetric")
    if not verify_order_zero(phi):
        raise NotOrderZero("map fails the exact order-zero relations")
    if not verify_cpc(phi):
        raise NotOrderZero("map is not completely positive contractive")
    if not verify_normalizer_preserving(phi):
        raise NotNormalizerPreserving("some matrix-unit image is not a normalizer")

    grp = sys.group
    f0 = phi.images[(0, 0)].as_func()
    if not f0.is_positive:
        raise NotOrderZero("phi(e_11) is not positive")
    for i in range(n):
        for j in range(n):
            for f in phi.images[(i, j)].coeffs:
                for v in f.values:
                    if not isinstance(v, RadScalar):
                        raise ExactnessError(
                            "decomposition needs exact scalars, found %r" % (v,)
                        )

    # h[i][g] is the coefficient of phi(e_1i) against u_g^*.
    h = []
    for i in range(n):
        coeffs = phi.images[(0, i)].coeffs
        h.append([coeffs[grp.inv(g)] for g in range(grp.order)])

    # Per point of supp(phi(e_11)): the unique acting element for each i,
    # with |h_{i,g}(x)| equal to the weight value there.
    profile: dict[int, tuple] = {}
    for x in sorted(f0.support):
        svec = []
        for i in range(n):
            hits = [g for g in range(grp.order) if not h[i][g].values[x].is_zero]
            if len(hits) != 1:
                raise NotOrderZero(
                    "point %d sees %d coefficients in row %d" % (x, len(hits), i)
                )
            g = hits[0]
            if h[i][g].values[x].modulus() != f0.values[x]:
                raise NotOrderZero("coefficient modulus differs from the weight")
            svec.append(g)
        if svec[0] != grp.identity:
            raise NotOrderZero("phi(e_11) carries a nontrivial group element")
        profile[x] = (tuple(svec), f0.values[x])

    # Towers: group points by profile, ordered by least member point.
    groups: dict[tuple, set] = {}
    for x, key in profile.items():
        groups.setdefault(key, set()).add(x)
    ordered = sorted(groups.items(), key=lambda kv: min(kv[1]))

    towers = []
    weights = []
    phases = []
    for (svec, _value), pts in ordered:
        base = frozenset(pts)
        towers.append((base, svec))
        weights.append(f0.restrict(pts))
        row = []
        for i in range(n):
            vals = {}
            for x in pts:
                vals[x] = f0.values[x] / h[i][svec[i]].values[x]
            row.append(Func.from_dict(sys, vals))
        phases.append(tuple(row))

    castle = Castle(sys, tuple(towers))
    if not validate_castle(castle):
        raise NotOrderZero("extracted levels are not pairwise disjoint")
    data = CastleOzmData(
        castle=castle, weights=tuple(weights), phases=tuple(phases), n=n
    )
    rebuilt = build_castle_ozm(data)
    assert rebuilt == phi, "rebuilt map differs from the input"
    return data


# -- tracial Z-stability instances ----------------------------------------


@dataclass(frozen=True)
class TzsInstance:
    """One instance of the stability test: size, tolerance, finite set,
    and a nonzero positive function."""

    n: int
    epsilon: Fraction
    F: tuple[CrossedElement, ...]
    h: Func

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("size must be positive")
        if Fraction(self.epsilon) <= 0:
            raise ValueError("tolerance must be positive")
        if self.h.is_zero:
            raise ValueError("h must be nonzero")


@dataclass(frozen=True)
class TzsReport:
    normalizer_condition: bool
    remainder_condition: bool
    remainder_witness: Optional[Witness]
    commutator_condition: bool
    commutator_margins: tuple  # ((a_index, i, j, norm), ...)
    commutator_bound_factor: int
    max_commutator: float
    epsilon: Fraction
    notes: tuple[str, ...]

    @property
    def all_pass(self) -> bool:
        return (
            self.normalizer_condition
            and self.remainder_condition
            and self.commutator_condition
        )

    def to_json(self) -> str:
        import json

        payload = {
            "normalizer_condition": self.normalizer_condition,
            "remainder_condition": self.remainder_condition,
            "remainder_witness": _witness_payload(self.remainder_witness),
            "commutator_condition": self.commutator_condition,
            "commutator_margins": [
                [a, i, j, repr(v)] for a, i, j, v in self.commutator_margins
            ],
            "commutator_bound_factor": self.commutator_bound_factor,
            "max_commutator": repr(self.max_commutator),
            "epsilon": str(self.epsilon),
            "notes": list(self.notes),
        }
        return json.dumps(payload, sort_keys=True)


def _witness_payload(w: Optional[Witness]):
    if w is None:
        return None
    return [
        [[sorted(U), s, k] for U, s, k in row]
        for row in w.rows
    ]


def check_tzs_instance(inst: TzsInstance, phi: OrderZeroMap) -> TzsReport:
    """Evaluate the three instance conditions for a candidate map.

    (i) matrix units land in the normalizers; (ii) the unit remainder
    1 - phi(1) is subequivalent to h, decided by witness search ((i) is
    required first so the remainder lies in C(X)); (iii) commutator norms
    against every member of F over all matrix units, with the stated n^2
    linearity factor deciding pass/fail for arbitrary contractions.
    """
    sys = phi.system
    cond_i = verify_normalizer_preserving(phi)

    cond_ii = False
    witness = None
    if cond_i:
        rem = CrossedElement.unit(sys) - phi.unit_image()
        if rem.in_diagonal:
            rem_f = rem.as_func()
            if rem_f.is_positive:
                from .algebra import DiagTuple
                from .comparison import diag_subequivalent

                cond_ii, witness = diag_subequivalent(
                    DiagTuple(sys, (rem_f,)), DiagTuple(sys, (inst.h,))
                )

    margins = []
    worst = 0.0
    for ai, a in enumerate(inst.F):
        for i in range(phi.n):
            for j in range(phi.n):
                img = phi.images[(i, j)]
                comm = a * img - img * a
                value = operator_norm(comm).value
                margins.append((ai, i, j, value))
                if value > worst:
                    worst = value
    factor = phi.n * phi.n
    cond_iii = factor * worst < float(inst.epsilon)
    notes = (
        "commutator check runs over matrix units; linearity bounds a general "
        "contraction by the stated n^2 factor",
    )
    return TzsReport(
        normalizer_condition=cond_i,
        remainder_condition=cond_ii,
        remainder_witness=witness,
        commutator_condition=cond_iii,
        commutator_margins=tuple(margins),
        commutator_bound_factor=factor,
        max_commutator=worst,
        epsilon=Fraction(inst.epsilon),
        notes=notes,
    )


def search_tzs_map(inst: TzsInstance, budget: int = 256) -> Optional[OrderZeroMap]:
    """Bounded search for a map passing the instance test.

    Candidates are castle maps with singleton tower bases (the orbit
    representatives), indicator weights, and trivial phases: for every
    shape S (an n-subset of the group, ascending) and every nonempty set
    of orbits (ascending), one tower ({rep_o}, S) per chosen orbit.  The
    first passing candidate in this order is returned; None means the
    family is exhausted without success.  Raises ResourceBound if the
    budget is hit first.
    """
    sys = inst.F[0].system if inst.F else inst.h.system
    if not sys.is_free:
        raise NotFree("the search assumes a free action")
    n = inst.n
    if n > sys.group.order:
        return None
    reps = [orbit[0] for orbit in sys.orbit_partition]
    tried = 0
    for shape in itertools.combinations(range(sys.group.order), n):
        for bits in range(1, 1 << len(reps)):
            chosen = [reps[o] for o in range(len(reps)) if bits >> o & 1]
            tried += 1
            if tried > budget:
                raise ResourceBound("candidate budget %d exhausted" % budget)
            towers = tuple((frozenset({x}), shape) for x in chosen)
            castle = Castle(sys, towers)
            if not validate_castle(castle):
                continue
            weights = tuple(Func.indicator(sys, {x}) for x in chosen)
            data = CastleOzmData.with_trivial_phases(castle, weights, n)
            phi = build_castle_ozm(data)
            report = check_tzs_instance(inst, phi)
            if report.all_pass:
                return phi
    return None

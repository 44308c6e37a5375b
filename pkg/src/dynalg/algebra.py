"""Crossed-product element algebra over a finite dynamical system.

An element is a finitely supported sum ``a = sum_g a_g u_g`` with
coefficients ``a_g`` in C(X) and unitaries ``u_g`` implementing the
action.  The covariance convention is

    u_g f u_g^* = f . alpha_{g^{-1}},   i.e.  (u_g f u_g^*)(x) = f(g^{-1} x),

where ``(f . alpha_h)(x) = f(h x)``.  This fixes the product and adjoint:

    (a b)_k  = sum_g a_g * (b_{g^{-1} k} . alpha_{g^{-1}})
    (a^*)_g  = conj(a_{g^{-1}}) . alpha_{g^{-1}}

All algebraic identities (products, adjoints, expectations) are computed
exactly over :class:`RadScalar` coefficients.  Norms, positivity, and
eigenvalue questions go through a faithful finite-dimensional
representation in floating point with absolute tolerance ``1e-9``:

    pi(f u_g) delta_{(h, x)} = f((g h).x) delta_{(g h, x)}

on the basis indexed by pairs (h in G, x in X).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .dynsys import DynSystem
from .errors import NotFree, NotPositive, SystemMismatch
from .scalars import FloatScalar, RadScalar, as_scalar

__all__ = [
    "Func",
    "CrossedElement",
    "MatrixElement",
    "DiagTuple",
    "OrbitBlock",
    "NormResult",
    "open_support",
    "pos_cutdown",
    "cond_expectation",
    "regular_rep",
    "orbit_block_decomposition",
    "operator_norm",
    "to_product_element",
]

NORM_TOL = 1e-9

Scalar = Union[RadScalar, FloatScalar]


class Func:
    """An element of C(X): one scalar value per point of the space."""

    def __init__(self, system: DynSystem, values: Sequence[Scalar]):
        if len(values) != system.n_points:
            raise ValueError("expected %d values, got %d" % (system.n_points, len(values)))
        self.system = system
        self.values = tuple(values)

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, system: DynSystem) -> "Func":
        z = RadScalar.zero()
        return cls(system, (z,) * system.n_points)

    @classmethod
    def one(cls, system: DynSystem) -> "Func":
        o = RadScalar.one()
        return cls(system, (o,) * system.n_points)

    @classmethod
    def indicator(cls, system: DynSystem, points: Iterable[int]) -> "Func":
        pts = set(points)
        o, z = RadScalar.one(), RadScalar.zero()
        return cls(system, tuple(o if x in pts else z for x in range(system.n_points)))

    @classmethod
    def from_dict(cls, system: DynSystem, entries: dict) -> "Func":
        z = RadScalar.zero()
        vals = [z] * system.n_points
        for x, v in entries.items():
            vals[x] = as_scalar(v)
        return cls(system, vals)

    # -- structure -----------------------------------------------------

    @cached_property
    def support(self) -> frozenset:
        return frozenset(x for x, v in enumerate(self.values) if not v.is_zero)

    @property
    def is_zero(self) -> bool:
        return not self.support

    @cached_property
    def is_positive(self) -> bool:
        """True when every value is real and >= 0."""
        return all(v.is_nonneg_real for v in self.values)

    def __call__(self, x: int) -> Scalar:
        return self.values[x]

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Func"):
        if self.system is not other.system:
            raise SystemMismatch("functions over different systems")

    def __add__(self, other: "Func") -> "Func":
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        return Func(self.system, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Func") -> "Func":
        self._check(other)
        return Func(self.system, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "Func":
        return Func(self.system, tuple(-v for v in self.values))

    def __mul__(self, other):
        if isinstance(other, Func):
            self._check(other)
            common = self.support & other.support
            if not common:
                return Func.zero(self.system)
            z = RadScalar.zero()
            vals = [z] * self.system.n_points
            for x in common:
                vals[x] = self.values[x] * other.values[x]
            return Func(self.system, vals)
        return self.scaled(other)

    def scaled(self, scalar) -> "Func":
        s = as_scalar(scalar)
        if s.is_zero:
            return Func.zero(self.system)
        z = RadScalar.zero()
        vals = [z] * self.system.n_points
        for x in self.support:
            vals[x] = self.values[x] * s
        return Func(self.system, vals)

    def conj(self) -> "Func":
        return Func(self.system, tuple(v.conjugate() for v in self.values))

    def compose_action(self, g: int) -> "Func":
        """The function x -> f(g.x)."""
        act = self.system.act[g]
        return Func(self.system, tuple(self.values[act[x]] for x in range(self.system.n_points)))

    def restrict(self, points: Iterable[int]) -> "Func":
        pts = set(points)
        z = RadScalar.zero()
        vals = [self.values[x] if x in pts else z for x in range(self.system.n_points)]
        return Func(self.system, vals)

    def cutdown(self, eps) -> "Func":
        """Pointwise max(f(x) - eps, 0); requires f positive, eps >= 0 rational."""
        eps = Fraction(eps)
        if eps < 0:
            raise NotPositive("cutdown parameter must be nonnegative")
        if not self.is_positive:
            raise NotPositive("cutdown of a non-positive function")
        if eps == 0:
            return self
        z = RadScalar.zero()
        vals = [z] * self.system.n_points
        for x in self.support:
            v = self.values[x]
            if v.real_cmp(RadScalar(eps)) > 0:
                vals[x] = v - RadScalar(eps)
        return Func(self.system, vals)

    def sqrt(self) -> "Func":
        if not self.is_positive:
            raise NotPositive("square root of a non-positive function")
        z = RadScalar.zero()
        vals = [z] * self.system.n_points
        for x in self.support:
            vals[x] = self.values[x].sqrt()
        return Func(self.system, vals)

    def sup_le_one(self) -> bool:
        """Exact check that every value has modulus at most one."""
        return all(
            v.abs_sq() <= 1 if isinstance(v, RadScalar) else abs(complex(v)) <= 1 + NORM_TOL
            for v in self.values
        )

    def max_value(self) -> Scalar:
        """Maximum of a positive function (zero for the zero function)."""
        if not self.is_positive:
            raise NotPositive("max of a non-positive function")
        best = RadScalar.zero()
        for x in self.support:
            if self.values[x].real_cmp(best) > 0:
                best = self.values[x]
        return best

    def __eq__(self, other):
        if not isinstance(other, Func):
            return NotImplemented
        return self.system is other.system and all(
            a == b for a, b in zip(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        parts = ", ".join(
            "%s: %s" % (self.system.points[x], self.values[x]) for x in sorted(self.support)
        )
        return "Func{%s}" % parts


def open_support(f: Func) -> frozenset:
    """The set of points where f is nonzero (exact comparison)."""
    return f.support


def pos_cutdown(f, eps):
    """(f - eps)_+ pointwise; extended entrywise to diagonal tuples and to
    diagonal matrices over C(X)."""
    if isinstance(f, MatrixElement):
        if not f.is_diagonal_over_cx():
            raise NotPositive("matrix cutdown needs a diagonal matrix over C(X)")
        funcs = [f.entries[i][i].cond_expectation().cutdown(eps) for i in range(f.n)]
        return MatrixElement.diag(f.system, funcs)
    return f.cutdown(eps)


class CrossedElement:
    """A crossed-product element sum_g a_g u_g with exact coefficients."""

    def __init__(self, system: DynSystem, coeffs: Sequence[Func]):
        if len(coeffs) != system.group.order:
            raise ValueError("expected %d coefficients" % system.group.order)
        for c in coeffs:
            if c.system is not system:
                raise SystemMismatch("coefficient over a different system")
        self.system = system
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, system: DynSystem) -> "CrossedElement":
        z = Func.zero(system)
        return cls(system, (z,) * system.group.order)

    @classmethod
    def unit(cls, system: DynSystem) -> "CrossedElement":
        return cls.monomial(Func.one(system), system.group.identity)

    @classmethod
    def unitary(cls, system: DynSystem, g: int) -> "CrossedElement":
        return cls.monomial(Func.one(system), g)

    @classmethod
    def from_func(cls, f: Func) -> "CrossedElement":
        return cls.monomial(f, f.system.group.identity)

    @classmethod
    def monomial(cls, f: Func, g: int) -> "CrossedElement":
        coeffs = [Func.zero(f.system)] * f.system.group.order
        coeffs[g] = f
        return cls(f.system, coeffs)

    @cached_property
    def nonzero_groups(self) -> tuple[int, ...]:
        return tuple(g for g, c in enumerate(self.coeffs) if not c.is_zero)

    @property
    def is_zero(self) -> bool:
        return not self.nonzero_groups

    def _check(self, other: "CrossedElement"):
        if self.system is not other.system:
            raise SystemMismatch("elements over different systems")

    def __add__(self, other: "CrossedElement") -> "CrossedElement":
        self._check(other)
        return CrossedElement(
            self.system, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "CrossedElement") -> "CrossedElement":
        self._check(other)
        return CrossedElement(
            self.system, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "CrossedElement":
        return CrossedElement(self.system, tuple(-c for c in self.coeffs))

    def scaled(self, scalar) -> "CrossedElement":
        return CrossedElement(self.system, tuple(c.scaled(scalar) for c in self.coeffs))

    def __mul__(self, other: "CrossedElement") -> "CrossedElement":
        self._check(other)
        grp = self.system.group
        acc: list[Optional[Func]] = [None] * grp.order
        for g in self.nonzero_groups:
            ag = self.coeffs[g]
            ginv = grp.inv(g)
            for h in other.nonzero_groups:
                term = ag * other.coeffs[h].compose_action(ginv)
                if term.is_zero:
                    continue
                k = grp.mul(g, h)
                acc[k] = term if acc[k] is None else acc[k] + term
        z = Func.zero(self.system)
        return CrossedElement(self.system, tuple(c if c is not None else z for c in acc))

    def adjoint(self) -> "CrossedElement":
        grp = self.system.group
        coeffs = [Func.zero(self.system)] * grp.order
        for h in self.nonzero_groups:
            g = grp.inv(h)
            coeffs[g] = self.coeffs[h].conj().compose_action(h)
        return CrossedElement(self.system, coeffs)

    def cond_expectation(self) -> Func:
        """Read off the identity-group coefficient (the projection onto C(X))."""
        return self.coeffs[self.system.group.identity]

    @property
    def in_diagonal(self) -> bool:
        """True when the element lies in C(X): all other coefficients vanish."""
        e = self.system.group.identity
        return all(g == e for g in self.nonzero_groups)

    def as_func(self) -> Func:
        if not self.in_diagonal:
            raise ValueError("element is not in C(X)")
        return self.coeffs[self.system.group.identity]

    def __eq__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return self.system is other.system and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def rep_matrix(self) -> np.ndarray:
        return regular_rep(self)

    def __repr__(self):
        if self.is_zero:
            return "CrossedElement(0)"
        parts = " + ".join(
            "(%r)u[%s]" % (self.coeffs[g], self.system.group.elements[g])
            for g in self.nonzero_groups
        )
        return "CrossedElement(%s)" % parts


def cond_expectation(a: CrossedElement) -> Func:
    """E(a) = a_e, the faithful conditional expectation onto C(X)."""
    return a.cond_expectation()


class MatrixElement:
    """An n x n matrix of crossed-product elements over one system."""

    def __init__(self, system: DynSystem, entries: Sequence[Sequence[CrossedElement]]):
        self.system = system
        self.n = len(entries)
        rows = []
        for row in entries:
            if len(row) != self.n:
                raise ValueError("matrix must be square")
            for a in row:
                if a.system is not system:
                    raise SystemMismatch("entry over a different system")
            rows.append(tuple(row))
        self.entries = tuple(rows)

    @classmethod
    def zero(cls, system: DynSystem, n: int) -> "MatrixElement":
        z = CrossedElement.zero(system)
        return cls(system, tuple((z,) * n for _ in range(n)))

    @classmethod
    def diag(cls, system: DynSystem, funcs: Sequence[Func], n: Optional[int] = None) -> "MatrixElement":
        n = n if n is not None else len(funcs)
        if len(funcs) > n:
            raise ValueError("too many diagonal entries")
        z = CrossedElement.zero(system)
        rows = []
        for i in range(n):
            row = [z] * n
            if i < len(funcs):
                row[i] = CrossedElement.from_func(funcs[i])
            rows.append(tuple(row))
        return cls(system, rows)

    def entry(self, i: int, j: int) -> CrossedElement:
        return self.entries[i][j]

    def __add__(self, other: "MatrixElement") -> "MatrixElement":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return MatrixElement(
            self.system,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "MatrixElement") -> "MatrixElement":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return MatrixElement(
            self.system,
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __mul__(self, other: "MatrixElement") -> "MatrixElement":
        if self.system is not other.system:
            raise SystemMismatch("matrices over different systems")
        if self.n != other.n:
            raise ValueError("size mismatch")
        n = self.n
        z = CrossedElement.zero(self.system)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.is_zero or b.is_zero:
                        continue
                    term = a * b
                    acc = term if acc is None else acc + term
                row.append(acc if acc is not None else z)
            rows.append(tuple(row))
        return MatrixElement(self.system, rows)

    def adjoint(self) -> "MatrixElement":
        n = self.n
        return MatrixElement(
            self.system,
            tuple(tuple(self.entries[j][i].adjoint() for j in range(n)) for i in range(n)),
        )

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for row in self.entries for a in row)

    def is_diagonal_over_cx(self) -> bool:
        """Membership in the diagonal subalgebra D_n (x) C(X)."""
        for i in range(self.n):
            for j in range(self.n):
                a = self.entries[i][j]
                if i == j:
                    if not a.in_diagonal:
                        return False
                elif not a.is_zero:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, MatrixElement):
            return NotImplemented
        return (
            self.system is other.system
            and self.n == other.n
            and all(
                a == b
                for ra, rb in zip(self.entries, other.entries)
                for a, b in zip(ra, rb)
            )
        )

    __hash__ = None

    def rep_matrix(self) -> np.ndarray:
        dim = self.system.group.order * self.system.n_points
        out = np.zeros((self.n * dim, self.n * dim), dtype=complex)
        for i in range(self.n):
            for j in range(self.n):
                if not self.entries[i][j].is_zero:
                    out[i * dim : (i + 1) * dim, j * dim : (j + 1) * dim] = regular_rep(
                        self.entries[i][j]
                    )
        return out

    def __repr__(self):
        return "MatrixElement(n=%d over %r)" % (self.n, self.system)


class DiagTuple:
    """A tuple of positive functions, read as diag(a_1, ..., a_n)."""

    def __init__(self, system: DynSystem, entries: Sequence[Func]):
        for f in entries:
            if f.system is not system:
                raise SystemMismatch("entry over a different system")
            if not f.is_positive:
                raise NotPositive("diagonal tuples require positive entries")
        self.system = system
        self.entries = tuple(entries)

    @classmethod
    def indicators(cls, system: DynSystem, subsets: Sequence[Iterable[int]]) -> "DiagTuple":
        return cls(system, tuple(Func.indicator(system, s) for s in subsets))

    def __len__(self):
        return len(self.entries)

    def supports(self) -> tuple[frozenset, ...]:
        return tuple(f.support for f in self.entries)

    def cutdown(self, eps) -> "DiagTuple":
        return DiagTuple(self.system, tuple(f.cutdown(eps) for f in self.entries))

    def padded(self, n: int) -> "DiagTuple":
        if len(self.entries) > n:
            raise ValueError("cannot pad to a smaller size")
        z = Func.zero(self.system)
        return DiagTuple(self.system, self.entries + (z,) * (n - len(self.entries)))

    def direct_sum(self, other: "DiagTuple") -> "DiagTuple":
        if self.system is not other.system:
            raise SystemMismatch("tuples over different systems")
        return DiagTuple(self.system, self.entries + other.entries)

    def to_matrix(self, n: Optional[int] = None) -> MatrixElement:
        return MatrixElement.diag(self.system, self.entries, n)

    @property
    def is_zero(self) -> bool:
        return all(f.is_zero for f in self.entries)

    def __eq__(self, other):
        if not isinstance(other, DiagTuple):
            return NotImplemented
        return (
            self.system is other.system
            and len(self.entries) == len(other.entries)
            and all(a == b for a, b in zip(self.entries, other.entries))
        )

    __hash__ = None

    def __repr__(self):
        return "DiagTuple(%s)" % (", ".join(repr(f) for f in self.entries))


# -- faithful representation, norms, blocks -----------------------------


def regular_rep(a: CrossedElement) -> np.ndarray:
    """Faithful representation on the basis delta_{(h, x)}, as a float matrix.

    pi(f u_g) delta_{(h, x)} = f((g h).x) delta_{(g h, x)}; the map is
    multiplicative and *-preserving, and injective for valid systems.
    """
    sys = a.system
    ng, nx = sys.group.order, sys.n_points
    dim = ng * nx
    out = np.zeros((dim, dim), dtype=complex)
    for g in a.nonzero_groups:
        f = a.coeffs[g]
        for h in range(ng):
            gh = sys.group.mul(g, h)
            row_base = gh * nx
            col_base = h * nx
            for x in range(nx):
                v = f.values[sys.act[gh][x]]
                if not v.is_zero:
                    out[row_base + x, col_base + x] += complex(v)
    return out


@dataclass(frozen=True)
class NormResult:
    """Operator norm value with its documented absolute tolerance."""

    value: float
    abs_tol: float = NORM_TOL
    exact_zero: bool = False

    def __float__(self):
        return self.value


def operator_norm(a, mode: str = "exact-first") -> NormResult:
    """Largest singular value of the representation, with tolerance report.

    ``mode="exact-first"`` short-circuits exact zero elements to 0.0;
    ``mode="float"`` always goes through the float representation.
    """
    if mode not in ("exact-first", "float"):
        raise ValueError("unknown norm mode %r" % mode)
    if mode == "exact-first" and a.is_zero:
        return NormResult(0.0, NORM_TOL, exact_zero=True)
    mat = a.rep_matrix()
    if mat.size == 0:
        return NormResult(0.0, NORM_TOL, exact_zero=True)
    value = float(np.linalg.norm(mat, 2))
    return NormResult(value, NORM_TOL)


@dataclass(frozen=True)
class OrbitBlock:
    """Restriction of the representation to one free orbit.

    For a free action the crossed product restricted to an orbit O is the
    full matrix algebra on O, acting by (f u_g) delta_x = f(g.x) delta_{g.x};
    the entry at (row y, col x) is a_{g}(y) for the unique g with g.x = y.
    """

    orbit: tuple[int, ...]
    entries: tuple[tuple[Scalar, ...], ...]

    def to_complex(self) -> np.ndarray:
        return np.array([[complex(v) for v in row] for row in self.entries], dtype=complex)

    @property
    def all_rational(self) -> bool:
        return all(
            isinstance(v, RadScalar) and v.rad == 1 for row in self.entries for v in row
        )

    def rank(self, tol: float = NORM_TOL) -> int:
        if self.all_rational:
            return _exact_rank(self.entries)
        sv = np.linalg.svd(self.to_complex(), compute_uv=False)
        return int(np.sum(sv > tol))


def _exact_rank(entries) -> int:
    """Rank over the Gaussian rationals by fraction-exact elimination."""
    rows = [[(v.re, v.im) for v in row] for row in entries]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    col = 0
    while rank < nrows and col < ncols:
        piv = next(
            (r for r in range(rank, nrows) if rows[r][col] != (Fraction(0), Fraction(0))),
            None,
        )
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pre, pim = rows[rank][col]
        norm = pre * pre + pim * pim
        inv = (pre / norm, -pim / norm)
        for r in range(rank + 1, nrows):
            cre, cim = rows[r][col]
            if cre == 0 and cim == 0:
                continue
            fre = cre * inv[0] - cim * inv[1]
            fim = cre * inv[1] + cim * inv[0]
            for c in range(col, ncols):
                are, aim = rows[rank][c]
                bre, bim = rows[r][c]
                rows[r][c] = (
                    bre - (fre * are - fim * aim),
                    bim - (fre * aim + fim * are),
                )
        rank += 1
        col += 1
    return rank


def _orbit_transporters(sys: DynSystem, orbit) -> dict:
    table = {}
    for x in orbit:
        for g in range(sys.group.order):
            y = sys.act[g][x]
            if (x, y) not in table:
                table[(x, y)] = g
    return table


def orbit_block_decomposition(a: CrossedElement) -> list[OrbitBlock]:
    """One matrix block per orbit; requires a free action.

    The direct sum of the blocks is unitarily equivalent to the faithful
    representation up to multiplicity, and two elements are equal iff all
    their blocks are equal.
    """
    sys = a.system
    if not sys.is_free:
        raise NotFree("orbit blocks need a free action")
    blocks = []
    for orbit in sys.orbit_partition:
        trans = _orbit_transporters(sys, orbit)
        z = RadScalar.zero()
        rows = []
        for y in orbit:
            row = []
            for x in orbit:
                g = trans[(x, y)]
                row.append(a.coeffs[g].values[y] if g in a.nonzero_groups else z)
            rows.append(tuple(row))
        blocks.append(OrbitBlock(orbit, tuple(rows)))
    return blocks


def matrix_orbit_blocks(m: MatrixElement) -> list[OrbitBlock]:
    """Orbit blocks of a matrix element: n x n of entry blocks, stacked."""
    sys = m.system
    if not sys.is_free:
        raise NotFree("orbit blocks need a free action")
    entry_blocks = [
        [orbit_block_decomposition(m.entries[i][j]) for j in range(m.n)]
        for i in range(m.n)
    ]
    out = []
    for o, orbit in enumerate(sys.orbit_partition):
        size = len(orbit)
        rows = []
        for i in range(m.n):
            for r in range(size):
                row = []
                for j in range(m.n):
                    row.extend(entry_blocks[i][j][o].entries[r])
                rows.append(tuple(row))
        out.append(OrbitBlock(orbit, tuple(rows)))
    return out


def to_product_element(
    x: MatrixElement, product: Optional[DynSystem] = None
) -> tuple[DynSystem, CrossedElement]:
    """Identify M_n (x) (C(X) x G) with the crossed product of the product action.

    The matrix x with entries x_ij = sum_g x_{i,j,g} u_g maps to

        y = sum_g sum_{i,j} (chi_{i} (x) x_{i,j,g}) u_{(i-j, g)}

    over (Z/n x G) acting on {0..n-1} x X.  The identification is a
    *-isomorphism carrying the diagonal subalgebra onto C of the product
    space.
    """
    from .dynsys import product_with_cyclic

    n = x.n
    sys = x.system
    if product is None:
        product = product_with_cyclic(sys, n)
    ng, nx = sys.group.order, sys.n_points
    z = RadScalar.zero()
    coeff_values: dict[int, list] = {}
    for i in range(n):
        for j in range(n):
            entry = x.entries[i][j]
            d = (i - j) % n
            for g in entry.nonzero_groups:
                pg = d * ng + g
                vals = coeff_values.setdefault(pg, [z] * (n * nx))
                f = entry.coeffs[g]
                for p in f.support:
                    vals[i * nx + p] = f.values[p]
    coeffs = [Func.zero(product)] * product.group.order
    for pg, vals in coeff_values.items():
        coeffs[pg] = Func(product, vals)
    return product, CrossedElement(product, coeffs)

"""Exact rational cones, integer lattices and p-local scalars.

Everything here works over Python integers and ``fractions.Fraction``; no
floating point is used.  Feasibility questions are answered by
Fourier-Motzkin elimination, which is adequate for the small ambient
dimensions (at most 6) this package targets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, DimensionMismatch, NotPointed

MAX_DIM = 6

Vector = tuple  # tuple of int


def vec(v) -> Vector:
    return tuple(int(x) for x in v)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(k, a):
    return tuple(k * x for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def canonical(vectors: Iterable[Sequence[int]]) -> tuple:
    """Deduplicated, lexicographically sorted tuple of integer vectors."""
    return tuple(sorted(set(vec(v) for v in vectors)))


# ---------------------------------------------------------------------------
# p-local scalars


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PLocalScalar:
    """An element of Z localized at p, stored as a reduced fraction."""

    p: int
    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if self.denominator == 0:
            raise ZeroDivisionError("zero denominator")
        num, den = self.numerator, self.denominator
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        num, den = num // g, den // g
        if den % self.p == 0:
            raise ValueError(f"{self.p} divides the denominator {den}")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def of(cls, p: int, x) -> "PLocalScalar":
        x = Fraction(x)
        return cls(p, x.numerator, x.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def is_zero(self):
        return self.numerator == 0

    def valuation(self) -> int:
        return valuation(self.numerator, self.p)

    def unit_part(self) -> "PLocalScalar":
        v = self.valuation()
        return PLocalScalar(self.p, self.numerator // self.p**v, self.denominator)

    def is_unit(self):
        return self.numerator != 0 and self.numerator % self.p != 0

    def _coerce(self, other):
        if isinstance(other, PLocalScalar):
            if other.p != self.p:
                raise ValueError("mixing scalars for different primes")
            return other.as_fraction()
        return Fraction(other)

    def __add__(self, other):
        return PLocalScalar.of(self.p, self.as_fraction() + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PLocalScalar.of(self.p, self.as_fraction() - self._coerce(other))

    def __rsub__(self, other):
        return PLocalScalar.of(self.p, self._coerce(other) - self.as_fraction())

    def __mul__(self, other):
        return PLocalScalar.of(self.p, self.as_fraction() * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return PLocalScalar(self.p, -self.numerator, self.denominator)

    def __eq__(self, other):
        if isinstance(other, PLocalScalar):
            return self.p == other.p and self.as_fraction() == other.as_fraction()
        try:
            return self.as_fraction() == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.p, self.numerator, self.denominator))

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination
#
# A row is a tuple (a_1, ..., a_n, b) of ints.  Equality rows mean a.x = b,
# inequality rows mean a.x <= b.


def _normalize_row(row, sign_free=False):
    g = 0
    for x in row:
        g = math.gcd(g, x)
    if g > 1:
        row = tuple(x // g for x in row)
    if sign_free:
        for x in row[:-1]:
            if x:
                if x < 0:
                    row = tuple(-y for y in row)
                break
    return row


@dataclass
class LinearSystem:
    nvars: int
    eqs: list = field(default_factory=list)
    ineqs: list = field(default_factory=list)

    def copy(self):
        return LinearSystem(self.nvars, list(self.eqs), list(self.ineqs))


def _eliminate(system: LinearSystem, var: int):
    """Remove ``var`` from the system; returns (new system, back-sub record)."""
    eqs, ineqs = system.eqs, system.ineqs
    pivot = None
    for row in eqs:
        if row[var] != 0:
            pivot = row
            break
    if pivot is not None:
        a = pivot[var]
        new_eqs = []
        for row in eqs:
            if row is pivot:
                continue
            c = row[var]
            if c:
                row = tuple(a * x - c * y for x, y in zip(row, pivot))
                if a < 0:
                    row = tuple(-x for x in row)
            new_eqs.append(_normalize_row(row, sign_free=True))
        new_ineqs = []
        for row in ineqs:
            c = row[var]
            if c:
                # keep the inequality direction: multiply by |a|
                s = 1 if a > 0 else -1
                row = tuple(abs(a) * x - s * c * y for x, y in zip(row, pivot))
            new_ineqs.append(_normalize_row(row))
        out = LinearSystem(system.nvars, _dedupe(new_eqs), _dedupe(new_ineqs))
        return out, ("eq", var, pivot)
    pos, neg, rest = [], [], []
    for row in ineqs:
        c = row[var]
        if c > 0:
            pos.append(row)
        elif c < 0:
            neg.append(row)
        else:
            rest.append(row)
    for rp in pos:
        for rn in neg:
            a, b = rp[var], -rn[var]
            row = tuple(b * x + a * y for x, y in zip(rp, rn))
            rest.append(_normalize_row(row))
    out = LinearSystem(system.nvars, list(eqs), _dedupe(rest))
    return out, ("fm", var, pos, neg)


def _dedupe(rows):
    seen = set()
    out = []
    for row in rows:
        if row not in seen:
            seen.add(row)
            out.append(row)
    return out


def _trivially_feasible(system: LinearSystem, vars_left: Iterable[int] = ()):
    left = set(vars_left)
    for row in system.eqs:
        if not any(row[i] for i in left) and row[-1] != 0:
            return False
    for row in system.ineqs:
        if not any(row[i] for i in left) and row[-1] < 0:
            return False
    return True


def _strip_trivial(system: LinearSystem, vars_left):
    left = list(vars_left)
    eqs = [r for r in system.eqs if any(r[i] for i in left)]
    ineqs = [r for r in system.ineqs if any(r[i] for i in left)]
    return LinearSystem(system.nvars, eqs, ineqs)


def project(system: LinearSystem, eliminate: Sequence[int]):
    """Project onto the variables not in ``eliminate``.

    Returns ``None`` when the system is infeasible, else the projected system
    (rows still indexed over all variables, eliminated columns zero).
    """
    remaining = [i for i in range(system.nvars) if i not in set(eliminate)]
    cur = system
    order = list(eliminate)
    done = []
    for var in order:
        cur, _ = _eliminate(cur, var)
        done.append(var)
        live = [i for i in range(system.nvars) if i not in done]
        if not _trivially_feasible(cur, live):
            return None
        cur = _strip_trivial(cur, live)
    return cur if remaining else cur


def solve(system: LinearSystem) -> Optional[list]:
    """A rational solution of the system, or ``None`` if infeasible.

    Each coordinate is chosen as the admissible value of least absolute
    value (an integer whenever the admissible interval contains one).
    """
    records = []
    cur = system
    live = list(range(system.nvars))
    for var in reversed(range(system.nvars)):
        before = cur
        cur, rec = _eliminate(cur, var)
        live.remove(var)
        records.append((var, before, rec))
        if not _trivially_feasible(cur, live):
            return None
        cur = _strip_trivial(cur, live)
    if not _trivially_feasible(cur, []):
        return None
    values = [Fraction(0)] * system.nvars
    for var, before, rec in reversed(records):
        if rec[0] == "eq":
            row = rec[2]
            rest = sum(Fraction(row[i]) * values[i] for i in range(system.nvars) if i != var)
            values[var] = (Fraction(row[-1]) - rest) / row[var]
            continue
        lo = hi = None
        for row in before.ineqs:
            c = row[var]
            if c == 0:
                continue
            rest = sum(Fraction(row[i]) * values[i] for i in range(system.nvars) if i != var)
            bound = (Fraction(row[-1]) - rest) / c
            if c > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        values[var] = _pick(lo, hi)
    return values


def _pick(lo, hi):
    if (lo is None or lo <= 0) and (hi is None or hi >= 0):
        return Fraction(0)
    if lo is not None and lo > 0:
        c = Fraction(math.ceil(lo))
        return c if hi is None or c <= hi else lo
    c = Fraction(math.floor(hi))
    return c if lo is None or c >= lo else hi


def feasible(system: LinearSystem) -> bool:
    return project(system, list(range(system.nvars))) is not None


# ---------------------------------------------------------------------------
# lattices


def hnf(rows: Iterable[Sequence[int]], dim: int, with_transform=False):
    """Row Hermite normal form of the integer span of ``rows``.

    Returns the nonzero HNF rows (upper echelon, positive pivots, entries
    above each pivot reduced into ``[0, pivot)``).  With ``with_transform``
    also returns, for each output row, integer coefficients expressing it in
    the input rows.
    """
    rows = [list(vec(r)) for r in rows]
    for r in rows:
        if len(r) != dim:
            raise DimensionMismatch(f"vector {tuple(r)} has length {len(r)}, expected {dim}")
    m = len(rows)
    trans = [[int(i == j) for j in range(m)] for i in range(m)]
    out, out_t, pivots = [], [], []
    active = list(range(m))
    for col in range(dim):
        nz = [i for i in active if rows[i][col] != 0]
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(rows[i][col]))
            piv = nz[0]
            for i in nz[1:]:
                q = rows[i][col] // rows[piv][col]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[piv])]
                trans[i] = [a - q * b for a, b in zip(trans[i], trans[piv])]
            nz = [i for i in nz if rows[i][col] != 0]
        piv = nz[0]
        if rows[piv][col] < 0:
            rows[piv] = [-a for a in rows[piv]]
            trans[piv] = [-a for a in trans[piv]]
        active.remove(piv)
        out.append(rows[piv])
        out_t.append(trans[piv])
        pivots.append(col)
    # reduce above pivots
    for k, col in enumerate(pivots):
        d = out[k][col]
        for i in range(k):
            q = out[i][col] // d
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[k])]
                out_t[i] = [a - q * b for a, b in zip(out_t[i], out_t[k])]
    basis = [tuple(r) for r in out]
    if with_transform:
        return basis, [tuple(t) for t in out_t], pivots
    return basis


@dataclass(frozen=True)
class IntegerLattice:
    dim: int
    basis: tuple  # HNF rows

    @classmethod
    def spanned_by(cls, vectors, dim=None) -> "IntegerLattice":
        vectors = [vec(v) for v in vectors]
        if dim is None:
            if not vectors:
                raise ValueError("dimension required for an empty generator list")
            dim = len(vectors[0])
        return cls(dim, tuple(hnf(vectors, dim)))

    @classmethod
    def standard(cls, dim):
        return cls(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @property
    def rank(self):
        return len(self.basis)

    @cached_property
    def _pivots(self):
        return [next(j for j, x in enumerate(r) if x) for r in self.basis]

    def coordinates(self, v) -> Optional[tuple]:
        """Integer coefficients of ``v`` in the HNF basis, or None."""
        v = list(vec(v))
        if len(v) != self.dim:
            raise DimensionMismatch("dimension mismatch")
        coeffs = []
        for row, col in zip(self.basis, self._pivots):
            if any(v[:col]):
                return None
            q, r = divmod(v[col], row[col])
            if r:
                return None
            coeffs.append(q)
            v = [a - q * b for a, b in zip(v, row)]
        return tuple(coeffs) if not any(v) else None

    def __contains__(self, v):
        return self.coordinates(v) is not None

    def rational_coordinates(self, v) -> Optional[tuple]:
        """Rational coefficients of ``v`` in the basis, or None if outside the span."""
        v = [Fraction(x) for x in vec(v)]
        coeffs = []
        for row, col in zip(self.basis, self._pivots):
            if any(v[:col]):
                return None
            q = v[col] / row[col]
            coeffs.append(q)
            v = [a - q * b for a, b in zip(v, row)]
        return tuple(coeffs) if not any(v) else None

    def saturating_multiple(self, v) -> Optional[int]:
        """Least k >= 1 with k*v in the lattice (None if v is outside the span)."""
        rc = self.rational_coordinates(v)
        if rc is None:
            return None
        k = 1
        for c in rc:
            k = k * c.denominator // math.gcd(k, c.denominator)
        return k


def group_closure(vectors, dim=None) -> IntegerLattice:
    return IntegerLattice.spanned_by(vectors, dim)


def rank(vectors, dim=None) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    return len(hnf(vectors, dim or len(vec(vectors[0]))))


def express(vectors, v) -> Optional[tuple]:
    """Integer coefficients z with sum z_i * vectors[i] == v, or None."""
    vectors = [vec(g) for g in vectors]
    v = vec(v)
    dim = len(v)
    if not vectors:
        return () if not any(v) else None
    basis, trans, pivots = hnf(vectors, dim, with_transform=True)
    lat = IntegerLattice(dim, tuple(basis))
    c = lat.coordinates(v)
    if c is None:
        return None
    z = [0] * len(vectors)
    for ci, t in zip(c, trans):
        for j, tj in enumerate(t):
            z[j] += ci * tj
    return tuple(z)


def rational_solve(basis, v) -> Optional[list]:
    """Unique rational coefficients of v in linearly independent ``basis``."""
    basis = [list(map(Fraction, b)) for b in basis]
    k = len(basis)
    n = len(v)
    # solve B^T x = v by Gaussian elimination on the augmented n x (k+1) matrix
    mat = [[basis[j][i] for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    row = 0
    piv_cols = []
    for col in range(k):
        sel = next((r for r in range(row, n) if mat[r][col] != 0), None)
        if sel is None:
            continue
        mat[row], mat[sel] = mat[sel], mat[row]
        pv = mat[row][col]
        mat[row] = [x / pv for x in mat[row]]
        for r in range(n):
            if r != row and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        piv_cols.append(col)
        row += 1
    if any(mat[r][k] != 0 for r in range(row, n)):
        return None
    x = [Fraction(0)] * k
    for r, col in enumerate(piv_cols):
        x[col] = mat[r][k]
    return x


# ---------------------------------------------------------------------------
# cones


def _check_dim(m):
    if m > MAX_DIM:
        raise ValueError(f"ambient dimension {m} exceeds the supported maximum {MAX_DIM}")


@dataclass(frozen=True)
class RationalCone:
    dim: int
    generators: tuple

    @classmethod
    def of(cls, generators, dim=None) -> "RationalCone":
        gens = [vec(g) for g in generators]
        if dim is None:
            if not gens:
                raise ValueError("dimension required for the zero cone")
            dim = len(gens[0])
        for g in gens:
            if len(g) != dim:
                raise DimensionMismatch(f"generator {g} has length {len(g)}, expected {dim}")
        _check_dim(dim)
        return cls(dim, canonical(g for g in gens if any(g)))

    @cached_property
    def hrep(self) -> LinearSystem:
        """Equalities and inequalities in x describing the cone (FM projection)."""
        m, r = self.dim, len(self.generators)
        n = m + r
        sysm = LinearSystem(n)
        for i in range(m):
            row = [0] * (n + 1)
            row[i] = 1
            for j, g in enumerate(self.generators):
                row[m + j] = -g[i]
            sysm.eqs.append(tuple(row))
        for j in range(r):
            row = [0] * (n + 1)
            row[m + j] = -1
            sysm.ineqs.append(tuple(row))
        out = project(sysm, list(range(m, n)))
        assert out is not None  # x = 0 is always feasible
        return out

    def contains(self, v) -> bool:
        v = vec(v)
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector {v} has length {len(v)}, expected {self.dim}")
        h = self.hrep
        for row in h.eqs:
            if dot(row[: self.dim], v) != row[-1]:
                return False
        for row in h.ineqs:
            if dot(row[: self.dim], v) > row[-1]:
                return False
        return True

    __contains__ = contains

    @cached_property
    def pointed(self) -> bool:
        r = len(self.generators)
        if r == 0:
            return True
        sysm = LinearSystem(r)
        for i in range(self.dim):
            sysm.eqs.append(tuple(g[i] for g in self.generators) + (0,))
        sysm.eqs.append((1,) * r + (1,))
        for j in range(r):
            row = [0] * (r + 1)
            row[j] = -1
            sysm.ineqs.append(tuple(row))
        return not feasible(sysm)

    def lineality_generators(self) -> tuple:
        return tuple(g for g in self.generators if self.contains(vneg(g)))


def cone_contains(cone: RationalCone, v) -> bool:
    return cone.contains(v)


def is_pointed(cone: RationalCone) -> bool:
    return cone.pointed


def find_functional(dim, positive_on, zero_on=()) -> Optional[tuple]:
    """Integer functional f with f.g >= 1 on ``positive_on`` and f.h = 0 on ``zero_on``."""
    sysm = LinearSystem(dim)
    for h in zero_on:
        sysm.eqs.append(tuple(h) + (0,))
    for g in positive_on:
        sysm.ineqs.append(tuple(-x for x in g) + (-1,))
    sol = solve(sysm)
    if sol is None:
        return None
    den = 1
    for x in sol:
        den = den * x.denominator // math.gcd(den, x.denominator)
    out = tuple(int(x * den) for x in sol)
    g = 0
    for x in out:
        g = math.gcd(g, x)
    if g > 1:
        out = tuple(x // g for x in out)
    return out


def positive_grading(cone: RationalCone) -> tuple:
    """Integer functional positive on every generator; raises NotPointed."""
    if not cone.generators:
        return (0,) * cone.dim if cone.dim else ()
    lam = find_functional(cone.dim, cone.generators)
    if lam is None:
        raise NotPointed(f"cone generated by {list(cone.generators)} contains a line")
    assert all(dot(lam, g) > 0 for g in cone.generators)
    return lam


@dataclass(frozen=True)
class Budget:
    """Search limits shared by the enumeration routines."""

    depth: int = 12          # combination depth / multiplier bound
    extent: int = 24         # bounding-box half width per axis
    points: int = 400_000    # lattice points enumerated in one box
    nodes: int = 200_000     # search tree nodes
    states: int = 20_000     # submodule states in the quasilength search
    element_cap: int = 2**14  # largest module (element count) searched exactly
    window: int = 3          # sums of at most this many generators

    def replace(self, **kw):
        from dataclasses import replace
        return replace(self, **kw)


DEFAULT_BUDGET = Budget()


def gordon_generators(cone: RationalCone, lattice: IntegerLattice, budget: Budget = DEFAULT_BUDGET) -> tuple:
    """Generators of the semigroup ``lattice`` intersected with ``cone``.

    Lattice points are enumerated in the box whose half width along axis i
    is the sum of |g_i| over the cone generators (each generator first scaled
    to its least multiple in the lattice).  Every irreducible element lies in
    this box when the cone is pointed; reducible points are discarded by
    comparing against already accepted ones in order of a positive grading.
    """
    if lattice.dim != cone.dim:
        raise DimensionMismatch("cone and lattice dimensions differ")
    if not cone.generators:
        return ()
    lam = positive_grading(cone)
    scaled = []
    for g in cone.generators:
        k = lattice.saturating_multiple(g)
        if k is None:
            raise ValueError(f"cone generator {g} is outside the span of the lattice")
        scaled.append(vscale(k, g))
    extent = [sum(abs(g[i]) for g in scaled) for i in range(cone.dim)]
    if max(extent) > budget.extent:
        raise BudgetExceeded(f"bounding box extent {max(extent)} exceeds budget {budget.extent}")
    npoints = 1
    for e in extent:
        npoints *= 2 * e + 1
    if npoints > budget.points:
        raise BudgetExceeded(f"bounding box has {npoints} points, budget {budget.points}")
    cands = []
    for x in itertools.product(*[range(-e, e + 1) for e in extent]):
        if not any(x) or x not in lattice or not cone.contains(x):
            continue
        cands.append(x)
    cands.sort(key=lambda x: (dot(lam, x), x))
    basis = []
    for x in cands:
        lx = dot(lam, x)
        if any(dot(lam, h) < lx and cone.contains(vsub(x, h)) for h in basis):
            continue
        basis.append(x)
    return canonical(basis)

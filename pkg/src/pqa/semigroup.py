"""Affine semigroups in Z^m: membership, saturation, pointed decomposition."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .errors import BudgetExceeded, DimensionMismatch, InvalidWitness, NotPointed
from .geometry import (
    DEFAULT_BUDGET,
    Budget,
    IntegerLattice,
    RationalCone,
    canonical,
    dot,
    find_functional,
    gordon_generators,
    group_closure,
    rank,
    rational_solve,
    vadd,
    vec,
    vneg,
    vscale,
    vsub,
)


@dataclass(frozen=True)
class AffineSemigroup:
    """Finitely generated submonoid of Z^m (0 is always a member)."""

    dim: int
    generators: tuple

    @classmethod
    def of(cls, generators, dim=None) -> "AffineSemigroup":
        gens = [vec(g) for g in generators]
        if dim is None:
            if not gens:
                raise ValueError("dimension required for the trivial semigroup")
            dim = len(gens[0])
        for i, g in enumerate(gens):
            if len(g) != dim:
                raise DimensionMismatch(f"generator {i} {g} has length {len(g)}, expected {dim}")
        return cls(dim, canonical(g for g in gens if any(g)))

    @cached_property
    def cone(self) -> RationalCone:
        return RationalCone.of(self.generators, self.dim)

    @cached_property
    def group(self) -> IntegerLattice:
        return group_closure(self.generators, self.dim)

    @property
    def pointed(self):
        return self.cone.pointed

    @cached_property
    def _search_data(self):
        lin = self.cone.lineality_generators()
        rest = [g for g in self.generators if g not in set(lin)]
        lam = find_functional(self.dim, rest, lin)
        assert lam is not None
        rest.sort(key=lambda g: (-dot(lam, g), g))
        units = group_closure(lin, self.dim)
        # lattices spanned by the tail generators plus the unit group, for pruning
        tails = [group_closure(list(lin) + rest[i:], self.dim) for i in range(len(rest) + 1)]
        return lam, tuple(rest), units, tails

    def contains(self, v, budget: Budget = DEFAULT_BUDGET) -> bool:
        return sg_contains(self, v, budget)

    def __contains__(self, v):
        return sg_contains(self, v)

    def window(self, depth: int = 3) -> tuple:
        """All sums of at most ``depth`` generators (0 included), sorted."""
        pts = {(0,) * self.dim}
        frontier = set(pts)
        for _ in range(depth):
            nxt = set()
            for x in frontier:
                for g in self.generators:
                    y = vadd(x, g)
                    if y not in pts:
                        nxt.add(y)
            pts |= nxt
            frontier = nxt
        return tuple(sorted(pts))


def sg_contains(M: AffineSemigroup, v, budget: Budget = DEFAULT_BUDGET) -> bool:
    """Is ``v`` a nonnegative integer combination of the generators of M?

    Generators in the lineality space of the cone generate a group H; the
    remaining ones are bounded by a functional vanishing on H, so the search
    over their multiplicities is finite.  Leaves test membership in H.
    """
    v = vec(v)
    if len(v) != M.dim:
        raise DimensionMismatch(f"vector {v} has length {len(v)}, expected {M.dim}")
    lam, gens, units, tails = M._search_data
    if v not in tails[0] or not M.cone.contains(v):
        return False
    level = dot(lam, v)
    if level < 0:
        return False
    failed = set()
    nodes = 0

    def search(i, r, lvl):
        nonlocal nodes
        nodes += 1
        if nodes > budget.nodes:
            raise BudgetExceeded(f"semigroup membership search exceeded {budget.nodes} nodes")
        if i == len(gens):
            return r in units
        if (i, r) in failed or r not in tails[i]:
            return False
        g = gens[i]
        lg = dot(lam, g)
        for k in range(lvl // lg, -1, -1):
            if search(i + 1, vsub(r, vscale(k, g)), lvl - k * lg):
                return True
        failed.add((i, r))
        return False

    return search(0, v, level)


def sg_saturate(M: AffineSemigroup, budget: Budget = DEFAULT_BUDGET, lattice=None) -> AffineSemigroup:
    """Generators of lattice ∩ cone(M).

    ``lattice`` defaults to the group closure of M, which gives the
    normalization inside the fraction field.  Pass ``"ambient"`` for the whole
    of Z^m (integral closure inside the Laurent ring) or an IntegerLattice.
    """
    if not M.pointed:
        raise NotPointed("saturation needs a pointed cone; decompose first")
    if lattice is None:
        lattice = M.group
    elif lattice == "ambient":
        lattice = IntegerLattice.standard(M.dim)
    gens = gordon_generators(M.cone, lattice, budget)
    return AffineSemigroup(M.dim, gens)


def is_normal(M: AffineSemigroup, budget: Budget = DEFAULT_BUDGET) -> bool:
    return all(sg_contains(M, h, budget) for h in sg_saturate(M, budget).generators)


def integrality_multiple(M: AffineSemigroup, v, budget: Budget = DEFAULT_BUDGET) -> Optional[int]:
    """Least k in 1..budget.depth with k*v in M; None when v is not integral.

    Raises BudgetExceeded when v passes the cone and span tests but no
    multiple up to the budget is found.
    """
    v = vec(v)
    if not M.cone.contains(v) or M.group.rational_coordinates(v) is None:
        return None
    for k in range(1, budget.depth + 1):
        if sg_contains(M, vscale(k, v), budget):
            return k
    raise BudgetExceeded(f"no multiple k <= {budget.depth} of {v} found in the semigroup")


# ---------------------------------------------------------------------------
# pointed decomposition


@dataclass(frozen=True)
class PointedDecomposition:
    N: AffineSemigroup
    u: tuple
    normal: bool
    window_depth: int
    max_shift: int  # largest z used to certify v + z*u in N on the window
    notes: tuple = field(default=())


def _orient(v):
    for x in v:
        if x:
            return v if x > 0 else vneg(v)
    return v


def _projection_onto_complement(g, v_basis, w_basis):
    """Component of g along span(w_basis) in the decomposition V + W."""
    coeffs = rational_solve(list(v_basis) + list(w_basis), g)
    assert coeffs is not None
    k = len(v_basis)
    out = [Fraction(0)] * len(g)
    for c, w in zip(coeffs[k:], w_basis):
        for i, x in enumerate(w):
            out[i] += c * x
    return out


def _integral_in(lattice: IntegerLattice, x):
    den = 1
    for c in x:
        den = den * c.denominator // math.gcd(den, c.denominator)
    y = tuple(int(c * den) for c in x)
    g = 0
    for c in y:
        g = math.gcd(g, c)
    if g > 1:
        y = tuple(c // g for c in y)
    k = lattice.saturating_multiple(y)
    return vscale(k, y)


def _irreducibles_in_window(M, sigma_basis, sigma, lam, level_cap, budget):
    """Irreducible elements of M intersected with the saturated pointed part, up to a level."""
    seen = {(0,) * M.dim}
    frontier = [(0,) * M.dim]
    while frontier:
        nxt = []
        for x in frontier:
            for h in sigma_basis:
                y = vadd(x, h)
                if y in seen or dot(lam, y) > level_cap:
                    continue
                seen.add(y)
                nxt.append(y)
                if len(seen) > budget.points:
                    raise BudgetExceeded("window enumeration for the pointed part exceeded the budget")
        frontier = nxt
    cands = sorted((y for y in seen if any(y) and sg_contains(M, y, budget)), key=lambda y: (dot(lam, y), y))
    found = []
    for y in cands:
        ly = dot(lam, y)
        if any(dot(lam, h) < ly and sigma.contains(vsub(y, h)) and sg_contains(M, vsub(y, h), budget)
               for h in found):
            continue
        found.append(y)
    return found


def sg_pointed_decomposition(M: AffineSemigroup, b=None, budget: Budget = DEFAULT_BUDGET) -> PointedDecomposition:
    """Write M = N + Z*u with N pointed, u in N, and b in N when given.

    The lineality space V of the cone is spanned by generators whose negatives
    lie in the cone; a basis of V (containing b when b lies in V) is extended
    by generators of M (b first when b is outside V) to a basis of the span.
    Projecting the generators along V gives the pointed part of the cone; N is
    M intersected with the pointed cone sigma spanned by the V basis and those
    projections, and u is the sum of the V basis.  If M is normal N is the
    Gordan semigroup of sigma; otherwise irreducibles of M in sigma are
    collected level by level until the window certificate passes.
    """
    if b is not None:
        b = vec(b)
        if len(b) != M.dim:
            raise DimensionMismatch("b has the wrong length")
        if not sg_contains(M, b, budget):
            raise ValueError(f"b = {b} is not in the semigroup")
    window = budget.window
    zero = (0,) * M.dim
    if M.pointed:
        return PointedDecomposition(M, zero, normal=True, window_depth=window, max_shift=0,
                                    notes=("already pointed",))

    lin = [_orient(g) for g in M.cone.lineality_generators()]
    lin = sorted(set(lin))
    G = M.group
    v_basis = []
    if b is not None and any(b) and rank(lin + [b], M.dim) == rank(lin, M.dim):
        v_basis.append(b)
    for g in lin:
        if rank(v_basis + [g], M.dim) > len(v_basis):
            v_basis.append(g)
    span_rank = rank(M.generators, M.dim)
    w_basis = []
    w_cands = ([b] if b is not None and b not in v_basis and any(b) else []) + \
        sorted(g for g in M.generators if _orient(g) not in set(lin))
    for g in w_cands:
        if len(v_basis) + len(w_basis) == span_rank:
            break
        if rank(v_basis + w_basis + [g], M.dim) > len(v_basis) + len(w_basis):
            w_basis.append(g)
    if len(v_basis) + len(w_basis) != span_rank:
        raise InvalidWitness("failed to extend the lineality basis to a basis of the span")

    proj = []
    for g in M.generators:
        x = _projection_onto_complement(g, v_basis, w_basis)
        if any(x):
            proj.append(_integral_in(G, x))
    sigma = RationalCone.of(list(v_basis) + proj, M.dim)
    if not sigma.pointed:
        raise InvalidWitness("constructed cone is not pointed")
    u = zero
    for v in v_basis:
        u = vadd(u, v)
    hilbert = gordon_generators(sigma, G, budget)
    normal = all(sg_contains(M, h, budget) for h in hilbert)
    lam = find_functional(M.dim, sigma.generators)
    notes = [f"lineality basis {v_basis}", f"complement basis {w_basis}"]

    if normal:
        N = AffineSemigroup(M.dim, hilbert)
        shift = _certify(M, N, u, b, window, budget)
        if shift is None:
            raise InvalidWitness("window certificate for M = N + Zu failed in the normal case")
        return PointedDecomposition(N, u, True, window, shift, tuple(notes + ["normal case"]))

    level = 2 * max(dot(lam, h) for h in hilbert)
    max_level = level * (2 ** 6)
    while level <= max_level:
        gens = _irreducibles_in_window(M, hilbert, sigma, lam, level, budget)
        N = AffineSemigroup.of(gens, M.dim)
        if u in N.generators or sg_contains(N, u, budget):
            shift = _certify(M, N, u, b, window, budget)
            if shift is not None:
                notes.append(f"non-normal case, irreducibles collected up to level {level}")
                return PointedDecomposition(N, u, False, window, shift, tuple(notes))
        level *= 2
    raise BudgetExceeded("could not certify the pointed decomposition within the level budget")


def _certify(M, N, u, b, window, budget) -> Optional[int]:
    """Window check of M = N + Zu; returns the largest shift z used."""
    if not N.pointed:
        return None
    if b is not None and not sg_contains(N, b, budget):
        return None
    if not sg_contains(N, u, budget):
        return None
    for g in N.generators:
        if not sg_contains(M, g, budget):
            return None
    if not (sg_contains(M, u, budget) and sg_contains(M, vneg(u), budget)):
        return None
    worst = 0
    for v in M.window(window):
        for z in range(0, budget.depth * max(1, window) + 1):
            if sg_contains(N, vadd(v, vscale(z, u)), budget):
                worst = max(worst, z)
                break
        else:
            return None
    return worst


def in_decomposition(dec: PointedDecomposition, v, budget: Budget = DEFAULT_BUDGET, max_shift=None) -> bool:
    """Search for z >= 0 with v + z*u in N (z up to max_shift)."""
    limit = max_shift if max_shift is not None else budget.depth * 4
    v = vec(v)
    return any(sg_contains(dec.N, vadd(v, vscale(z, dec.u)), budget) for z in range(limit + 1))

"""Rings built from p-monomials: quotients S/I and p-semigroup rings Z_(p)[M]."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DimensionMismatch, NotPointed, UnitIdeal
from .geometry import DEFAULT_BUDGET, Budget, express, vadd, vec, vneg, vscale, vsub
from .pmonomial import AmbientRing, PMonomial, PMonomialIdeal, format_prime, minimal_primes
from .semigroup import AffineSemigroup, sg_contains, sg_pointed_decomposition, sg_saturate, integrality_multiple


@dataclass(frozen=True)
class PolynomialQuotient:
    """S/I for a p-monomial ideal I of the ambient ring S."""

    ambient: AmbientRing
    ideal: PMonomialIdeal

    @classmethod
    def of(cls, ambient: AmbientRing, gens=()) -> "PolynomialQuotient":
        ideal = PMonomialIdeal.of(ambient, gens)
        if ideal.is_unit:
            raise UnitIdeal(f"{ideal.format()} is the unit ideal")
        return cls(ambient, ideal)

    @property
    def p(self):
        return self.ambient.p

    @property
    def names(self):
        return self.ambient.names

    def describe(self):
        base = _coefficient_label(self.p, self.ambient.coefficient_exponent)
        vars_ = ",".join(n + ("^±" if l else "") for n, l in zip(self.names, self.ambient.laurent))
        ring = f"{base}[{vars_}]"
        return ring if not self.ideal.generators else f"{ring}/{self.ideal.format()}"


@dataclass(frozen=True)
class PSemigroup:
    """Z_(p)[M] where M in Z^{n+1} is generated by e0 and p-monomial exponents.

    ``localization`` is set when the ring was produced from a pointed
    decomposition: the ring then equals the pointed ring localized at u.
    """

    p: int
    semigroup: AffineSemigroup
    names: tuple
    coefficient_exponent: Optional[int] = None
    localization: Optional[tuple] = None

    @classmethod
    def of(cls, p, gens, names=None, coefficient_exponent=None) -> "PSemigroup":
        gens = [vec(g) for g in gens]
        if not gens:
            raise ValueError("a p-semigroup ring needs at least one generator besides p")
        width = len(gens[0])
        for i, g in enumerate(gens):
            if len(g) != width:
                raise DimensionMismatch(f"generator {i} has {len(g)} exponents, expected {width}")
            if g[0] < 0:
                raise ValueError(f"generator {i} has a negative p-exponent")
        AmbientRing(p, width - 1)  # validates the prime and the variable count
        e0 = (1,) + (0,) * (width - 1)
        names = tuple(names) if names else AmbientRing(p, width - 1).names
        if len(names) != width - 1:
            raise ValueError("need one name per variable")
        return cls(p, AffineSemigroup.of(gens + [e0], width), names, coefficient_exponent)

    @property
    def width(self):
        return self.semigroup.dim

    @property
    def e0(self):
        return (1,) + (0,) * (self.width - 1)

    def monomial(self, exps) -> PMonomial:
        return PMonomial(self.p, vec(exps))

    def ring_generators(self):
        """Generators other than e0 (p itself), in canonical order."""
        return tuple(g for g in self.semigroup.generators if g != self.e0)

    def describe(self):
        base = _coefficient_label(self.p, self.coefficient_exponent)
        gens = ", ".join(self.monomial(g).format(self.names) for g in self.ring_generators())
        text = f"{base}[{gens}]"
        if self.localization is not None:
            text += f" (localization at {self.monomial(self.localization).format(self.names)})"
        return text


def _coefficient_label(p, e):
    return f"Z_({p})" if e is None else f"Z/{p}^{e}"


def _exps(R, w):
    e = w.exps if isinstance(w, PMonomial) else vec(w)
    if len(e) != R.width:
        raise DimensionMismatch(f"p-monomial has {len(e)} exponents, expected {R.width}")
    return e


def psg_contains(R: PSemigroup, w, budget: Budget = DEFAULT_BUDGET) -> bool:
    return sg_contains(R.semigroup, _exps(R, w), budget)


def psg_is_integral(R: PSemigroup, v, budget: Budget = DEFAULT_BUDGET):
    """(True, k) with v^k in R and k minimal, or (False, None).

    BudgetExceeded means the cone and span tests pass but no power up to the
    budget was found; that outcome is inconclusive, not a negative answer.
    """
    k = integrality_multiple(R.semigroup, _exps(R, v), budget)
    return (k is not None), k


def psg_in_fraction_field(R: PSemigroup, v):
    """(True, (u, w)) with u, w in R and v = u/w, or (False, None)."""
    e = _exps(R, v)
    gens = R.semigroup.generators
    z = express(gens, e)
    if z is None:
        return False, None
    num = den = (0,) * R.width
    for c, g in zip(z, gens):
        if c > 0:
            num = vadd(num, vscale(c, g))
        elif c < 0:
            den = vadd(den, vscale(-c, g))
    return True, (R.monomial(num), R.monomial(den))


def ring_normalize(R: PSemigroup, budget: Budget = DEFAULT_BUDGET) -> PSemigroup:
    """The normalization Z_(p)[saturation of M].

    A non-pointed M is first written as N + Z*u with e0 in N; the result is
    then the normalization of Z_(p)[N] localized at u.
    """
    M = R.semigroup
    if M.pointed:
        sat = sg_saturate(M, budget)
        return PSemigroup(R.p, sat, R.names, R.coefficient_exponent, R.localization)
    dec = sg_pointed_decomposition(M, R.e0, budget)
    sat = sg_saturate(dec.N, budget)
    gens = canonical_with(sat.generators, vneg(dec.u))
    return PSemigroup(R.p, AffineSemigroup(M.dim, gens), R.names, R.coefficient_exponent, dec.u)


def canonical_with(gens, extra):
    return tuple(sorted(set(gens) | {extra}))


@dataclass(frozen=True)
class HomogeneousIdeal:
    """Ideal of a p-semigroup ring generated by p-monomials of the ring.

    Divisibility is relative to the ring: g divides w iff w - g lies in M.
    """

    ring: PSemigroup
    generators: tuple

    def contains(self, w, budget: Budget = DEFAULT_BUDGET) -> bool:
        e = _exps(self.ring, w)
        return any(sg_contains(self.ring.semigroup, vsub(e, g), budget) for g in self.generators)

    def format(self):
        return "(" + ", ".join(self.ring.monomial(g).format(self.ring.names) for g in self.generators) + ")"


def max_homogeneous_ideal(R: PSemigroup, budget: Budget = DEFAULT_BUDGET) -> HomogeneousIdeal:
    """p together with the non-trivial generators, dropping ones divisible in R by another."""
    if not R.semigroup.pointed:
        raise NotPointed("the maximal homogeneous ideal needs a pointed semigroup")
    cands = [R.e0] + list(R.ring_generators())
    keep = []
    for g in cands:
        if any(h != g and sg_contains(R.semigroup, vsub(g, h), budget) for h in cands):
            continue
        keep.append(g)
    return HomogeneousIdeal(R, tuple(keep))


@dataclass(frozen=True)
class Component:
    prime: tuple  # indices into (p, x1..xn)
    label: str  # "equal-char-p" or "mixed"
    residue_ring: str
    dimension: int


@dataclass(frozen=True)
class ComponentReport:
    ring: str
    components: tuple
    dimension_convention: str = "Krull dimension of the residue ring S/P; Z_(p) counts as dimension 1"

    def rows(self):
        return [c for c in self.components]


def classify_components(R: PolynomialQuotient) -> ComponentReport:
    # minimal_primes raises UnitIdeal for the unit ideal
    primes = minimal_primes(R.ideal)
    amb = R.ambient
    comps = []
    for subset in primes:
        rest = [i for i in range(1, amb.width) if i not in subset]
        names = ",".join(amb.names[i - 1] + ("^±" if amb.laurent[i - 1] else "") for i in rest)
        equal_char = 0 in subset
        base = f"F_{amb.p}" if equal_char else f"Z_({amb.p})"
        residue = f"{base}[{names}]" if rest else base
        dim = len(rest) + (0 if equal_char else 1)
        comps.append(Component(subset, "equal-char-p" if equal_char else "mixed", residue, dim))
    return ComponentReport(R.describe(), tuple(comps))


def component_kills(component: Component, w: PMonomial) -> bool:
    """Does w map to zero in S/P?  True iff some variable of P divides w."""
    return any(w.exps[i] > 0 for i in component.prime)


def prime_label(component: Component, ambient: AmbientRing) -> str:
    return format_prime(component.prime, ambient)

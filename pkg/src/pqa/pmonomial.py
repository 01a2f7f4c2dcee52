"""p-monomials p^t0 x1^t1 ... xn^tn, their ideals, and the x0-lift.

An exponent vector is an integer tuple of length n+1 whose slot 0 holds the
power of p (or of the extra variable x0 after lifting).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DimensionMismatch, UnitIdeal
from .geometry import PLocalScalar, vadd, vec, vsub

MAX_VARS = 8


@dataclass(frozen=True)
class AmbientRing:
    """Z_(p)[x1..xn] with optional per-variable Laurent flags.

    ``coefficient_exponent`` = e selects Z/p^e coefficients instead of Z_(p);
    only the quasilength engine uses it.
    """

    p: int
    n: int
    laurent: tuple = ()
    names: tuple = ()
    coefficient_exponent: Optional[int] = None

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"{self.p} is not a prime")
        if self.n > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables are supported")
        if not self.laurent:
            object.__setattr__(self, "laurent", (False,) * self.n)
        if len(self.laurent) != self.n:
            raise ValueError("need one Laurent flag per variable")
        if not self.names:
            default = ("x", "y", "z", "w") if self.n <= 4 else tuple(f"x{i}" for i in range(1, self.n + 1))
            object.__setattr__(self, "names", tuple(default[: self.n]))
        if len(self.names) != self.n:
            raise ValueError("need one name per variable")
        if self.coefficient_exponent is not None and self.coefficient_exponent < 1:
            raise ValueError("coefficient exponent must be at least 1")

    @property
    def width(self):
        return self.n + 1

    def admissible(self, exps) -> bool:
        """Can ``exps`` be the exponent vector of an element of S (p-power >= 0)?"""
        if exps[0] < 0:
            return False
        return all(l or e >= 0 for e, l in zip(exps[1:], self.laurent))

    def lifted_names(self):
        return ("x0",) + self.names

    def variable_names(self):
        return ("p",) + self.names


@dataclass(frozen=True, order=True)
class PMonomial:
    p: int
    exps: tuple

    @classmethod
    def of(cls, p, exps) -> "PMonomial":
        return cls(p, vec(exps))

    def __mul__(self, other: "PMonomial") -> "PMonomial":
        return PMonomial(self.p, vadd(self.exps, other.exps))

    def __pow__(self, k: int) -> "PMonomial":
        return PMonomial(self.p, tuple(k * e for e in self.exps))

    @property
    def degree(self):
        """Multidegree in x1..xn."""
        return self.exps[1:]

    def is_one(self):
        return not any(self.exps)

    def format(self, names=None, base="p") -> str:
        names = names or tuple(f"x{i}" for i in range(1, len(self.exps)))
        parts = []
        for sym, e in zip((base,) + tuple(names), self.exps):
            if e == 0:
                continue
            parts.append(sym if e == 1 else f"{sym}^{e}")
        return "*".join(parts) if parts else "1"

    def __str__(self):
        return self.format()


@dataclass(frozen=True, order=True)
class Monomial:
    """x0^t0 x1^t1 ... xn^tn in the lifted ring S'."""

    exps: tuple

    def format(self, names=None):
        return PMonomial(2, self.exps).format(names, base="x0")


def pm_normalize(coefficient: PLocalScalar, exps) -> tuple[PLocalScalar, PMonomial]:
    """Fold the p-adic valuation of ``coefficient`` into the p-exponent."""
    if coefficient.is_zero:
        raise ValueError("zero coefficient has no p-monomial normal form")
    v = coefficient.valuation()
    exps = vec(exps)
    return coefficient.unit_part(), PMonomial(coefficient.p, (exps[0] + v,) + exps[1:])


def pm_divides(wi: PMonomial, w: PMonomial, ambient: AmbientRing) -> bool:
    """Does wi divide w in S?  The quotient must have p-power >= 0 and
    nonnegative exponents on the non-Laurent variables."""
    return ambient.admissible(vsub(w.exps, wi.exps))


def lift(w: PMonomial) -> Monomial:
    return Monomial(w.exps)


def drop(m: Monomial, p: int) -> PMonomial:
    return PMonomial(p, m.exps)


@dataclass(frozen=True)
class PMonomialIdeal:
    ambient: AmbientRing
    generators: tuple = field(default=())

    @classmethod
    def of(cls, ambient: AmbientRing, gens) -> "PMonomialIdeal":
        ms = []
        for i, g in enumerate(gens):
            g = g if isinstance(g, PMonomial) else PMonomial.of(ambient.p, g)
            if len(g.exps) != ambient.width:
                raise DimensionMismatch(
                    f"generator {i} has {len(g.exps)} exponents, expected {ambient.width}")
            if not ambient.admissible(g.exps):
                raise ValueError(f"generator {i} ({g.exps}) is not an element of the ambient ring")
            ms.append(g)
        return cls(ambient, _reduce(ambient, ms))

    def contains(self, w: PMonomial) -> bool:
        return ideal_contains(self, w)

    def __contains__(self, w):
        return ideal_contains(self, w)

    @property
    def is_unit(self):
        return any(self._unit_gen(g) for g in self.generators)

    def _unit_gen(self, g):
        return g.exps[0] == 0 and all(e == 0 or l for e, l in zip(g.exps[1:], self.ambient.laurent))

    def format(self):
        return "(" + ", ".join(g.format(self.ambient.names) for g in self.generators) + ")"


def _reduce(ambient, gens):
    """Drop duplicates and generators divisible by another generator."""
    # in a Laurent variable only the sign-free part matters; zero those slots
    gens = sorted(set(PMonomial(g.p, _strip_laurent(ambient, g.exps)) for g in gens))
    out = []
    for g in gens:
        if any(o != g and pm_divides(o, g, ambient) for o in gens):
            continue
        out.append(g)
    return tuple(sorted(out, key=_gen_key))


def _strip_laurent(ambient, exps):
    return (exps[0],) + tuple(0 if l else e for e, l in zip(exps[1:], ambient.laurent))


def _gen_key(g):
    return (sum(g.exps), g.exps)


def ideal_contains(I: PMonomialIdeal, w: PMonomial) -> bool:
    if len(w.exps) != I.ambient.width:
        raise DimensionMismatch("p-monomial has the wrong number of exponents")
    return any(pm_divides(g, w, I.ambient) for g in I.generators)


def lift_ideal(I: PMonomialIdeal) -> tuple:
    """The monomial ideal J in S' (generator list) matching I under x0 <-> p."""
    return tuple(lift(g) for g in I.generators)


def drop_ideal(J: Sequence[Monomial], ambient: AmbientRing) -> PMonomialIdeal:
    return PMonomialIdeal.of(ambient, [drop(m, ambient.p) for m in J])


def monomial_radical(J: Sequence[Monomial], ambient: AmbientRing) -> tuple:
    """Squarefree parts of the generators of a monomial ideal."""
    out = set()
    for m in J:
        e = _strip_laurent(ambient, m.exps)
        out.add(Monomial(tuple(1 if x > 0 else 0 for x in e)))
    return tuple(sorted(out))


def radical(I: PMonomialIdeal) -> PMonomialIdeal:
    return drop_ideal(monomial_radical(lift_ideal(I), I.ambient), I.ambient)


def _support(ambient, exps):
    return frozenset(i for i, e in enumerate(_strip_laurent(ambient, exps)) if e > 0)


def minimal_transversals(supports, universe) -> list:
    """Inclusion-minimal subsets of ``universe`` meeting every support set."""
    supports = [frozenset(s) for s in supports]
    found = []
    for size in range(len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            c = frozenset(combo)
            if any(f <= c for f in found):
                continue
            if all(s & c for s in supports):
                found.append(c)
    return found


def minimal_primes(I: PMonomialIdeal) -> list:
    """Minimal primes as sorted index tuples over {0 (= p), 1..n}."""
    if I.is_unit:
        raise UnitIdeal(f"{I.format()} is the unit ideal")
    rad = radical(I)
    supports = [_support(I.ambient, g.exps) for g in rad.generators]
    universe = [0] + [i for i in range(1, I.ambient.width) if not I.ambient.laurent[i - 1]]
    primes = [tuple(sorted(c)) for c in minimal_transversals(supports, universe)]
    return sorted(primes, key=lambda c: (len(c), c))


def format_prime(subset, ambient: AmbientRing) -> str:
    names = ambient.variable_names()
    return "(" + ",".join(names[i] for i in subset) + ")"

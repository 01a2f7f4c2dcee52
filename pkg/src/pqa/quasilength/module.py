"""The finite module R/I_t as a direct sum of cyclic p-groups.

Each surviving x-degree a carries one slot Z/p^c: the ring's degree-a piece
is p^m(a) * Z_(p) and the quotient keeps the p-powers p^k, m(a) <= k < m(a)+c.
Multiplication by a p-monomial of R sends slot a to slot a + deg, scaled by a
power of p.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import DimensionMismatch
from ..geometry import vadd, vec, vscale, vsub
from ..pmonomial import PMonomial, PMonomialIdeal, ideal_contains
from ..pring import PolynomialQuotient, PSemigroup
from ..semigroup import sg_contains

DEFAULT_LENGTH_CAP = 4096
POWER_SEARCH_LIMIT = 64


@dataclass(frozen=True)
class SequenceSpec:
    entries: tuple  # exponent vectors of p-monomials in R
    t: tuple

    @classmethod
    def of(cls, entries, t) -> "SequenceSpec":
        es = tuple(e.exps if isinstance(e, PMonomial) else vec(e) for e in entries)
        t = tuple(int(x) for x in t)
        if not es:
            raise ValueError("the sequence needs at least one entry")
        if len(t) != len(es):
            raise ValueError(f"t has {len(t)} entries but the sequence has {len(es)}")
        if any(x < 1 for x in t):
            raise ValueError("every t_i must be at least 1")
        return cls(es, t)

    @property
    def d(self):
        return len(self.entries)

    def with_t(self, t) -> "SequenceSpec":
        return SequenceSpec.of(self.entries, t)


@dataclass(frozen=True)
class Slot:
    degree: tuple
    modulus_exp: int  # c: the slot group is Z/p^c
    base: int  # m: the slot is generated by p^m x^degree


@dataclass(frozen=True)
class Action:
    """Multiplication by one p-monomial: slot j -> (target[j], p^power[j]); target -1 means zero."""

    label: tuple
    target: tuple
    power: tuple


@dataclass(frozen=True)
class FiniteGradedModule:
    p: int
    slots: tuple
    ring_actions: tuple
    seq_actions: tuple
    t: tuple = ()
    description: str = ""

    @property
    def k(self):
        return len(self.slots)

    @property
    def moduli(self):
        return tuple(self.p ** s.modulus_exp for s in self.slots)

    @property
    def length(self):
        """F_p-length, i.e. the sum of the slot exponents."""
        return sum(s.modulus_exp for s in self.slots)

    @property
    def element_count(self):
        return self.p ** self.length

    def apply(self, action: Action, v) -> tuple:
        out = [0] * self.k
        mods = self.moduli
        for j, x in enumerate(v):
            b = action.target[j]
            if b < 0 or x == 0:
                continue
            out[b] = (out[b] + x * self.p ** action.power[j]) % mods[b]
        return tuple(out)

    def reduce(self, v) -> tuple:
        return tuple(x % m for x, m in zip(v, self.moduli))

    def unit_vector(self, j) -> tuple:
        return tuple(int(i == j) for i in range(self.k))

    def slot_label(self, j, names=None) -> str:
        s = self.slots[j]
        return PMonomial(self.p, (s.base,) + s.degree).format(names)


@dataclass(frozen=True)
class NotFinite:
    reason: str
    witness: Optional[tuple] = None

    def __bool__(self):
        return False


class _Quotient:
    """Exponent bookkeeping shared by both ring variants."""

    def __init__(self, R, seq: SequenceSpec, extra_p_power=None):
        self.R = R
        self.seq = seq
        self.width = R.ambient.width if isinstance(R, PolynomialQuotient) else R.width
        for i, e in enumerate(seq.entries):
            if len(e) != self.width:
                raise DimensionMismatch(f"sequence entry {i} has {len(e)} exponents, expected {self.width}")
        e = R.ambient.coefficient_exponent if isinstance(R, PolynomialQuotient) else R.coefficient_exponent
        caps = [x for x in (e, extra_p_power) if x is not None]
        self.p_cap = min(caps) if caps else None
        self.powers = tuple(vscale(ti, w) for ti, w in zip(seq.t, seq.entries))
        if isinstance(R, PolynomialQuotient):
            amb = R.ambient
            for i, w in enumerate(seq.entries):
                if not amb.admissible(w):
                    raise ValueError(f"sequence entry {i} is not an element of the ring")
                if ideal_contains(R.ideal, PMonomial(amb.p, w)):
                    raise ValueError(f"sequence entry {i} is zero in the ring")
                if not any(w[1:]) and w[0] == 0:
                    raise ValueError(f"sequence entry {i} is a unit")
            gens = list(R.ideal.generators) + [PMonomial(amb.p, w) for w in self.powers]
            if self.p_cap is not None:
                gens.append(PMonomial(amb.p, (self.p_cap,) + (0,) * amb.n))
            self.K = PMonomialIdeal.of(amb, gens)
            self.steps = [(1,) + (0,) * amb.n]
            for i in range(amb.n):
                u = tuple(int(j == i + 1) for j in range(self.width))
                self.steps.append(u)
                if amb.laurent[i]:
                    self.steps.append(tuple(-x for x in u))
        else:
            for i, w in enumerate(seq.entries):
                if not sg_contains(R.semigroup, w):
                    raise ValueError(f"sequence entry {i} is not an element of the ring")
                if not any(w):
                    raise ValueError(f"sequence entry {i} is a unit")
            self.steps = list(R.semigroup.generators)

    def in_K(self, v) -> bool:
        if isinstance(self.R, PolynomialQuotient):
            return ideal_contains(self.K, PMonomial(self.R.p, v))
        return any(sg_contains(self.R.semigroup, vsub(v, w)) for w in self._shifts())

    def _shifts(self):
        # p^e R is e*e0 + M, which caps every slot at Z/p^e
        if self.p_cap is None:
            return self.powers
        return self.powers + ((self.p_cap,) + (0,) * (self.width - 1),)

    def admissible(self, v) -> bool:
        if isinstance(self.R, PolynomialQuotient):
            return self.R.ambient.admissible(v)
        return True  # steps are semigroup generators, sums stay in M

    def finiteness_obstruction(self) -> Optional[NotFinite]:
        """Exact or bounded test that some ring generator has no power in K."""
        R = self.R
        if isinstance(R, PolynomialQuotient):
            amb = R.ambient
            for i, l in enumerate(amb.laurent):
                if l:
                    return NotFinite(f"{amb.names[i]} is a unit, so every degree class of it survives")
            gens = self.K.generators
            names = amb.variable_names()
            for i in range(self.width):
                if not any(g.exps[i] > 0 and all(x == 0 for j, x in enumerate(g.exps) if j != i) for g in gens):
                    if i == 0:
                        return NotFinite("no power of p lies in the ideal, so the class of 1 has no p-power relation",
                                         (0,) * self.width)
                    return NotFinite(f"no power of {names[i]} lies in the ideal, so its powers give infinitely many classes",
                                     tuple(int(j == i) for j in range(self.width)))
            return None
        cone = R.semigroup.cone
        for g in R.semigroup.generators:
            # k*g - s in the cone is monotone in k, so skip straight to the first k where it holds
            start = min((next((k for k in range(1, POWER_SEARCH_LIMIT + 1) if cone.contains(vsub(vscale(k, g), s))),
                              POWER_SEARCH_LIMIT + 1) for s in self._shifts()), default=POWER_SEARCH_LIMIT + 1)
            if not any(self.in_K(vscale(k, g)) for k in range(start, POWER_SEARCH_LIMIT + 1)):
                return NotFinite(f"no power up to {POWER_SEARCH_LIMIT} of the generator {g} lies in the ideal", g)
        return None


def build_quotient_module(R: Union[PolynomialQuotient, PSemigroup], seq: SequenceSpec,
                          length_cap: int = DEFAULT_LENGTH_CAP, extra_p_power=None):
    """R/I_t as a FiniteGradedModule, or NotFinite with the reason."""
    q = _Quotient(R, seq, extra_p_power)
    obstruction = q.finiteness_obstruction()
    if obstruction is not None:
        return obstruction
    zero = (0,) * q.width
    seen = set()
    if not q.in_K(zero):
        seen.add(zero)
    frontier = deque(seen)
    while frontier:
        x = frontier.popleft()
        for s in q.steps:
            y = vadd(x, s)
            if y in seen or not q.admissible(y) or q.in_K(y):
                continue
            seen.add(y)
            if len(seen) > length_cap:
                return NotFinite(f"more than {length_cap} surviving p-monomial classes", y)
            frontier.append(y)

    by_degree = {}
    for v in seen:
        by_degree.setdefault(v[1:], []).append(v[0])
    degrees = sorted(by_degree, key=lambda a: (sum(a), a))
    slots = []
    index = {}
    for a in degrees:
        t0s = sorted(by_degree[a])
        m = t0s[0]
        if t0s != list(range(m, m + len(t0s))):
            raise AssertionError("p-exponents of a degree class must be consecutive")
        index[a] = len(slots)
        slots.append(Slot(a, len(t0s), m))

    def action(g):
        tgt, pw = [], []
        for s in slots:
            b = vadd(s.degree, g[1:])
            j = index.get(b)
            e = g[0] + s.base - slots[j].base if j is not None else None
            if j is None or e >= slots[j].modulus_exp:
                tgt.append(-1)
                pw.append(0)
            else:
                tgt.append(j)
                pw.append(e)
        return Action(tuple(g), tuple(tgt), tuple(pw))

    e0 = (1,) + (0,) * (q.width - 1)
    ring_actions = tuple(action(g) for g in q.steps if g != e0)
    seq_actions = tuple(action(w) for w in seq.entries)
    desc = R.describe() + " / I_t, t=" + ",".join(map(str, seq.t))
    return FiniteGradedModule(R.p, tuple(slots), ring_actions, seq_actions, seq.t, desc)


def factor_length_bound(R, seq: SequenceSpec, module: FiniteGradedModule) -> Optional[int]:
    """F_p-length of R/(I + p^c) with c the largest slot exponent of ``module``.

    Every cyclic factor of a filtration of the module is a quotient of this
    ring, so its length bounds the length of a single step.  None if infinite.
    """
    if module.k == 0:
        return 1
    cmax = max(s.modulus_exp for s in module.slots)
    base = build_quotient_module(R, seq.with_t((1,) * seq.d), extra_p_power=cmax)
    if isinstance(base, NotFinite):
        return None
    return base.length


def lower_bound(module: FiniteGradedModule, factor_length: Optional[int]) -> int:
    if module.length == 0:
        return 0
    if not factor_length:
        return 1
    return math.ceil(module.length / factor_length)

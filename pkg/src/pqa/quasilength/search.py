"""Filtration certificates and exact quasilength search.

A filtration step from a submodule N adds R*m for some m in the colon
(N : I), i.e. an element whose images under the sequence generators already
lie in N.  Quotient lengths only drop when N grows, so from any state it is
enough to consider the inclusion-maximal children N + R*m.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidWitness
from ..geometry import DEFAULT_BUDGET, Budget
from .echelon import Echelon
from .module import FiniteGradedModule


@dataclass(frozen=True)
class FiltrationCertificate:
    elements: tuple  # module vectors m_1..m_L

    @property
    def length(self):
        return len(self.elements)


@dataclass(frozen=True)
class QuasilengthResult:
    lower: int
    upper: int
    exact: bool
    certificate: FiltrationCertificate
    method: str
    states: int = 0
    notes: tuple = ()

    @property
    def value(self) -> Optional[int]:
        return self.upper if self.exact else None


class Engine:
    """Submodule operations for one finite module."""

    def __init__(self, module: FiniteGradedModule):
        self.module = module
        self.ech = Echelon(module.moduli, module.ring_actions, module.seq_actions, module.p)
        self._plain = Echelon(module.moduli, (), (), module.p)

    def zero(self):
        return self.ech.zero()

    def full(self, B) -> bool:
        return self.ech.is_full(B)

    def close(self, B, vecs):
        return self.ech.close(B, vecs) if len(vecs) else B

    def colength(self, B) -> int:
        return self.ech.colength(B)

    def key(self, B):
        return self.ech.key(B)

    def annihilated(self, B, m) -> bool:
        """Is I*m inside span(B)?"""
        return all(self.ech.contains(B, self.ech.apply_seq(a, m)) for a in range(len(self.module.seq_actions)))

    def children(self, B, cap: int):
        """Inclusion-maximal submodules N + R*m with m in (N : I).

        Returns (children, complete) where children is a list of
        (echelon, generator) sorted by decreasing length and then generator,
        and complete is False when the coset count exceeded ``cap`` and only
        a restricted candidate set was tried.
        """
        k = self.module.k
        C = self.ech.colon(B)
        ranges = [int(B[j, j]) // int(C[j, j]) for j in range(k)]
        live = [j for j in range(k) if ranges[j] > 1]
        if not live:
            return [], True
        mods = self.ech.mods
        p = self.module.p
        # elements of pC + N generate submodules of some child, skip them
        D = self._plain.close(B, [[(p * int(x)) % int(mods[l]) for l, x in enumerate(C[j])] for j in live])
        count = math.prod(ranges[j] for j in live)
        complete = count - 1 <= cap
        if complete:
            coeffs = itertools.product(*[range(ranges[j]) for j in live])
        else:
            singles = [tuple(int(i == s) for i in range(len(live))) for s in range(len(live))]
            pairs = [tuple(int(i in (a, b)) for i in range(len(live))) for a, b in itertools.combinations(range(len(live)), 2)]
            coeffs = singles + pairs
        rows = [C[j] for j in live]
        kids = []
        for a in coeffs:
            if not any(a):
                continue
            m = np.zeros(k, dtype=self.ech.dtype)
            for aj, row in zip(a, rows):
                if aj:
                    m = (m + aj * row) % mods
            if self.ech.contains(D, m):
                continue
            if any(self.ech.contains(K, m) for K, _ in kids):
                continue
            kids.append((self.ech.close(B, [m]), tuple(int(x) for x in m)))
        lengths = [self.colength(K) for K, _ in kids]
        order = sorted(range(len(kids)), key=lambda i: (lengths[i], kids[i][1]))
        keep = []
        for pos, i in enumerate(order):
            K = kids[i][0]
            if any(lengths[j] < lengths[i] and self.ech.subset(K, kids[j][0]) for j in order[pos + 1:]):
                continue
            keep.append(i)
        return [kids[i] for i in keep], complete


def verify_certificate(module: FiniteGradedModule, cert: FiltrationCertificate, start=None) -> bool:
    """Each element is killed by I modulo its predecessors and together they generate the module."""
    if module.k == 0:
        return True
    eng = Engine(module)
    B = eng.zero() if start is None else start
    for m in cert.elements:
        if len(m) != module.k:
            return False
        if not eng.annihilated(B, m):
            return False
        B = eng.close(B, [m])
    return eng.full(B)


def greedy_certificate(module: FiniteGradedModule, budget: Budget = DEFAULT_BUDGET, start=None) -> FiltrationCertificate:
    """Repeatedly add the child with the smallest remaining colength (ties: smallest generator)."""
    if module.k == 0:
        return FiltrationCertificate(())
    eng = Engine(module)
    B = eng.zero() if start is None else start
    out = []
    while not eng.full(B):
        kids, _ = eng.children(B, budget.element_cap)
        if not kids:
            raise InvalidWitness("colon of a proper submodule produced no new element")
        B, m = kids[0]
        out.append(m)
    cert = FiltrationCertificate(tuple(out))
    if not verify_certificate(module, cert, start):
        raise InvalidWitness("greedy certificate failed verification")
    return cert


def staircase_certificate(module: FiniteGradedModule) -> FiltrationCertificate:
    """The products w^a, a in the box [0,t), listed by decreasing total exponent.

    Multiplying w^a by w_i gives w^(a+e_i), which is listed earlier or is zero,
    so the chain has I-annihilated cyclic factors and length at most t1...td.
    """
    if module.k == 0:
        return FiltrationCertificate(())
    eng = Engine(module)
    d = len(module.seq_actions)
    one = module.unit_vector(0)
    if module.slots[0].degree != (0,) * len(module.slots[0].degree) or module.slots[0].base != 0:
        raise InvalidWitness("the class of 1 is missing from a nonzero module")
    boxes = sorted(itertools.product(*[range(t) for t in module.t]), key=lambda a: (-sum(a), tuple(-x for x in a)))
    cache = {}

    def power(a):
        if a in cache:
            return cache[a]
        i = next((i for i, x in enumerate(a) if x), None)
        if i is None:
            v = one
        else:
            prev = power(a[:i] + (a[i] - 1,) + a[i + 1:])
            v = tuple(int(x) for x in eng.ech.apply_seq(i, prev))
        cache[a] = v
        return v

    B = eng.zero()
    out = []
    for a in boxes:
        m = power(a)
        if not any(m) or eng.ech.contains(B, m):
            continue
        out.append(m)
        B = eng.close(B, [m])
    cert = FiltrationCertificate(tuple(out))
    if not verify_certificate(module, cert):
        raise InvalidWitness("staircase certificate failed verification")
    assert d == len(module.t)
    return cert


def exact_quasilength(module: FiniteGradedModule, factor_length: Optional[int] = None,
                      budget: Budget = DEFAULT_BUDGET, start=None) -> QuasilengthResult:
    """Quasilength of the module (or of module/start) with a certificate.

    Breadth-first over layers of maximal children; states are deduplicated by
    their canonical echelon and dominated states are dropped.  A state whose
    colength forces more steps than the best certificate is pruned.  If the
    state budget runs out the result degrades to certified bounds.
    """
    if module.k == 0:
        return QuasilengthResult(0, 0, True, FiltrationCertificate(()), "zero module")
    eng = Engine(module)
    B0 = eng.zero() if start is None else start
    colength0 = eng.colength(B0)

    def lb(colength):
        if colength == 0:
            return 0
        if not factor_length:
            return 1
        return math.ceil(colength / factor_length)

    lower = lb(colength0)
    best = greedy_certificate(module, budget, start)
    method = "greedy"
    if start is None:
        stair = staircase_certificate(module)
        if stair.length < best.length:
            best, method = stair, "staircase"
    upper = best.length
    notes = [f"greedy/staircase upper bound {upper}", f"length lower bound {lower}"]
    if lower == upper:
        return QuasilengthResult(lower, upper, True, best, f"bounds meet ({method})", 0, tuple(notes))
    if module.p ** colength0 > budget.element_cap:
        notes.append(f"module has more than {budget.element_cap} elements; exhaustive search skipped")
        return QuasilengthResult(lower, upper, False, best, f"bounds ({method})", 0, tuple(notes))

    layer = [(B0, ())]
    seen = {eng.key(B0)}
    states = 0
    depth = 0
    complete = True
    while True:
        nxt = []
        for B, path in layer:
            kids, ok = eng.children(B, budget.element_cap)
            complete = complete and ok
            for K, m in kids:
                if eng.full(K):
                    cert = FiltrationCertificate(path + (m,))
                    if not verify_certificate(module, cert, start):
                        raise InvalidWitness("search certificate failed verification")
                    return QuasilengthResult(depth + 1, depth + 1, True, cert, "exhaustive search",
                                             states, tuple(notes))
                key = eng.key(K)
                if key in seen:
                    continue
                seen.add(key)
                if depth + 1 + lb(eng.colength(K)) >= upper:
                    continue
                nxt.append((K, path + (m,)))
        states += len(nxt)
        nxt = _antichain(eng, nxt)
        depth += 1
        if not complete:
            notes.append("candidate set was restricted; search is not exhaustive")
            return QuasilengthResult(lower, upper, False, best, f"bounds ({method})", states, tuple(notes))
        if not nxt:
            return QuasilengthResult(upper, upper, True, best, f"exhaustive search confirms {method}",
                                     states, tuple(notes))
        if states > budget.states:
            notes.append(f"state budget {budget.states} exhausted at depth {depth}")
            return QuasilengthResult(max(lower, depth + 1), upper, False, best, f"bounds ({method})",
                                     states, tuple(notes))
        layer = nxt


def _antichain(eng: Engine, states, limit=600):
    """Drop states contained in a strictly larger state of the same layer."""
    if len(states) > limit:
        return states
    cl = [eng.colength(B) for B, _ in states]
    keep = []
    for i, (B, path) in enumerate(states):
        if any(cl[j] < cl[i] and eng.ech.subset(B, states[j][0]) for j in range(len(states))):
            continue
        keep.append((B, path))
    return keep

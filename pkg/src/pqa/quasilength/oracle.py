"""Brute-force quasilength on explicit element sets.

Independent of the echelon code: submodules are frozensets of module vectors,
closures are computed by orbit enumeration, and the search is an iterative
deepening depth-first search with no memo shared between branches.
"""
from __future__ import annotations

import itertools
from typing import Optional

from .module import FiniteGradedModule

ORACLE_LIMIT = 512


def _elements(module):
    return list(itertools.product(*[range(m) for m in module.moduli]))


def _add(module, x, y):
    return tuple((a + b) % m for a, b, m in zip(x, y, module.moduli))


def _closure(module, S, m):
    """Submodule generated by the submodule S and the element m."""
    orbit = {m}
    todo = [m]
    while todo:
        x = todo.pop()
        for act in module.ring_actions:
            y = module.apply(act, x)
            if y not in orbit:
                orbit.add(y)
                todo.append(y)
    T = set(S)
    for g in sorted(orbit):
        if g in T:
            continue
        multiples = [tuple(0 for _ in g)]
        x = g
        while any(x):
            multiples.append(x)
            x = _add(module, x, g)
        T = {_add(module, t, k) for t in T for k in multiples}
    return frozenset(T)


def oracle_quasilength(module: FiniteGradedModule, factor_length: Optional[int] = None,
                       limit: int = ORACLE_LIMIT, start: Optional[frozenset] = None) -> int:
    """Exact quasilength by brute force.

    Without ``factor_length`` the depth pruning uses the largest cyclic
    submodule, found by enumeration, so nothing is shared with the echelon
    search.
    """
    if module.element_count > limit:
        raise ValueError(f"oracle is limited to modules with at most {limit} elements")
    elements = _elements(module)
    total = len(elements)
    zero = tuple(0 for _ in module.moduli)
    S0 = frozenset([zero]) if start is None else frozenset(start)
    if factor_length:
        step = module.p ** factor_length
    else:
        # |N + Rm| <= |N| * |Rm|, with |Rm| maximized by brute force
        step = max(len(_closure(module, frozenset([zero]), m)) for m in elements)

    def colon(S):
        return [m for m in elements
                if m not in S and all(module.apply(a, m) in S for a in module.seq_actions)]

    def dfs(S, rem):
        if len(S) == total:
            return True
        if rem == 0:
            return False
        if step is not None and len(S) * step ** rem < total:
            return False
        tried = []
        for m in colon(S):
            # S + Rm lies inside a child already refuted; quotients only get shorter
            if any(m in T for T in tried):
                continue
            T = _closure(module, S, m)
            if dfs(T, rem - 1):
                return True
            tried.append(T)
        return False

    depth = 0
    while not dfs(S0, depth):
        depth += 1
    return depth


def submodule_elements(module: FiniteGradedModule, generators) -> frozenset:
    S = frozenset([tuple(0 for _ in module.moduli)])
    for g in generators:
        S = _closure(module, S, tuple(int(x) for x in g))
    return S

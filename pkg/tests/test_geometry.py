import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pqa.errors import BudgetExceeded, DimensionMismatch, NotPointed
from pqa.geometry import (
    Budget,
    IntegerLattice,
    LinearSystem,
    PLocalScalar,
    RationalCone,
    express,
    feasible,
    find_functional,
    gordon_generators,
    group_closure,
    hnf,
    positive_grading,
    rank,
    rational_solve,
    solve,
    valuation,
)

small = st.integers(-4, 4)


def test_valuation_and_scalar_normal_form():
    assert valuation(24, 2) == 3
    s = PLocalScalar.of(2, Fraction(12, 5))
    assert s.valuation() == 2
    assert s.unit_part() == Fraction(3, 5)
    assert not s.is_unit() and s.unit_part().is_unit()
    assert PLocalScalar(3, 6, -4) == Fraction(-3, 2)


def test_scalar_rejects_p_in_denominator():
    with pytest.raises(ValueError):
        PLocalScalar.of(2, Fraction(1, 2))


def test_scalar_arithmetic_stays_local():
    a, b = PLocalScalar.of(3, Fraction(1, 2)), PLocalScalar.of(3, 5)
    assert (a + b) == Fraction(11, 2)
    assert (a * b).valuation() == 0
    assert (b - b).is_zero


def test_lattice_coordinates():
    L = IntegerLattice.spanned_by([(2, 0), (1, 3)])
    assert (3, 3) in L
    assert (1, 0) not in L
    assert L.saturating_multiple((1, 0)) == 2
    assert IntegerLattice.standard(3).rank == 3


def test_hnf_is_canonical_for_same_span():
    a = hnf([(2, 4), (0, 6)], 2)
    b = hnf([(2, 10), (2, 4), (4, 2)], 2)
    assert group_closure([(2, 4), (0, 6)]) == group_closure([(2, -2), (0, 6)])
    assert rank([(1, 2), (2, 4)]) == 1
    assert len(a) == 2 and len(b) == 2


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=4), st.tuples(small, small, small))
@settings(max_examples=60, deadline=None)
def test_express_reconstructs(vectors, coeffs):
    target = tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) for i in range(3))
    z = express(vectors, target)
    assert z is not None
    assert tuple(sum(c * v[i] for c, v in zip(z, vectors)) for i in range(3)) == target


def test_rational_solve():
    assert rational_solve([(1, 1), (1, -1)], (3, 1)) == [2, 1]
    assert rational_solve([(1, 1)], (1, 0)) is None


def test_fourier_motzkin_feasibility():
    s = LinearSystem(2)
    s.ineqs += [(-1, 0, 0), (0, -1, 0), (1, 1, 1)]
    assert feasible(s)
    x = solve(s)
    assert x[0] >= 0 and x[1] >= 0 and x[0] + x[1] <= 1
    s.ineqs.append((-1, -1, -2))
    assert not feasible(s)


def test_cone_membership_and_pointedness():
    C = RationalCone.of([(1, 0), (1, 3)])
    assert C.contains((2, 3)) and C.contains((1, 1))
    assert not C.contains((0, 1))
    assert C.pointed
    H = RationalCone.of([(1, 0), (-1, 0), (0, 1)])
    assert not H.pointed
    assert set(H.lineality_generators()) == {(1, 0), (-1, 0)}
    with pytest.raises(NotPointed):
        positive_grading(H)
    with pytest.raises(DimensionMismatch):
        C.contains((1, 2, 3))


def _carath_2d(gens, v):
    """v is a nonnegative combination of at most two of the generators."""
    if not any(v):
        return True
    for k in (1, 2):
        for sub in itertools.combinations(gens, k):
            sol = rational_solve(list(sub), v)
            if sol is not None and all(c >= 0 for c in sol):
                return True
    return False


@given(st.lists(st.tuples(st.integers(-2, 3), st.integers(0, 3)), min_size=1, max_size=3),
       st.tuples(small, small))
@settings(max_examples=80, deadline=None)
def test_cone_contains_matches_caratheodory(gens, v):
    gens = [g for g in gens if any(g)]
    if not gens:
        return
    assert RationalCone.of(gens, 2).contains(v) == _carath_2d(gens, v)


def test_find_functional():
    lam = find_functional(2, [(1, 0), (1, 3)])
    assert all(lam[0] * g[0] + lam[1] * g[1] >= 1 for g in [(1, 0), (1, 3)])
    assert find_functional(2, [(1, 0), (-1, 0)]) is None
    lam = find_functional(3, [(0, 0, 1)], [(1, 0, 0), (0, 1, 0)])
    assert lam[0] == lam[1] == 0 and lam[2] >= 1


def test_gordon_generators_of_standard_examples():
    C = RationalCone.of([(1, 0), (1, 3)])
    assert set(gordon_generators(C, IntegerLattice.standard(2))) == {(1, 0), (1, 1), (1, 2), (1, 3)}
    assert set(gordon_generators(C, group_closure([(1, 0), (1, 3)]))) == {(1, 0), (1, 3)}
    D = RationalCone.of([(2, -1), (0, 1)])
    assert set(gordon_generators(D, IntegerLattice.standard(2))) == {(0, 1), (1, 0), (2, -1)}


def test_gordon_budget():
    C = RationalCone.of([(1, 0), (1, 30)])
    with pytest.raises(BudgetExceeded):
        gordon_generators(C, IntegerLattice.standard(2), Budget(extent=5))

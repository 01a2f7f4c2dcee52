import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pqa.errors import NotPointed
from pqa.geometry import vsub
from pqa.pmonomial import AmbientRing, PMonomial, ideal_contains, radical
from pqa.pring import (
    PolynomialQuotient,
    PSemigroup,
    classify_components,
    component_kills,
    max_homogeneous_ideal,
    psg_contains,
    psg_in_fraction_field,
    psg_is_integral,
    ring_normalize,
)
from pqa.semigroup import AffineSemigroup, sg_saturate


def R_(*gens, p=2):
    return PSemigroup.of(p, list(gens))


def test_e0_is_always_a_generator():
    R = R_((2, 1))
    assert R.semigroup.generators == ((1, 0), (2, 1))
    assert R.describe() == "Z_(2)[p^2*x]"


def test_membership_examples():
    R = R_((2, 1))
    assert psg_contains(R, (3, 1))
    assert not psg_contains(R, (1, 1))
    assert psg_contains(R, (1, 0))


def test_integrality_examples():
    assert psg_is_integral(R_((2, 2)), (1, 1)) == (True, 2)
    assert psg_is_integral(R_((1, 1)), (0, 1)) == (False, None)
    assert psg_is_integral(R_((1, 1)), (2, 1)) == (True, 1)


def _check_fraction(R, v):
    ok, wit = psg_in_fraction_field(R, v)
    if ok:
        u, w = wit
        assert psg_contains(R, u.exps) and psg_contains(R, w.exps)
        assert vsub(u.exps, w.exps) == tuple(v)
    return ok


def test_fraction_field_examples():
    assert _check_fraction(R_((1, 1), (1, 2)), (0, 1))
    assert not _check_fraction(R_((0, 2)), (0, 1))
    assert _check_fraction(R_((0, 2)), (1, 0))


def test_normalization_examples():
    assert ring_normalize(R_((1, 1), (1, 3))).describe() == "Z_(2)[p*x, p*x^2, p*x^3]"
    S = ring_normalize(R_((0, 2), (0, 3)))
    assert S.ring_generators() == ((0, 1),)
    T = R_((0, 1))
    assert ring_normalize(T).semigroup.generators == T.semigroup.generators


def test_normalization_of_a_laurent_ring_records_the_localization():
    R = PSemigroup.of(3, [(0, 1, 0), (0, -1, 0), (0, 0, 2), (0, 1, 3)], ["x", "y"])
    S = ring_normalize(R)
    assert S.localization is not None
    assert "localization at" in S.describe()
    assert psg_contains(S, (0, 0, 1))  # y = (y^3 x) / x after saturation


gens2 = st.lists(st.tuples(st.integers(0, 2), st.integers(1, 3)), min_size=1, max_size=3)


@given(gens2)
@settings(max_examples=30, deadline=None)
def test_normalization_properties(gens):
    R = PSemigroup.of(2, gens)
    S = ring_normalize(R)
    assert all(psg_contains(S, g) for g in R.semigroup.generators)
    for g in S.semigroup.generators:
        ok, k = psg_is_integral(R, g)
        assert ok and psg_contains(R, tuple(k * x for x in g))
    assert ring_normalize(S).semigroup.generators == S.semigroup.generators
    # the monomial side: same exponent vectors with slot 0 read as x0
    lifted = AffineSemigroup.of(list(R.semigroup.generators))
    assert sg_saturate(lifted).generators == S.semigroup.generators


@given(gens2, st.tuples(st.integers(0, 4), st.integers(-2, 6)))
@settings(max_examples=40, deadline=None)
def test_membership_implies_integral_and_fraction(gens, v):
    R = PSemigroup.of(2, gens)
    if psg_contains(R, v):
        assert psg_is_integral(R, v) == (True, 1)
        assert _check_fraction(R, v)


def test_max_homogeneous_ideal_examples():
    assert max_homogeneous_ideal(R_((0, 1))).format() == "(p, x)"
    assert max_homogeneous_ideal(R_((1, 1))).format() == "(p, p*x)"
    m = max_homogeneous_ideal(R_((0, 2), (0, 3)))
    assert m.format() == "(p, x^2, x^3)"
    assert m.contains((0, 5)) and not m.contains((0, 0))


def test_max_homogeneous_ideal_needs_pointed():
    with pytest.raises(NotPointed):
        max_homogeneous_ideal(R_((0, 1), (0, -1)))


def _sr(p, n, gens, names):
    amb = AmbientRing(p, n, names=names)
    return PolynomialQuotient.of(amb, gens)


def test_classification_examples():
    rep = classify_components(_sr(2, 2, [(1, 1, 1)], ("x", "y")))
    assert [(c.prime, c.residue_ring, c.dimension) for c in rep.components] == [
        ((0,), "F_2[x,y]", 2), ((1,), "Z_(2)[y]", 2), ((2,), "Z_(2)[x]", 2)]
    rep = classify_components(_sr(2, 1, [(1, 1)], ("x",)))
    assert [(c.label, c.residue_ring, c.dimension) for c in rep.components] == [
        ("equal-char-p", "F_2[x]", 1), ("mixed", "Z_(2)", 1)]
    rep = classify_components(_sr(3, 1, [(0, 1)], ("x",)))
    assert [(c.residue_ring, c.dimension) for c in rep.components] == [("Z_(3)", 1)]


@pytest.mark.parametrize("gens", [[(1, 1, 1)], [(2, 1, 0), (0, 1, 1)], [(1, 2, 0), (0, 0, 3)], [(0, 1, 0)]])
def test_components_detect_radical_membership(gens):
    R = _sr(2, 2, gens, ("x", "y"))
    rep = classify_components(R)
    rad = radical(R.ideal)
    for e in itertools.product(range(3), repeat=3):
        w = PMonomial(2, e)
        assert ideal_contains(rad, w) == all(component_kills(c, w) for c in rep.components)

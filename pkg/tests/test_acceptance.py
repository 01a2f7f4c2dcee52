"""Acceptance criteria 1-9.

Run under pytest, or directly with ``python tests/test_acceptance.py`` to get
one PASS/FAIL line per criterion.
"""
import itertools
import json
import os
import random
import subprocess
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
if str(HERE) not in sys.path:
    sys.path.insert(0, str(HERE))

from pqa.cli import run_text
from pqa.errors import UnitIdeal
from pqa.pmonomial import (
    AmbientRing,
    PMonomial,
    PMonomialIdeal,
    ideal_contains,
    lift_ideal,
    minimal_primes,
    radical,
)
from pqa.pring import PolynomialQuotient, PSemigroup
from pqa.quasilength import (
    CONSISTENT,
    INCONCLUSIVE,
    INCONSISTENT,
    SequenceSpec,
    build_quotient_module,
    content_estimate,
    exact_quasilength,
    factor_length_bound,
    oracle_quasilength,
    verify_certificate,
    NotFinite,
)
from pqa.semigroup import AffineSemigroup, in_decomposition, sg_contains, sg_pointed_decomposition, sg_saturate
from pqa.toricface import (
    MonoidalComplex,
    minimal_representative,
    realization_check,
    tf_element,
    tf_multiply,
    validate_complex,
)

from instances import (
    random_nonpointed_semigroup,
    random_pmonomial_ideal,
    random_pointed_semigroup,
    oracle_suite,
)

SAMPLES = HERE.parent / "docs" / "samples"
ORACLE_LIMIT = 2 ** 14


def _timed(limit_s):
    def wrap(fn):
        def run():
            start = time.perf_counter()
            detail = fn()
            elapsed = time.perf_counter() - start
            assert elapsed < limit_s, f"took {elapsed:.1f}s, limit {limit_s}s"
            return f"{detail}; {elapsed:.1f}s"
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _ring(p, n, gens=(), e=None):
    return PolynomialQuotient.of(AmbientRing(p, n, names=("x", "y", "z")[:n], coefficient_exponent=e), gens)


def _exact(R, s):
    M = build_quotient_module(R, s)
    assert not isinstance(M, NotFinite), M.reason
    res = exact_quasilength(M, factor_length_bound(R, s, M))
    assert res.exact, f"not exact at t={s.t}: [{res.lower}, {res.upper}]"
    assert verify_certificate(M, res.certificate)
    return M, res.value


# problem files shared by the criteria and the determinism check

def _sr_file(p, vars_, gens, command, e=None):
    ring = {"kind": "p_stanley_reisner", "vars": vars_, "gens": gens}
    if e is not None:
        ring["coefficients"] = {"exponent": e}
    return json.dumps({"prime": p, "ring": ring, "command": command})


def criterion_files():
    files = {}
    for p in (2, 3):
        files[f"c1_p{p}"] = _sr_file(p, ["x"], [], {"op": "content", "sequence": [[1, 0], [0, 1]], "grid": 3})
    files["c2"] = (SAMPLES / "nilpotent_p.json").read_text()
    files["c3"] = _sr_file(2, ["x"], [[1, 1]], {"op": "content", "sequence": [[1, 0], [0, 1]], "grid": 4})
    for i, (raw, _, _) in enumerate(oracle_suite()):
        files[f"c4_{i:03d}"] = json.dumps(raw)
    rng, picks = random.Random(20261014), random.Random(5)
    for i in range(50):
        n, gens = random_pmonomial_ideal(rng)
        names = ["x", "y", "z"][:n]
        for op in ("membership", "radical", "min-primes"):
            cmd = {"op": op}
            if op == "membership":
                cmd["elements"] = [[picks.randint(0, 6) for _ in range(n + 1)] for _ in range(4)]
            files[f"c5_{i:02d}_{op}"] = _sr_file(2, names, gens, cmd)
    files["c6_example"] = json.dumps({"prime": 2, "ring": {"kind": "affine_semigroup", "gens": [[1, 0], [1, 3]]},
                                      "command": {"op": "normalize", "lattice": "ambient"}})
    rng = random.Random(6)
    for i in range(20):
        files[f"c6_sat_{i:02d}"] = json.dumps({"prime": 2, "ring": {"kind": "affine_semigroup",
                                                                      "gens": random_pointed_semigroup(rng)},
                                                "command": {"op": "normalize"}})
    rng = random.Random(7)
    for i in range(20):
        gens = random_nonpointed_semigroup(rng)
        cmd = {"op": "pointed-decomp"}
        if i % 2:
            cmd["b"] = list(gens[-1])
        files[f"c6_dec_{i:02d}"] = json.dumps({"prime": 2, "ring": {"kind": "affine_semigroup", "gens": gens},
                                               "command": cmd})
    toric = (SAMPLES / "toric_example.json").read_text()
    for op in ("toric-validate", "toric-realize"):
        files[f"c7_{op}"] = json.dumps(dict(json.loads(toric), command={"op": op}))
    files["c7_multiply"] = (SAMPLES / "toric_multiply.json").read_text()
    files["c8"] = (SAMPLES / "pinched_veronese.json").read_text()
    return files


@_timed(60)
def criterion_1():
    """Regular sequence (p, x) on Z_(p)[x]: quasilength t1*t2."""
    n = 0
    for p in (2, 3):
        R = _ring(p, 1)
        for t in itertools.product((1, 2, 3), repeat=2):
            _, v = _exact(R, SequenceSpec.of([(1, 0), (0, 1)], t))
            assert v == t[0] * t[1], f"p={p} t={t}: {v}"
            n += 1
    return f"{n} points exact"


@_timed(10)
def criterion_2():
    """Z/p^2[x] with the sequence (x): quasilength t, content table all 1."""
    R = _ring(2, 1, e=2)
    s = SequenceSpec.of([(0, 1)], (1,))
    for t in range(1, 6):
        _, v = _exact(R, s.with_t((t,)))
        assert v == t, f"t={t}: {v}"
    est = content_estimate(R, s, 5)
    assert [p.normalized for p in est.points] == ["1"] * 5
    assert est.verdict == CONSISTENT, est.verdict
    return "t=1..5 exact, verdict consistent"


@_timed(60)
def criterion_3():
    """Z_(p)[x]/(px), sequence (p, x): t1+t2-1, normalized 5/9 at (3,3), inconsistent."""
    R = _ring(2, 1, [(1, 1)])
    s = SequenceSpec.of([(1, 0), (0, 1)], (1, 1))
    for t in itertools.product(range(1, 5), repeat=2):
        M, v = _exact(R, s.with_t(t))
        assert v == t[0] + t[1] - 1, f"t={t}: {v}"
        assert oracle_quasilength(M, limit=ORACLE_LIMIT) == v, f"oracle disagrees at t={t}"
    est = content_estimate(R, s, 4)
    at33 = next(p for p in est.points if p.t == (3, 3))
    assert at33.exact and at33.normalized_upper == Fraction(5, 9)
    assert est.verdict == INCONSISTENT, est.verdict
    return "16 points match the oracle, verdict inconsistent"


@_timed(600)
def criterion_4():
    """exact_quasilength agrees with the brute-force oracle on 100 random modules."""
    problems = oracle_suite()
    kinds = {"p_stanley_reisner": 0, "p_semigroup": 0}
    for raw, prob, M in problems:
        assert M.element_count <= 512
        s = SequenceSpec.of(prob.command["sequence"], prob.command["t"])
        res = exact_quasilength(M, factor_length_bound(prob.ring, s, M))
        assert res.exact, raw
        assert res.value == oracle_quasilength(M), raw
        kinds[prob.ring_kind] += 1
    assert all(kinds.values()), kinds
    return f"{len(problems)} modules ({kinds['p_stanley_reisner']} SR, {kinds['p_semigroup']} semigroup) agree"


def _lifted_member(lifted, e):
    return any(all(a <= b for a, b in zip(m.exps, e)) for m in lifted)


def _brute_minimal_primes(I):
    n1 = I.ambient.width
    supports = [{i for i, x in enumerate(g.exps) if x} for g in I.generators]
    hits = [frozenset(S) for k in range(n1 + 1) for S in itertools.combinations(range(n1), k)
            if all(sup & set(S) for sup in supports)]
    return sorted((tuple(sorted(S)) for S in hits if not any(T < S for T in hits)), key=lambda S: (len(S), S))


@_timed(60)
def criterion_5():
    """Divisibility membership, minimal primes and radicals on 50 random ideals."""
    rng = random.Random(20261014)
    units = 0
    for _ in range(50):
        n, gens = random_pmonomial_ideal(rng)
        amb = AmbientRing(2, n)
        I = PMonomialIdeal.of(amb, [PMonomial(2, g) for g in gens])
        lifted = lift_ideal(I)
        for e in itertools.product(range(7), repeat=n + 1):
            assert ideal_contains(I, PMonomial(2, e)) == _lifted_member(lifted, e), (gens, e)
        brute = _brute_minimal_primes(I)
        if not brute:
            units += 1
            with pytest.raises(UnitIdeal):
                minimal_primes(I)
        else:
            assert sorted(minimal_primes(I), key=lambda S: (len(S), S)) == brute, gens
        rad = radical(I)
        assert radical(rad) == rad
        assert all(ideal_contains(rad, g) for g in I.generators)
        for g in rad.generators:
            k = max(max(h) for h in gens) or 1
            assert ideal_contains(I, g ** k), (gens, g)
    return f"50 ideals on [0,6]^(n+1) ({units} unit ideals)"


@_timed(120)
def criterion_6():
    """Saturation example and idempotence; pointed decompositions with b honored."""
    ex = sg_saturate(AffineSemigroup.of([(1, 0), (1, 3)]), lattice="ambient")
    assert ex.generators == ((1, 0), (1, 1), (1, 2), (1, 3)), ex.generators
    rng = random.Random(6)
    non_normal = 0
    for _ in range(20):
        M = AffineSemigroup.of(random_pointed_semigroup(rng))
        S = sg_saturate(M)
        assert sg_saturate(S).generators == S.generators
        assert all(sg_contains(S, g) for g in M.generators)
        non_normal += S.generators != M.generators
    rng = random.Random(7)
    forced = 0
    for i in range(20):
        gens = random_nonpointed_semigroup(rng)
        M = AffineSemigroup.of(gens)
        assert not M.pointed
        b = tuple(gens[-1]) if i % 2 else None
        d = sg_pointed_decomposition(M, b)
        assert d.N.pointed and sg_contains(d.N, d.u)
        assert all(sg_contains(M, g) for g in d.N.generators)
        if b is not None:
            assert sg_contains(d.N, b)
            forced += 1
        assert all(in_decomposition(d, v, max_shift=d.max_shift) for v in M.window(2))
    return f"example ok; 20 idempotent ({non_normal} non-normal); 20 decompositions ({forced} with b)"


@_timed(10)
def criterion_7():
    """Golden toric face example."""
    C = MonoidalComplex.of(2, {"tau1": [(1, 0, 0), (2, 3, 0), (2, 2, 2)],
                               "tau2": [(1, 0, 0), (2, 2, 2), (0, 0, 3)],
                               "rho": [(1, 0, 0), (2, 2, 2)]},
                           [("rho", "tau1"), ("rho", "tau2")], p_variant=True, names=("x", "y"))
    rep = validate_complex(C)
    assert rep.valid, rep.violations
    assert minimal_representative(C.semigroup("tau1"), (3, 3, 0)) == (2, 3, 0)
    assert minimal_representative(C.semigroup("tau1"), (2, 2, 2)) == (2, 2, 2)
    one = lambda e: tf_element(C, {e: 1})  # noqa: E731
    assert tf_multiply(one((2, 3, 0)), one((0, 0, 3))).is_zero
    assert tf_multiply(one((2, 2, 2)), one((0, 0, 3))).format() == "p^2*x^2*y^5"
    res = realization_check(C)
    assert res.realized
    assert dict(res.witnesses) == {"tau1": (2, 3, 0), "tau2": (0, 0, 3)}
    return "valid, products and witnesses match"


@_timed(900)
def criterion_8():
    """Pinched Veronese p-analogue on the grid {1,2}^3."""
    R = PSemigroup.of(2, [(0, 4, 0), (0, 3, 1), (0, 1, 3), (0, 0, 4)], ["x", "y"])
    s = SequenceSpec.of([(1, 0, 0), (0, 4, 0), (0, 0, 4)], (1, 1, 1))
    est = content_estimate(R, s, 2)
    checked = 0
    for pt in est.points:
        assert pt.finite, pt.t
        assert pt.lower <= pt.upper and pt.certified, pt
        M = build_quotient_module(R, s.with_t(pt.t))
        if pt.exact and M.element_count <= ORACLE_LIMIT:
            assert oracle_quasilength(M, limit=ORACLE_LIMIT) == pt.lower, pt.t
            checked += 1
    assert est.verdict in (CONSISTENT, INCONSISTENT, INCONCLUSIVE)
    report = run_text((SAMPLES / "pinched_veronese.json").read_text())
    assert f"**Verdict:** {est.verdict}" in report
    exact = sum(p.exact for p in est.points)
    return f"8 finite points, {exact} exact, {checked} oracle-checked, verdict {est.verdict}"


_BATCH = """
import json, sys
from pqa.cli import run_text
files = json.load(open(sys.argv[1]))
for name in sorted(files):
    sys.stdout.write("=== " + name + "\\n" + run_text(files[name]))
"""


def _batch(path, threads):
    env = dict(os.environ, PQA_THREADS=str(threads))
    out = subprocess.run([sys.executable, "-c", _BATCH, path], env=env, capture_output=True, check=True)
    return out.stdout


@_timed(1800)
def criterion_9():
    """Reports for criteria 1-8 are byte-identical under PQA_THREADS=1 and 4."""
    files = criterion_files()
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "files.json")
        with open(path, "w") as fh:
            json.dump(files, fh)
        one, four = _batch(path, 1), _batch(path, 4)
        assert one == four, "reports differ between thread counts"
        sample = os.path.join(d, "c3.json")
        with open(sample, "w") as fh:
            fh.write(files["c3"])
        cli = [subprocess.run(["pqa", "run", "-i", sample], capture_output=True, check=True,
                              env=dict(os.environ, PQA_THREADS=str(th))).stdout for th in (1, 4)]
        assert cli[0] == cli[1]
    return f"{len(files)} reports, {len(one)} bytes identical"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    print(criterion())


def main():
    failed = 0
    for c in CRITERIA:
        label = c.__name__.replace("_", " ")
        try:
            detail = c()
            print(f"PASS {label}: {detail}", flush=True)
        except Exception as e:  # report and keep going
            failed += 1
            print(f"FAIL {label}: {type(e).__name__}: {e}", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

"""Monoidal complexes and (p-)toric face ring arithmetic.

A complex is a family of named affine semigroups M_sigma in Z^{n+1} with a
declared face relation.  Elements are finite sums of exponent terms with
Z_(p) (or F_p) coefficients; in the p-variant slot 0 is a power of p and every
stored exponent is the minimal representative of its class modulo Z*e0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DimensionMismatch
from .geometry import (
    DEFAULT_BUDGET,
    Budget,
    PLocalScalar,
    RationalCone,
    find_functional,
    vadd,
    vec,
    vsub,
)
from .semigroup import AffineSemigroup, sg_contains


@dataclass(frozen=True)
class MonoidalComplex:
    p: int
    semigroups: tuple  # ((name, AffineSemigroup), ...) in declaration order
    faces: tuple = ()  # ((sigma, tau), ...): sigma is a face of tau
    maximal: tuple = ()
    p_variant: bool = False
    rays: tuple = ()  # optional ((name, RationalCone), ...) declaring the cone separately
    names: tuple = ()
    residue_field: bool = False  # F_p coefficients instead of Z_(p)

    @classmethod
    def of(cls, p, semigroups: dict, faces=(), maximal=None, p_variant=False, rays=None,
           names=None, residue_field=False) -> "MonoidalComplex":
        if not semigroups:
            raise ValueError("a monoidal complex needs at least one cone")
        sgs = []
        dim = None
        for name, gens in semigroups.items():
            M = gens if isinstance(gens, AffineSemigroup) else AffineSemigroup.of(gens, dim)
            if dim is None:
                dim = M.dim
            elif M.dim != dim:
                raise DimensionMismatch(f"cone {name!r} lives in dimension {M.dim}, expected {dim}")
            sgs.append((name, M))
        known = {n for n, _ in sgs}
        faces = tuple((s, t) for s, t in faces)
        for s, t in faces:
            if s not in known or t not in known:
                raise ValueError(f"face relation ({s!r}, {t!r}) names an unknown cone")
        if maximal is None:
            below = {s for s, t in faces if s != t}
            maximal = tuple(n for n, _ in sgs if n not in below)
        for m in maximal:
            if m not in known:
                raise ValueError(f"maximal cone {m!r} is unknown")
        ray_items = tuple((n, RationalCone.of(r, dim)) for n, r in (rays or {}).items())
        if names is None:
            names = ("x", "y", "z", "w")[: dim - 1] if dim <= 5 else tuple(f"x{i}" for i in range(1, dim))
        return cls(p, tuple(sgs), faces, tuple(maximal), p_variant, ray_items, tuple(names), residue_field)

    @property
    def dim(self):
        return self.semigroups[0][1].dim

    @property
    def e0(self):
        return (1,) + (0,) * (self.dim - 1)

    def semigroup(self, name) -> AffineSemigroup:
        for n, M in self.semigroups:
            if n == name:
                return M
        raise KeyError(name)

    def cone(self, name) -> RationalCone:
        for n, C in self.rays:
            if n == name:
                return C
        return self.semigroup(name).cone

    def maximal_semigroups(self):
        return [(n, self.semigroup(n)) for n in self.maximal]

    def cones_containing(self, exps, budget: Budget = DEFAULT_BUDGET) -> tuple:
        return tuple(n for n, M in self.maximal_semigroups() if sg_contains(M, exps, budget))

    def window(self, depth=3) -> tuple:
        pts = set()
        for _, M in self.maximal_semigroups():
            pts.update(M.window(depth))
        return tuple(sorted(pts, key=_grade_key))


def _grade_key(v):
    return (sum(v), v)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    cones: tuple
    witness: Optional[tuple]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple
    window: int
    checks: tuple = ()


def _is_face(c: MonoidalComplex, sigma, tau):
    """Supporting functional exhibiting sigma as a face of tau, or None."""
    S, T = c.cone(sigma), c.cone(tau)
    inside = [g for g in T.generators if S.contains(g)]
    outside = [g for g in T.generators if not S.contains(g)]
    if not all(T.contains(g) for g in S.generators):
        return None
    lam = find_functional(c.dim, outside, inside)
    if lam is None:
        return None
    # tau cut by the hyperplane must be exactly sigma
    hyper = RationalCone.of(inside, c.dim) if inside else None
    for g in S.generators:
        if hyper is None or not hyper.contains(g):
            return None
    return lam


def validate_complex(c: MonoidalComplex, window: int = 3, budget: Budget = DEFAULT_BUDGET) -> ValidationReport:
    out = []
    checks = []

    def bad(kind, cones, witness, msg):
        out.append(Violation(kind, tuple(cones), witness, msg))

    checks.append("pointed cones")
    for name, M in c.semigroups:
        if not M.pointed:
            lin = M.cone.lineality_generators()
            bad("not-pointed", [name], lin[0] if lin else None, f"cone {name} contains a line")

    checks.append("semigroup spans its declared cone")
    for name, C in c.rays:
        M = c.semigroup(name)
        for g in M.generators:
            if not C.contains(g):
                bad("outside-cone", [name], g, f"generator of M_{name} lies outside the declared cone")
        for r in C.generators:
            if not M.cone.contains(r):
                bad("cone-not-spanned", [name], r, f"ray of {name} is not in the cone of M_{name}")

    checks.append("declared faces are faces")
    for s, t in c.faces:
        if _is_face(c, s, t) is None:
            bad("not-a-face", [s, t], None, f"{s} is not a face of {t}")

    checks.append(f"M_sigma = sigma ∩ M_tau on sums of <= {window} generators")
    for s, t in c.faces:
        Ms, Mt = c.semigroup(s), c.semigroup(t)
        S = c.cone(s)
        for g in Ms.generators:
            if not sg_contains(Mt, g, budget):
                bad("face-not-contained", [s, t], g, f"generator of M_{s} is not in M_{t}")
        for v in Mt.window(window):
            if S.contains(v) and not sg_contains(Ms, v, budget):
                bad("face-misses-point", [s, t], v, f"point of sigma ∩ M_{t} is missing from M_{s}")

    if c.p_variant:
        checks.append("e0 in every maximal semigroup")
        for name, M in c.maximal_semigroups():
            if not sg_contains(M, c.e0, budget):
                bad("missing-e0", [name], c.e0, f"e0 is not in M_{name}")

    checks.append("maximal cones meet along declared common faces")
    face_of = {}
    for s, t in c.faces:
        face_of.setdefault(s, set()).add(t)
    for i, (a, Ma) in enumerate(c.maximal_semigroups()):
        for b, Mb in c.maximal_semigroups()[i + 1:]:
            common = [s for s, ts in face_of.items() if a in ts and b in ts]
            Cb = c.cone(b)
            for v in Ma.window(window):
                if not any(v) or not Cb.contains(v):
                    continue
                if not sg_contains(Mb, v, budget):
                    bad("incompatible-overlap", [a, b], v, f"point of M_{a} in cone {b} is not in M_{b}")
                elif not any(c.cone(s).contains(v) for s in common):
                    bad("overlap-without-face", [a, b], v,
                        f"M_{a} and M_{b} overlap outside any declared common face")
    return ValidationReport(not out, tuple(out), window, tuple(checks))


# ---------------------------------------------------------------------------
# minimal representatives


def minimal_representative(M: AffineSemigroup, b, budget: Budget = DEFAULT_BUDGET) -> tuple:
    """Element of M with least e0-coordinate in b + Z*e0."""
    b = vec(b)
    if len(b) != M.dim:
        raise DimensionMismatch("vector has the wrong length")
    e0 = (1,) + (0,) * (M.dim - 1)
    if not sg_contains(M, e0, budget):
        raise ValueError("e0 is not in the semigroup")
    if not M.pointed:
        raise ValueError("minimal representatives need a pointed semigroup")
    if not sg_contains(M, b, budget):
        raise ValueError(f"{b} is not in the semigroup")
    a = b
    while True:
        nxt = vsub(a, e0)
        if not sg_contains(M, nxt, budget):
            return a
        a = nxt


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class ToricFaceElement:
    complex: MonoidalComplex
    terms: tuple  # ((exps, PLocalScalar), ...) sorted by exponent, no zero coefficients

    def __add__(self, other):
        _same(self, other)
        return _collect(self.complex, list(self.terms) + list(other.terms))

    def __neg__(self):
        return ToricFaceElement(self.complex, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ToricFaceElement):
            return tf_multiply(self, other)
        s = _coef(self.complex, other)
        return _collect(self.complex, [(e, c * s) for e, c in self.terms])

    __rmul__ = __mul__

    @property
    def is_zero(self):
        return not self.terms

    def support(self):
        return tuple(e for e, _ in self.terms)

    def format(self):
        if not self.terms:
            return "0"
        base = "p" if self.complex.p_variant else "x0"
        parts = []
        for e, c in sorted(self.terms, key=lambda t: _grade_key(t[0])):
            mono = _format_mono(e, self.complex.names, base)
            if c == 1:
                parts.append(mono)
            elif mono == "1":
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __str__(self):
        return self.format()


def _format_mono(e, names, base):
    out = []
    for sym, k in zip((base,) + tuple(names), e):
        if k:
            out.append(sym if k == 1 else f"{sym}^{k}")
    return "*".join(out) or "1"


def _same(f, g):
    if f.complex != g.complex:
        raise ValueError("elements live over different complexes")


def _coef(c: MonoidalComplex, x) -> PLocalScalar:
    s = x if isinstance(x, PLocalScalar) else PLocalScalar.of(c.p, x)
    if c.residue_field:
        r = s.numerator * pow(s.denominator, -1, c.p) % c.p
        s = PLocalScalar(c.p, r, 1)
    return s


def _normal(c: MonoidalComplex, exps, coeff, budget):
    """Rewrite one term into normal form; returns (exps, coeff) or None if zero."""
    coeff = _coef(c, coeff)
    if coeff.is_zero:
        return None
    cones = c.cones_containing(exps, budget)
    if not cones:
        raise ValueError(f"exponent {exps} lies in no maximal semigroup of the complex")
    if not c.p_variant:
        return exps, coeff
    r = minimal_representative(c.semigroup(cones[0]), exps, budget)
    shift = exps[0] - r[0]
    if shift:
        coeff = _coef(c, coeff * PLocalScalar(c.p, c.p ** shift, 1))
        if coeff.is_zero:
            return None
    return r, coeff


def _collect(c: MonoidalComplex, terms, budget: Budget = DEFAULT_BUDGET) -> ToricFaceElement:
    acc = {}
    for e, k in terms:
        nt = _normal(c, vec(e), k, budget)
        if nt is None:
            continue
        e, k = nt
        acc[e] = acc[e] + k if e in acc else k
    return ToricFaceElement(c, tuple(sorted((e, _coef(c, k)) for e, k in acc.items() if not _coef(c, k).is_zero)))


def tf_element(c: MonoidalComplex, terms, budget: Budget = DEFAULT_BUDGET) -> ToricFaceElement:
    """Build an element from {exps: coefficient} or [(exps, coefficient)]."""
    items = terms.items() if isinstance(terms, dict) else terms
    return _collect(c, [(vec(e), k) for e, k in items], budget)


def tf_one(c: MonoidalComplex) -> ToricFaceElement:
    return tf_element(c, {(0,) * c.dim: 1})


def tf_multiply(f: ToricFaceElement, g: ToricFaceElement, budget: Budget = DEFAULT_BUDGET) -> ToricFaceElement:
    """Termwise product; a pair of terms multiplies to zero unless one maximal semigroup holds both."""
    _same(f, g)
    c = f.complex
    out = []
    for a, ca in f.terms:
        ta = set(c.cones_containing(a, budget))
        for b, cb in g.terms:
            if ta & set(c.cones_containing(b, budget)):
                out.append((vadd(a, b), ca * cb))
    return _collect(c, out, budget)


def tf_project(c: MonoidalComplex, tau, f: ToricFaceElement, budget: Budget = DEFAULT_BUDGET) -> ToricFaceElement:
    """Drop every term whose exponent is outside M_tau."""
    if tau not in c.maximal:
        raise ValueError(f"{tau!r} is not a maximal cone")
    M = c.semigroup(tau)
    return ToricFaceElement(c, tuple((e, k) for e, k in f.terms if sg_contains(M, e, budget)))


@dataclass(frozen=True)
class RealizationResult:
    realized: bool
    covered: bool
    uncovered: tuple
    witnesses: tuple  # ((tau, exps or None), ...)
    window: int


def realization_check(c: MonoidalComplex, window: int = 3, budget: Budget = DEFAULT_BUDGET) -> RealizationResult:
    """Check on a window that the projections to the maximal semigroups realize the ring.

    Coverage: every window exponent survives some projection, so an element
    killed by all of them is zero.  Irredundancy: each maximal cone has a
    window exponent surviving only its own projection.
    """
    pts = c.window(window)
    if c.p_variant:
        pts = sorted({_normal(c, v, 1, budget)[0] for v in pts}, key=_grade_key)
    homes = {v: c.cones_containing(v, budget) for v in pts}
    uncovered = tuple(v for v in pts if not homes[v])
    witnesses = []
    for tau in c.maximal:
        w = next((v for v in pts if homes[v] == (tau,)), None)
        witnesses.append((tau, w))
    ok = not uncovered and all(w is not None for _, w in witnesses)
    return RealizationResult(ok, not uncovered, uncovered, tuple(witnesses), window)


def lifted_complex(c: MonoidalComplex) -> MonoidalComplex:
    """The same complex read with slot 0 as the variable x0 (plain variant)."""
    return MonoidalComplex(c.p, c.semigroups, c.faces, c.maximal, False, c.rays, c.names, c.residue_field)


def p_complex(c: MonoidalComplex) -> MonoidalComplex:
    return MonoidalComplex(c.p, c.semigroups, c.faces, c.maximal, True, c.rays, c.names, c.residue_field)


def tf_evaluate_phi(f: ToricFaceElement, budget: Budget = DEFAULT_BUDGET) -> ToricFaceElement:
    """Substitute x0 -> p, landing in the p-toric face ring of the same complex."""
    if f.complex.p_variant:
        raise ValueError("input must be an element of the lifted (x0) ring")
    target = p_complex(f.complex)
    for name, M in target.maximal_semigroups():
        if not sg_contains(M, target.e0, budget):
            raise ValueError(f"e0 is not in M_{name}; evaluation needs it in every maximal semigroup")
    return _collect(target, list(f.terms), budget)


def x0_minus_p(c: MonoidalComplex) -> ToricFaceElement:
    """The element x0 - p of the lifted ring."""
    lc = lifted_complex(c)
    return tf_element(lc, {lc.e0: 1, (0,) * lc.dim: -c.p})

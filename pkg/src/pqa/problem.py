"""Problem files: JSON parsing and validation into library objects."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Optional

from .geometry import DEFAULT_BUDGET, Budget
from .pmonomial import AmbientRing, MAX_VARS
from .pring import PolynomialQuotient, PSemigroup
from .semigroup import AffineSemigroup
from .toricface import MonoidalComplex

RING_KINDS = ("p_stanley_reisner", "p_semigroup", "affine_semigroup", "toric_face")
OPS = ("min-primes", "membership", "radical", "normalize", "pointed-decomp", "max-ideal", "classify",
       "toric-validate", "toric-multiply", "toric-realize", "quasilength", "content", "qseq-report")
BUDGET_FIELDS = ("depth", "extent", "points", "nodes", "states", "element_cap", "window")


class SchemaError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class ProblemFile:
    prime: int
    ring_kind: str
    ring: Any  # PolynomialQuotient, PSemigroup, AffineSemigroup or MonoidalComplex
    names: tuple
    command: dict
    op: str
    budget: Budget
    raw: dict = field(default_factory=dict)


def _line_of(text, needle) -> Optional[int]:
    """Line of the first occurrence of a quoted key; approximate by design."""
    m = re.search(r'"%s"\s*:' % re.escape(needle), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


class _Collector:
    def __init__(self, text):
        self.text = text
        self.errors = []

    def add(self, msg, key=None):
        line = _line_of(self.text, key) if key else None
        self.errors.append(f"line {line}: {msg}" if line else msg)


def _int(x, what, col: _Collector, key=None):
    if isinstance(x, bool):
        col.add(f"{what} must be an integer", key)
        return None
    if isinstance(x, int):
        return x
    if isinstance(x, str) and re.fullmatch(r"-?\d+", x.strip()):
        return int(x)
    col.add(f"{what} must be an integer or a decimal string", key)
    return None


def _vector(x, width, what, col, key):
    if not isinstance(x, list):
        col.add(f"{what} must be an array", key)
        return None
    vals = [_int(v, what, col, key) for v in x]
    if any(v is None for v in vals):
        return None
    if width is not None and len(vals) != width:
        col.add(f"{what} has length {len(vals)}, expected {width}", key)
        return None
    return tuple(vals)


def _vectors(x, width, what, col, key):
    if not isinstance(x, list):
        col.add(f"{what} must be an array of arrays", key)
        return []
    out = []
    for i, g in enumerate(x):
        v = _vector(g, width, f"{what} {i}", col, key)
        if v is not None:
            out.append(v)
    return out


def parse_problem(text: str, op_override: Optional[str] = None) -> ProblemFile:
    """Validate ``text`` and build the ring objects; raises SchemaError listing every problem."""
    col = _Collector(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError([f"line {e.lineno}: invalid JSON: {e.msg}"]) from None
    if not isinstance(data, dict):
        raise SchemaError(["top level must be an object"])

    prime = None
    if "prime" not in data:
        col.add("prime required")
    else:
        prime = _int(data["prime"], "prime", col, "prime")
        if prime is not None and (prime < 2 or any(prime % d == 0 for d in range(2, int(prime ** 0.5) + 1))):
            col.add(f"prime must be a prime number >= 2, got {prime}", "prime")
            prime = None

    ring = data.get("ring")
    if not isinstance(ring, dict):
        col.add("ring required (an object with kind, vars and gens)", "ring")
        ring = {}
    kind = ring.get("kind")
    if kind not in RING_KINDS:
        col.add(f"ring.kind must be one of {', '.join(RING_KINDS)}", "kind")
    names = ring.get("vars", [])
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        col.add("ring.vars must be an array of variable names", "vars")
        names = []
    if len(names) > MAX_VARS:
        col.add(f"at most {MAX_VARS} variables are supported", "vars")
    width = len(names) + 1 if names or kind != "affine_semigroup" else None
    laurent = ring.get("laurent", [False] * len(names))
    if not isinstance(laurent, list) or len(laurent) != len(names) or not all(isinstance(b, bool) for b in laurent):
        col.add("ring.laurent must be an array of booleans, one per variable", "laurent")
        laurent = [False] * len(names)
    coef = ring.get("coefficients")
    coef_e = None
    if coef is not None:
        if not isinstance(coef, dict) or "exponent" not in coef:
            col.add('ring.coefficients must look like {"exponent": e} for Z/p^e', "coefficients")
        else:
            coef_e = _int(coef["exponent"], "coefficient exponent", col, "coefficients")
            if coef_e is not None and coef_e < 1:
                col.add("coefficient exponent must be at least 1", "coefficients")
                coef_e = None
    gens = _vectors(ring.get("gens", []), width, "generator", col, "gens")

    command = data.get("command")
    if not isinstance(command, dict):
        col.add("command required (an object with op)", "command")
        command = {}
    op = op_override or command.get("op")
    if op not in OPS:
        col.add(f"command.op must be one of {', '.join(OPS)}", "op")

    budget = DEFAULT_BUDGET
    braw = command.get("budget", {})
    if not isinstance(braw, dict):
        col.add("command.budget must be an object", "budget")
    else:
        kw = {}
        for k, v in braw.items():
            if k not in BUDGET_FIELDS:
                col.add(f"unknown budget field {k!r}", "budget")
                continue
            iv = _int(v, f"budget.{k}", col, "budget")
            if iv is not None and iv < 1:
                col.add(f"budget.{k} must be positive", "budget")
            elif iv is not None:
                kw[k] = iv
        budget = budget.replace(**kw)
    if "window" in command:
        w = _int(command["window"], "command.window", col, "window")
        if w is not None:
            budget = budget.replace(window=w)

    cmd = _parse_command(command, op, width, col)
    if col.errors:
        raise SchemaError(col.errors)

    try:
        obj = _build_ring(prime, kind, names, laurent, coef_e, gens, data.get("complex"), col)
    except ValueError as e:
        raise SchemaError([str(e)]) from None
    if col.errors:
        raise SchemaError(col.errors)
    return ProblemFile(prime, kind, obj, tuple(names), cmd, op, budget, data)


def _parse_command(command, op, width, col):
    cmd = {"op": op}
    if "sequence" in command:
        cmd["sequence"] = _vectors(command["sequence"], width, "sequence entry", col, "sequence")
    if "t" in command:
        v = _vector(command["t"], None, "t", col, "t")
        if v is not None:
            cmd["t"] = v
    if "grid" in command:
        g = command["grid"]
        if isinstance(g, (int, str)) and not isinstance(g, bool):
            cmd["grid"] = _int(g, "grid", col, "grid")
        elif isinstance(g, list):
            cmd["grid"] = [((_int(x, "grid point", col, "grid"),) if not isinstance(x, list)
                            else _vector(x, None, "grid point", col, "grid")) for x in g]
        else:
            col.add("grid must be an integer or an array of t-tuples", "grid")
    if "elements" in command:
        cmd["elements"] = _vectors(command["elements"], width, "element", col, "elements")
    if "b" in command:
        cmd["b"] = _vector(command["b"], width, "b", col, "b")
    if "factors" in command:
        fs = command["factors"]
        if not isinstance(fs, list):
            col.add("factors must be an array of elements", "factors")
        else:
            cmd["factors"] = [_terms(f, width, col) for f in fs]
    if "lattice" in command:
        if command["lattice"] not in ("group", "ambient"):
            col.add('lattice must be "group" or "ambient"', "lattice")
        else:
            cmd["lattice"] = command["lattice"]
    if op in ("quasilength",) and ("sequence" not in command or "t" not in command):
        col.add(f"{op} needs command.sequence and command.t", "command")
    if op in ("content", "qseq-report") and ("sequence" not in command or "grid" not in command):
        col.add(f"{op} needs command.sequence and command.grid", "command")
    if op == "membership" and "elements" not in command:
        col.add("membership needs command.elements", "command")
    if op == "toric-multiply" and "factors" not in command:
        col.add("toric-multiply needs command.factors", "command")
    return cmd


def _terms(x, width, col):
    """An element is an array of [exponents, coefficient] pairs."""
    if not isinstance(x, list):
        col.add("a toric element must be an array of [exponents, coefficient] pairs", "factors")
        return []
    out = []
    for term in x:
        if not (isinstance(term, list) and len(term) == 2):
            col.add("each term must be [exponents, coefficient]", "factors")
            continue
        e = _vector(term[0], width, "term exponent", col, "factors")
        c = _coefficient(term[1], col)
        if e is not None and c is not None:
            out.append((e, c))
    return out


def _coefficient(x, col):
    from fractions import Fraction
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            pass
    col.add(f"coefficient {x!r} must be an integer or a fraction string like \"3/5\"", "factors")
    return None


def _build_ring(prime, kind, names, laurent, coef_e, gens, complex_raw, col):
    n = len(names)
    if kind == "p_stanley_reisner":
        amb = AmbientRing(prime, n, tuple(laurent), tuple(names), coef_e)
        return PolynomialQuotient.of(amb, gens)
    if kind == "p_semigroup":
        if any(laurent):
            col.add("Laurent flags are not used for p_semigroup rings; give negative exponents instead", "laurent")
        return PSemigroup.of(prime, gens, names, coef_e)
    if kind == "affine_semigroup":
        if not gens:
            col.add("affine_semigroup needs at least one generator", "gens")
            return None
        return AffineSemigroup.of(gens)
    # toric_face
    if not isinstance(complex_raw, dict):
        col.add("toric_face rings need a complex section", "complex")
        return None
    cones = complex_raw.get("cones")
    if not isinstance(cones, dict) or not cones:
        col.add("complex.cones must map cone names to generator arrays", "cones")
        return None
    sgs = {}
    for name, g in cones.items():
        sgs[name] = _vectors(g, n + 1, f"generator of cone {name}", col, "cones")
    faces = complex_raw.get("faces", [])
    if not isinstance(faces, list) or not all(isinstance(f, list) and len(f) == 2 for f in faces):
        col.add("complex.faces must be an array of [face, cone] pairs", "faces")
        faces = []
    maximal = complex_raw.get("maximal")
    if maximal is not None and not (isinstance(maximal, list) and all(isinstance(m, str) for m in maximal)):
        col.add("complex.maximal must be an array of cone names", "maximal")
        maximal = None
    rays = complex_raw.get("rays")
    ray_vecs = None
    if rays is not None:
        if not isinstance(rays, dict):
            col.add("complex.rays must map cone names to ray arrays", "rays")
        else:
            ray_vecs = {k: _vectors(v, n + 1, f"ray of cone {k}", col, "rays") for k, v in rays.items()}
    p_variant = complex_raw.get("p_variant", True)
    if not isinstance(p_variant, bool):
        col.add("complex.p_variant must be a boolean", "p_variant")
        p_variant = True
    if col.errors:
        return None
    return MonoidalComplex.of(prime, sgs, [tuple(f) for f in faces], tuple(maximal) if maximal else None,
                              p_variant, ray_vecs, tuple(names))

"""Command line front-end: problem file in, report out.

Exit status is 0 on success (inconclusive verdicts included), 2 for schema
errors and 3 when the requested operation fails.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import __version__
from .errors import PQAError
from .pmonomial import PMonomial, format_prime, ideal_contains, minimal_primes, radical
from .pring import (
    PolynomialQuotient,
    PSemigroup,
    classify_components,
    component_kills,
    max_homogeneous_ideal,
    psg_contains,
    ring_normalize,
)
from .problem import OPS, ProblemFile, SchemaError, parse_problem
from .quasilength import (
    NotFinite,
    SequenceSpec,
    build_quotient_module,
    content_estimate,
    exact_quasilength,
    factor_length_bound,
    verify_certificate,
)
from .quasilength.content import VERDICT_RULE
from .report import FORMATS, Report, Table, emit_report
from .semigroup import AffineSemigroup, is_normal, sg_contains, sg_pointed_decomposition, sg_saturate
from .toricface import (
    MonoidalComplex,
    minimal_representative,
    realization_check,
    tf_element,
    tf_multiply,
    tf_one,
    validate_complex,
)

TIE_BREAKS = (
    "children ordered by remaining colength, then lexicographic generator",
    "grid points in lexicographic order",
    "saturation and decomposition generators sorted lexicographically, smallest shift first",
)


class OperationError(Exception):
    pass


def _s(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, tuple):
        return "(" + ",".join(_s(v) for v in x) + ")"
    if isinstance(x, list):
        return "[" + ", ".join(_s(v) for v in x) + "]"
    return str(x)


def _echo(prob: ProblemFile):
    out = [("op", prob.op), ("prime", str(prob.prime)), ("ring kind", prob.ring_kind)]
    for k in sorted(prob.command):
        if k != "op":
            out.append((k, _s(prob.command[k])))
    return tuple(out)


def _provenance(prob: ProblemFile):
    b = prob.budget
    return (
        ("library version", __version__),
        ("budget", f"depth={b.depth} extent={b.extent} points={b.points} nodes={b.nodes} "
                   f"states={b.states} element_cap={b.element_cap}"),
        ("window", f"sums of <= {b.window} semigroup generators"),
        ("tie-break rules", "; ".join(TIE_BREAKS)),
    )


def _report(prob, tables, verdict=None, notes=()):
    return Report(prob.op, _echo(prob), tuple(tables), _provenance(prob), verdict, tuple(notes))


def _need(prob, *kinds):
    if prob.ring_kind not in kinds:
        raise OperationError(f"{prob.op} needs a ring of kind {' or '.join(kinds)}, got {prob.ring_kind}")


def _semigroup_of(prob) -> AffineSemigroup:
    _need(prob, "p_semigroup", "affine_semigroup")
    return prob.ring.semigroup if isinstance(prob.ring, PSemigroup) else prob.ring


def _min_primes(prob):
    _need(prob, "p_stanley_reisner")
    R = prob.ring
    rows = [(format_prime(P, R.ambient), str(len(P))) for P in minimal_primes(R.ideal)]
    return _report(prob, [Table("minimal primes", ("prime", "height"), tuple(rows))],
                   notes=[f"ring {R.describe()}"])


def _membership(prob):
    R = prob.ring
    rows = []
    for e in prob.command["elements"]:
        if isinstance(R, PolynomialQuotient):
            w = PMonomial(R.p, e)
            ok = ideal_contains(R.ideal, w)
            rows.append((w.format(R.names), _s(ok)))
        elif isinstance(R, PSemigroup):
            rows.append((R.monomial(e).format(R.names), _s(psg_contains(R, e, prob.budget))))
        elif isinstance(R, AffineSemigroup):
            rows.append((_s(tuple(e)), _s(sg_contains(R, e, prob.budget))))
        else:
            raise OperationError("membership is not defined for toric face rings")
    col = "in ideal" if isinstance(R, PolynomialQuotient) else "in semigroup"
    return _report(prob, [Table("membership", ("element", col), tuple(rows))])


def _radical(prob):
    _need(prob, "p_stanley_reisner")
    I = prob.ring.ideal
    J = radical(I)
    return _report(prob, [Table("radical", ("ideal", "radical", "radical ideal"),
                                ((I.format(), J.format(), _s(J == I)),))])


def _normalize(prob):
    if isinstance(prob.ring, PSemigroup):
        S = ring_normalize(prob.ring, prob.budget)
        rows = ((prob.ring.describe(), S.describe(), _s(S.semigroup.generators == prob.ring.semigroup.generators)),)
        return _report(prob, [Table("normalization", ("ring", "normalization", "already normal"), rows)])
    M = _semigroup_of(prob)
    lattice = prob.command.get("lattice", "group")
    S = sg_saturate(M, prob.budget, "ambient" if lattice == "ambient" else None)
    rows = tuple((_s(g),) for g in S.generators)
    where = "Z^m" if lattice == "ambient" else "the group generated by the semigroup"
    return _report(prob, [Table("saturation generators", ("generator",), rows)],
                   notes=[f"input is normal: {_s(is_normal(M, prob.budget))}",
                          f"saturation is taken in {where}"])


def _pointed(prob):
    M = _semigroup_of(prob)
    b = prob.command.get("b")
    dec = sg_pointed_decomposition(M, b, prob.budget)
    rows = tuple((_s(g),) for g in dec.N.generators)
    t = Table("pointed part N", ("generator",), rows)
    summary = Table("decomposition", ("u", "N normal", "window depth", "largest shift"),
                    ((_s(dec.u), _s(dec.normal), str(dec.window_depth), str(dec.max_shift)),))
    return _report(prob, [t, summary], notes=list(dec.notes))


def _max_ideal(prob):
    _need(prob, "p_semigroup")
    m = max_homogeneous_ideal(prob.ring, prob.budget)
    rows = tuple((prob.ring.monomial(g).format(prob.ring.names),) for g in m.generators)
    return _report(prob, [Table("maximal homogeneous ideal", ("generator",), rows)],
                   notes=[f"ring {prob.ring.describe()}"])


def _component_table(R: PolynomialQuotient):
    rep = classify_components(R)
    rows = tuple((format_prime(c.prime, R.ambient), c.label, c.residue_ring, str(c.dimension))
                 for c in rep.components)
    return rep, Table("components", ("prime", "type", "residue ring", "dimension"), rows)


def _classify(prob):
    _need(prob, "p_stanley_reisner")
    rep, t = _component_table(prob.ring)
    return _report(prob, [t], notes=[f"dimension convention: {rep.dimension_convention}"])


def _complex(prob) -> MonoidalComplex:
    _need(prob, "toric_face")
    return prob.ring


def _toric_validate(prob):
    c = _complex(prob)
    rep = validate_complex(c, prob.budget.window, prob.budget)
    rows = tuple((v.kind, ",".join(v.cones), _s(v.witness) if v.witness is not None else "", v.message)
                 for v in rep.violations)
    tables = [Table("violations", ("kind", "cones", "witness", "message"), rows),
              Table("checks", ("check",), tuple((x,) for x in rep.checks))]
    if "elements" in prob.command:
        reps = []
        for e in prob.command["elements"]:
            homes = c.cones_containing(e, prob.budget)
            if not homes:
                reps.append((_s(e), "", "not in any maximal semigroup"))
                continue
            r = minimal_representative(c.semigroup(homes[0]), e, prob.budget)
            reps.append((_s(e), _s(r), ",".join(homes)))
        tables.append(Table("minimal representatives", ("exponent", "representative", "cones"), tuple(reps)))
    return _report(prob, tables, verdict=f"valid: {_s(rep.valid)}")


def _toric_multiply(prob):
    c = _complex(prob)
    f = tf_one(c)
    rows = []
    for terms in prob.command["factors"]:
        g = tf_element(c, terms, prob.budget)
        rows.append(("factor", g.format()))
        f = tf_multiply(f, g, prob.budget)
    rows.append(("product", f.format()))
    return _report(prob, [Table("product", ("role", "element"), tuple(rows))])


def _toric_realize(prob):
    c = _complex(prob)
    res = realization_check(c, prob.budget.window, prob.budget)
    rows = tuple((tau, _s(w) if w is not None else "none") for tau, w in res.witnesses)
    notes = [f"uncovered exponent {_s(v)}" for v in res.uncovered]
    return _report(prob, [Table("irredundancy witnesses", ("cone", "witness"), rows)],
                   verdict=f"realized: {_s(res.realized)}", notes=notes)


def _ql_ring(prob):
    _need(prob, "p_stanley_reisner", "p_semigroup")
    return prob.ring


def _format_vector(module, v, names):
    terms = []
    for j, x in enumerate(v):
        if x:
            lab = module.slot_label(j, names)
            terms.append(lab if x == 1 else f"{x}*{lab}")
    return " + ".join(terms) if terms else "0"


def _quasilength(prob):
    R = _ql_ring(prob)
    seq = SequenceSpec.of(prob.command["sequence"], prob.command["t"])
    module = build_quotient_module(R, seq)
    if isinstance(module, NotFinite):
        raise OperationError(f"R/I_t is not finite: {module.reason}")
    f = factor_length_bound(R, seq, module)
    res = exact_quasilength(module, f, prob.budget)
    ok = verify_certificate(module, res.certificate)
    summary = Table("quasilength", ("t", "lower", "upper", "exact", "module length", "method", "certified"),
                    ((_s(seq.t), str(res.lower), str(res.upper), _s(res.exact), str(module.length),
                      res.method, _s(ok)),))
    cert = Table("certificate", ("step", "element"),
                 tuple((str(i + 1), _format_vector(module, m, R.names)) for i, m in enumerate(res.certificate.elements)))
    return _report(prob, [summary, cert], notes=list(res.notes))


def _content_rows(est):
    return tuple((_s(p.t), str(p.lower), str(p.upper), _s(p.exact), p.normalized) for p in est.points)


def _content_tables(prob):
    R = _ql_ring(prob)
    seq = SequenceSpec.of(prob.command["sequence"], (1,) * len(prob.command["sequence"]))
    est = content_estimate(R, seq, prob.command["grid"], prob.budget)
    table = Table("content", ("t", "lower", "upper", "exact", "normalized"), _content_rows(est))
    notes = [f"verdict rule: {VERDICT_RULE}", f"smallest t entry on the grid: {est.min_parameter}"]
    for p in est.points:
        if not p.finite:
            notes.append(f"t={_s(p.t)}: {p.note}")
        elif not p.certified:
            notes.append(f"t={_s(p.t)}: certificate failed verification")
    return R, seq, est, table, notes


def _content(prob):
    _, _, est, table, notes = _content_tables(prob)
    return _report(prob, [table], verdict=est.verdict, notes=notes)


def _qseq_report(prob):
    R, seq, est, table, notes = _content_tables(prob)
    tables = [table]
    if isinstance(R, PolynomialQuotient):
        rep, comps = _component_table(R)
        tables.append(comps)
        rows = []
        for c in rep.components:
            alive = [PMonomial(R.p, w).format(R.names) for w in seq.entries
                     if not component_kills(c, PMonomial(R.p, w))]
            dead = [PMonomial(R.p, w).format(R.names) for w in seq.entries
                    if component_kills(c, PMonomial(R.p, w))]
            if dead:
                verb = "vanishes" if len(dead) == 1 else "vanish"
                text = f"{', '.join(dead)} {verb}; {len(alive)} of {seq.d} entries survive"
            else:
                text = f"all {seq.d} entries survive"
            text += f" in a component of dimension {c.dimension}"
            if len(alive) == seq.d == c.dimension:
                text += "; the image is a full-length sequence there"
            rows.append((format_prime(c.prime, R.ambient), ", ".join(alive) or "none", text))
        tables.append(Table("per-component commentary", ("prime", "surviving entries", "commentary"), tuple(rows)))
        notes.append("the conjecture for R follows once it holds on R/P for every minimal prime P; "
                     "the commentary lists what the sequence becomes on each R/P")
        notes.append(f"dimension convention: {rep.dimension_convention}")
    else:
        tables.append(Table("components", ("prime", "type", "residue ring", "dimension"),
                            (("(0)", "domain", R.describe(), "n/a"),)))
        notes.append("p-semigroup rings are domains, so the only minimal prime is (0)")
    return _report(prob, tables, verdict=est.verdict, notes=notes)


DISPATCH = {
    "min-primes": _min_primes,
    "membership": _membership,
    "radical": _radical,
    "normalize": _normalize,
    "pointed-decomp": _pointed,
    "max-ideal": _max_ideal,
    "classify": _classify,
    "toric-validate": _toric_validate,
    "toric-multiply": _toric_multiply,
    "toric-realize": _toric_realize,
    "quasilength": _quasilength,
    "content": _content,
    "qseq-report": _qseq_report,
}
assert set(DISPATCH) == set(OPS)


def run_command(prob: ProblemFile) -> Report:
    return DISPATCH[prob.op](prob)


def run_text(text: str, op: Optional[str] = None, fmt: str = "md",
             budget: Optional[int] = None, window: Optional[int] = None) -> str:
    """Parse, run and render; raises SchemaError or the operation's exception."""
    prob = parse_problem(text, op)
    if budget is not None:
        prob.budget = prob.budget.replace(states=budget)
    if window is not None:
        prob.budget = prob.budget.replace(window=window)
    return emit_report(run_command(prob), fmt)


def _parser():
    ap = argparse.ArgumentParser(prog="pqa", description="Run one problem file and print a report.")
    ap.add_argument("command", choices=("run",) + OPS,
                    help="operation to run; 'run' uses command.op from the file")
    ap.add_argument("--input", "-i", required=True, help="problem file (JSON), '-' for stdin")
    ap.add_argument("--format", "-f", default="md", choices=FORMATS)
    ap.add_argument("--budget", type=int, help="state budget for exact quasilength search")
    ap.add_argument("--window", type=int, help="window size: sums of at most this many generators")
    ap.add_argument("--out", "-o", help="write the report here instead of stdout")
    ap.add_argument("--version", action="version", version=f"pqa {__version__}")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    for flag in ("budget", "window"):
        v = getattr(args, flag)
        if v is not None and v < 1:
            print(f"error: --{flag} must be positive", file=sys.stderr)
            return 2
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        print(f"error: cannot read {args.input}: {e.strerror}", file=sys.stderr)
        return 2
    op = None if args.command == "run" else args.command
    try:
        out = run_text(text, op, args.format, args.budget, args.window)
    except SchemaError as e:
        for msg in e.errors:
            print(f"schema error: {msg}", file=sys.stderr)
        return 2
    except (PQAError, OperationError, ValueError, ArithmeticError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

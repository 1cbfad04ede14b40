"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for usage or input errors. ``--format json`` output uses sorted keys and
echoes every resolved option, so identical inputs give identical bytes.

Field and group arguments are JSON files, or ``builtin:NAME`` for a file
of the bundled corpus (``builtin:q3``, ``builtin:s3``, ...).
"""
from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from math import comb

from . import fgl, groups, hkr, io, lubin_tate, suite
from .arith import DEFAULT_PRECISION, NumberFieldRing, qp, unramified_field
from .errors import (
    CheckFailed,
    FGLCharError,
    IntegralityViolation,
    MissingCorpus,
    NotPTypical,
    NotPTypifiable,
    PrecisionExhausted,
)
from .report import Report, _plain

# errors that mean an identity failed rather than that the input was bad
MATH_FAILURES = (CheckFailed, IntegralityViolation, NotPTypical, NotPTypifiable,
                 PrecisionExhausted)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Outcome:
    """What a verb produced: a result payload, checks, and a text rendering."""

    def __init__(self, result=None, checks=(), text=None):
        self.result = result
        self.checks = list(checks)
        self.text = text

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks)


# ---------------------------------------------------------------------------
# argument helpers

def _resolve(path: str, kind: str):
    if path.startswith("builtin:"):
        root = io.corpus_dir()
        return io.read_json(root / kind / f"{path.split(':', 1)[1]}.json")
    return io.read_json(path)


def _field(args):
    if args.field:
        return io.field_from_json(_resolve(args.field, "fields"), args.precision)
    if args.p is None:
        raise UsageError("give --field or --p")
    n = args.n or 1
    prec = args.precision if args.precision is not None else DEFAULT_PRECISION
    return qp(args.p, prec) if n == 1 else unramified_field(args.p, n, prec)


def _group(path):
    return groups.load_group(_resolve(path, "groups"))


_TERM = re.compile(r"([+-]?)(\d*(?:/\d+)?)(\*?x)?")


def parse_parameter(text: str, p: int, u_poly=None):
    """An integer, a fraction, or a linear expression in ``x`` such as ``1+x``."""
    text = text.replace(" ", "")
    if "x" not in text:
        try:
            v = Fraction(text)
        except ValueError as exc:
            raise UsageError(f"cannot parse parameter {text!r}") from exc
        return int(v) if v.denominator == 1 else v
    if u_poly is None:
        raise UsageError("x needs a field with residue degree >= 2")
    coeffs = [Fraction(0), Fraction(0)]
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse parameter {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        coeffs[1 if m.group(3) else 0] += sign * c
        pos = m.end()
    return NumberFieldRing(p, u_poly).element(coeffs)


def _law(args):
    if args.kind == "hazewinkel":
        return fgl.hazewinkel_law(args.p, args.n, args.degree)
    if args.kind == "additive":
        return fgl.additive_law(args.p, args.degree)
    return fgl.multiplicative_law(args.p, args.degree)


# ---------------------------------------------------------------------------
# verbs

def cmd_fgl_log(args) -> Outcome:
    q = args.p ** args.n
    log = {"hazewinkel": fgl.hazewinkel_log, "honda": fgl.honda_log}.get(args.kind)
    series = log(args.p, args.n, args.degree) if log else fgl.additive_log(args.p, args.degree)
    text = "\n".join(f"X^{e[0]}: {c}" for e, c in sorted(series.terms.items()))
    return Outcome({"logarithm": io.series_to_json(series), "q": q}, [], text)


def cmd_fgl_verify(args) -> Outcome:
    q = args.p ** args.n
    log = {"hazewinkel": fgl.hazewinkel_log, "honda": fgl.honda_log}[args.kind](
        args.p, args.n, args.degree)
    checks = [fgl.verify_functional_equation(log, args.p, q, args.degree)]
    checks.append(fgl.integral_g(log, args.p)[1])
    return Outcome({"q": q}, checks)


def cmd_fgl_law(args) -> Outcome:
    F = _law(args)
    checks = [fgl.check_axioms(F)]
    if F.height is not None and args.kind == "hazewinkel":
        checks.append(fgl.verify_p_corollary(F))
    text = "\n".join(f"X^{e[0]} Y^{e[1]}: {c}" for e, c in sorted(F.law.terms.items(),
                                                               key=lambda t: (sum(t[0]), t[0])))
    return Outcome(io.law_to_json(F), checks, text)


def cmd_fgl_endo(args) -> Outcome:
    F = fgl.hazewinkel_law(args.p, args.n, args.degree)
    u_poly = F.field.u_poly if args.n > 1 else None
    a = parse_parameter(args.a, args.p, u_poly)
    series = fgl.endomorphism(F, a)
    checks = []
    if args.b is not None:
        checks.append(fgl.verify_ring_hom(F, a, parse_parameter(args.b, args.p, u_poly)))
    text = "\n".join(f"X^{e[0]}: {c}" for e, c in sorted(series.terms.items()))
    return Outcome({"endomorphism": io.series_to_json(series), "a": str(a)}, checks, text)


def cmd_fgl_araki(args) -> Outcome:
    F = _law(args)
    kmax = args.kmax if args.kmax is not None else args.n + 1
    coords = fgl.araki_coordinates(F, kmax, args.convention)
    text = "\n".join(f"v_{k} = {v}" for k, v in enumerate(coords.values))
    return Outcome(coords.to_json(), [], text)


def _uniformizer_series(args, K):
    if args.series_file:
        return io.series_from_json(_resolve(args.series_file, "series"), K.with_precision(
            K.precision))
    if args.series == "cyclotomic":
        if K.n != 1:
            raise UsageError("the cyclotomic series needs L = Q_p")
        return lubin_tate.uniformizer_series(
            K, [0] + [comb(K.p, k) for k in range(1, K.p + 1)], args.degree)
    return lubin_tate.standard_series(K, args.degree)


def cmd_lt_construct(args) -> Outcome:
    K = _field(args)
    f = _uniformizer_series(args, K)
    F = lubin_tate.lubin_tate_law(K, f, args.degree)
    return Outcome(io.law_to_json(F), [lubin_tate.verify_lubin_tate(F)])


def cmd_genus(args) -> Outcome:
    v = fgl.genus_value(args.p, args.n, args.m)
    return Outcome({"value": str(v.value), "valuation": v.valuation, "m": args.m},
                   [Report("p-integral", v.is_integral())], str(v.value))


def cmd_torsion(args) -> Outcome:
    need = args.p ** (args.n * args.r)
    D = max(args.degree, need)
    F = fgl.hazewinkel_law(args.p, args.n, D)
    order = fgl.torsion_order(F, args.r)
    return Outcome({"order": order, "truncation": D}, [], str(order))


def cmd_group_info(args) -> Outcome:
    G = _group(args.group)
    classes = groups.conjugacy_classes(G)
    Q, _ = groups.abelianization(G)
    result = {"name": G.name, "order": G.order,
              "element_orders": G.element_order.tolist(),
              "class_sizes": [len(c) for c in classes],
              "class_reps": [c[0] for c in classes],
              "generators": list(G.generators),
              "abelianization_order": Q.order, "exponent": groups.exponent(G)}
    if args.p is not None:
        result["p_elements"] = groups.p_elements(G, args.p)
    text = (f"{G.name}: order {G.order}, {len(classes)} classes of sizes "
            f"{[len(c) for c in classes]}, abelianization of order {Q.order}")
    return Outcome(result, [], text)


def cmd_hkr_classes(args) -> Outcome:
    K, G = _field(args), _group(args.group)
    S = hkr.hom_classes(K, G)
    text = "\n".join(f"{list(c.rep)} size {c.size}" for c in S.classes)
    return Outcome({**S.to_json(), "total_tuples": S.total_tuples}, [],
                   f"{len(S)} classes\n{text}")


def cmd_hkr_scheme(args) -> Outcome:
    K, G = _field(args), _group(args.group)
    d = (hkr.frobenius_orbits if args.frobenius else hkr.unit_orbits)(K, G, args.level)
    text = "\n".join(f"point {list(pt.rep)}: degree {pt.degree}, stabilizer {pt.stabilizer_order}"
                     for pt in d.points)
    ok = sum(d.degrees) == d.total_classes
    return Outcome(d.to_json(), [Report("degrees sum to class count", ok)], text)


def cmd_hkr_rank(args) -> Outcome:
    K, G = _field(args), _group(args.group)
    r = hkr.rank(K, G)
    return Outcome({"rank": r}, [], str(r))


def cmd_hkr_check(args) -> Outcome:
    K, G = _field(args), _group(args.group)
    S = hkr.hom_classes(K, G)
    checks = [hkr.rank_report(K, G), hkr.level_stability(K, G)]
    if K.n == 1:
        ok = len(S) == hkr.p_class_count(G, K.p)
        checks.append(Report("rank = p-power classes", ok))
    chars = ([io.character_from_json(G, _resolve(args.character, "characters"))]
             if args.character else hkr.all_characters(G))
    checks.append(hkr.additivity_check(chars, S))
    if K.is_unramified:
        for chi in chars:
            rep = hkr.equivariance_check(K, chi, S)
            rep.check = f"equivariance for images {[str(v) for v in chi.generator_images]}"
            checks.append(rep)
    if args.with_group:
        checks.append(hkr.product_check(K, G, _group(args.with_group)))
    return Outcome({"classes": len(S), "characters": len(chars)}, checks)


def cmd_suite(args, stream) -> Outcome:
    fields, grps, errors = {}, {}, {}
    root = io.corpus_dir(args.corpus)
    fdir, gdir = root / "fields", root / "groups"
    if not fdir.is_dir() or not gdir.is_dir():
        raise MissingCorpus(f"{root} lacks fields/ or groups/")
    for path in sorted(fdir.glob("*.json")):
        fields[path.stem] = io.field_from_json(io.read_json(path))
    for path in sorted(gdir.glob("*.json")):
        try:
            grps[path.stem] = groups.load_group(io.read_json(path))
        except FGLCharError as exc:
            errors[path.stem] = f"{type(exc).__name__}: {exc}"
    if not fields or not (grps or errors):
        raise MissingCorpus(f"{root} has no fields or no groups")
    only = args.only.split(",") if args.only else None
    if only:
        known = set(suite.AREAS) | {c.name for c in suite.CHECKS}
        unknown = [o for o in only if o not in known]
        if unknown:
            raise UsageError(f"unknown check or area: {', '.join(unknown)}")

    def progress(rep, seconds):
        if args.format == "text":
            print(f"{rep.line()}  [{seconds:.1f} s]", file=stream, flush=True)

    reports = suite.run_suite(suite.Context(fields, grps, errors), only, args.time_limit,
                              progress)
    return Outcome({"checks_run": len(reports)}, reports, "")


VERBS = {
    "fgl-log": cmd_fgl_log, "fgl-verify": cmd_fgl_verify, "fgl-law": cmd_fgl_law,
    "fgl-endo": cmd_fgl_endo, "fgl-araki": cmd_fgl_araki, "lt-construct": cmd_lt_construct,
    "genus": cmd_genus, "torsion": cmd_torsion, "group-info": cmd_group_info,
    "hkr-classes": cmd_hkr_classes, "hkr-scheme": cmd_hkr_scheme, "hkr-rank": cmd_hkr_rank,
    "hkr-check": cmd_hkr_check, "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fglchar", description="Formal group laws and character schemes.")
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)

    def verb(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=["text", "json"], default="text")
        sp.add_argument("--output", default=None, help="write the report here")
        return sp

    def pn(sp, degree):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--degree", type=int, default=degree)

    def field_args(sp, group=True):
        sp.add_argument("--field", default=None)
        sp.add_argument("--p", type=int, default=None)
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--precision", type=int, default=None)
        if group:
            sp.add_argument("--group", required=True)

    sp = verb("fgl-log", "Hazewinkel (or comparison) logarithm coefficients")
    pn(sp, 20)
    sp.add_argument("--kind", choices=["hazewinkel", "honda", "additive"], default="hazewinkel")
    sp = verb("fgl-verify", "functional equation and integrality of g")
    pn(sp, 50)
    sp.add_argument("--kind", choices=["hazewinkel", "honda"], default="hazewinkel")
    for name, help_ in (("fgl-law", "formal group law with axiom checks"),
                        ("fgl-araki", "Araki coordinates of [p]")):
        sp = verb(name, help_)
        pn(sp, 20)
        sp.add_argument("--kind", choices=["hazewinkel", "additive", "multiplicative"],
                        default="hazewinkel")
        if name == "fgl-araki":
            sp.add_argument("--kmax", type=int, default=None)
            sp.add_argument("--convention", choices=["araki", "hazewinkel"], default="araki")
    sp = verb("fgl-endo", "endomorphism [a] (and the ring laws with --b)")
    pn(sp, 20)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", default=None)
    sp = verb("lt-construct", "Lubin-Tate law of a uniformizer series")
    field_args(sp, group=False)
    sp.add_argument("--degree", type=int, default=16)
    sp.add_argument("--series", choices=["standard", "cyclotomic"], default="standard")
    sp.add_argument("--series-file", default=None)
    sp = verb("genus", "genus of CP^m")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, required=True)
    sp = verb("torsion", "order of the [p^r]-torsion")
    pn(sp, 20)
    sp.add_argument("--r", type=int, default=1)
    sp = verb("group-info", "orders, classes and abelianization")
    sp.add_argument("--group", required=True)
    sp.add_argument("--p", type=int, default=None)
    for name, help_ in (("hkr-classes", "conjugacy classes of Hom(o_L, G)"),
                        ("hkr-scheme", "closed points of the étale scheme"),
                        ("hkr-rank", "number of classes"),
                        ("hkr-check", "consistency checks on the character scheme")):
        sp = verb(name, help_)
        field_args(sp)
        if name == "hkr-scheme":
            sp.add_argument("--frobenius", action="store_true")
            sp.add_argument("--level", type=int, default=None)
        if name == "hkr-check":
            sp.add_argument("--character", default=None)
            sp.add_argument("--with-group", default=None)
    sp = verb("suite", "run every registered check on a corpus")
    sp.add_argument("--only", default=None, help="comma-separated areas or check names")
    sp.add_argument("--corpus", default=None)
    sp.add_argument("--time-limit", type=float, default=600.0)
    return parser


def _render(verb, options, out: Outcome, fmt) -> str:
    if fmt == "json":
        return io.dumps(_plain({"command": verb, "options": options, "pass": out.passed,
                                "result": out.result,
                                "checks": [r.to_json() for r in out.checks]}))
    lines = [out.text] if out.text else []
    if verb != "suite":
        lines += [r.line() for r in out.checks]
    else:
        failed = [r.check for r in out.checks if not r.passed]
        lines.append(f"{len(out.checks) - len(failed)}/{len(out.checks)} checks passed"
                     + (f"; failed: {', '.join(failed)}" if failed else ""))
    return "\n".join(lines) + "\n"


def run(argv, stream=None) -> tuple[int, str]:
    """Dispatch ``argv``; return the exit code and the rendered report."""
    stream = stream if stream is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.verb is None:
            raise UsageError("missing verb; try --help")
        options = {k: v for k, v in sorted(vars(args).items()) if k not in ("verb",)}
        handler = VERBS[args.verb]
        out = handler(args, stream) if args.verb == "suite" else handler(args)
    except UsageError as exc:
        return 2, f"usage error: {exc}\n"
    except MATH_FAILURES as exc:
        out = Outcome(None, [Report(type(exc).__name__, False, str(exc))])
        return 1, _render(args.verb, options, out, args.format)
    except (FGLCharError, ValueError, OSError) as exc:
        return 2, f"error: {type(exc).__name__}: {exc}\n"
    return (0 if out.passed else 1), _render(args.verb, options, out, args.format)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    code, text = run(argv)
    ns = None
    try:
        ns = build_parser().parse_args(argv)
    except (UsageError, SystemExit):
        pass
    if code == 2 and text.startswith(("usage error", "error")):
        sys.stderr.write(text)
    elif ns is not None and getattr(ns, "output", None):
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

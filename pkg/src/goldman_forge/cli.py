"""Command-line interface: compute, expand, and verify.

Words are whitespace-separated tokens like "a1 b1'"; paths are
"from:to:word" with the tag numbers of their endpoints.  Every command
prints text by default and a stable JSON document under --json;
identical inputs and seeds print byte-identical JSON.  Exit codes:
0 success, 1 a checked property failed, 2 usage or parse errors.
"""

import argparse
import json
import sys

from . import suites
from .barcx import chen_pairing, open_model, parse_bar
from .goldman import (
    LoopSum,
    PathSum,
    adams,
    bi_pairing,
    crossing_trace,
    expand_loop_sum,
    goldman_bracket,
    kk_action,
    dehn_twist,
    twist_curve_names,
    twist_derivation,
)
from .magnus import (
    default_expansion,
    is_symplectic,
    kvi_automorphism,
    kvi_check,
    resolution_check,
    solve_symplectic,
)
from .surface import (
    FreeWord,
    ParseError,
    Path,
    SurfaceSpec,
    cyclic_normal_form,
    parse_word,
    render_word,
)
from .tensoralg import derivation_exp

SCHEMA = "v1"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad invocation or unparseable input; exits with code 2."""


def _word(text):
    try:
        return parse_word(text)
    except ParseError as err:
        raise UsageError(str(err)) from None


def _path(token):
    parts = token.split(":", 2)
    if len(parts) != 3:
        raise UsageError("path %r is not of the form from:to:word" % token)
    try:
        from_tag, to_tag = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError("path %r needs integer endpoint tags" % token) \
            from None
    return Path(from_tag, to_tag, _word(parts[2]))


def _surface(args):
    try:
        return SurfaceSpec(args.g, args.b)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _trunc(args, fallback=4):
    if args.N is None:
        return fallback
    if args.N < 1:
        raise UsageError("the truncation degree must be at least 1")
    return args.N


def _emit(args, payload, lines):
    if args.json:
        payload["schema"] = SCHEMA
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _sum_lines(label, js):
    """Human line for a serialized loop, path, or path-pair sum."""
    terms = js["terms"]
    if not terms:
        return ["%s: 0" % label]
    parts = []
    for t in terms:
        if "left" in t:
            parts.append("%s (%d->%d: %s)x(%d->%d: %s)"
                         % (t["coeff"],
                            t["left"]["from"], t["left"]["to"],
                            t["left"]["word"],
                            t["right"]["from"], t["right"]["to"],
                            t["right"]["word"]))
        elif "from" in js:
            parts.append("%s (%s)" % (t["coeff"], t["word"]))
        else:
            parts.append("%s |%s|" % (t["coeff"], t["word"]))
    return ["%s: %s" % (label, " + ".join(parts)),
            "twist: %d" % js["twist"]]


def _valuation(series):
    v = series.valuation()
    return None if v is None else int(v)


def _centered(u):
    return u + LoopSum.of(u.spec, FreeWord(), -u.augmentation())


def cmd_bracket(args):
    spec = _surface(args)
    left = cyclic_normal_form(_word(args.words[0]))
    right = cyclic_normal_form(_word(args.words[1]))
    u = LoopSum.of(spec, left.free_word())
    v = LoopSum.of(spec, right.free_word())
    trunc = _trunc(args)
    theta = default_expansion(spec, trunc)
    bracket = goldman_bracket(u, v)
    expansion = expand_loop_sum(bracket, theta)
    vals = {
        "left": _valuation(expand_loop_sum(_centered(u), theta)),
        "right": _valuation(expand_loop_sum(_centered(v), theta)),
        "bracket": _valuation(expansion),
    }
    payload = {
        "command": "bracket",
        "surface": [spec.genus, spec.boundary],
        "truncation": trunc,
        "bracket": bracket.to_json(),
        "expansion": expansion.to_json(),
        "filtration": vals,
    }
    lines = _sum_lines("bracket", payload["bracket"])
    lines.append("valuations: left %s, right %s, bracket %s"
                 % (vals["left"], vals["right"], vals["bracket"]))
    if args.trace:
        records = crossing_trace(spec, left, right)
        payload["trace"] = records
        lines.extend("crossing %d: sign %+d" % (i, r["sign"])
                     for i, r in enumerate(records))
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_kk(args):
    spec = _surface(args)
    u = LoopSum.of(spec, _word(args.loop))
    gamma = _path(args.path)
    try:
        out = kk_action(u, PathSum.of(spec, gamma))
    except ValueError as err:
        raise UsageError(str(err)) from None
    payload = {
        "command": "kk",
        "surface": [spec.genus, spec.boundary],
        "action": out.to_json(),
    }
    lines = _sum_lines("action", payload["action"])
    if args.trace:
        records = crossing_trace(spec, cyclic_normal_form(_word(args.loop)),
                                 gamma)
        payload["trace"] = records
        lines.extend("crossing %d: sign %+d" % (i, r["sign"])
                     for i, r in enumerate(records))
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_bipair(args):
    spec = _surface(args)
    g1 = PathSum.of(spec, _path(args.paths[0]))
    g2 = PathSum.of(spec, _path(args.paths[1]))
    try:
        out = bi_pairing(g1, g2)
    except ValueError as err:
        raise UsageError(str(err)) from None
    payload = {
        "command": "bipair",
        "surface": [spec.genus, spec.boundary],
        "pairing": out.to_json(),
    }
    _emit(args, payload, _sum_lines("pairing", payload["pairing"]))
    return EXIT_OK


def cmd_expand(args):
    spec = _surface(args)
    trunc = _trunc(args)
    theta = default_expansion(spec, trunc)
    series = theta.expand_word(_word(args.word))
    payload = {
        "command": "expand",
        "surface": [spec.genus, spec.boundary],
        "truncation": trunc,
        "series": series.to_json(),
    }
    lines = ["%s: %s" % (" ".join(word) or "1", coeff)
             for word, coeff in series.items()]
    _emit(args, payload, lines or ["0"])
    return EXIT_OK


def cmd_adams(args):
    spec = _surface(args)
    if args.n < 0:
        raise UsageError("the power-map exponent must be nonnegative")
    out = adams(args.n, LoopSum.of(spec, _word(args.word)))
    payload = {
        "command": "adams",
        "surface": [spec.genus, spec.boundary],
        "n": args.n,
        "image": out.to_json(),
    }
    _emit(args, payload, _sum_lines("image", payload["image"]))
    return EXIT_OK


def cmd_solve_expansion(args):
    if args.b < 1:
        raise UsageError("the surface needs at least one boundary circle")
    trunc = _trunc(args)
    try:
        theta = solve_symplectic(args.g, args.b - 1, trunc)
    except ValueError as err:
        raise UsageError(str(err)) from None
    symplectic = is_symplectic(theta)
    payload = {
        "command": "solve-expansion",
        "surface": [args.g, args.b],
        "truncation": trunc,
        "symplectic": bool(symplectic),
        "expansion": theta.to_json(),
    }
    lines = ["symplectic expansion to degree %d: %s"
             % (trunc, "verified" if symplectic else "NOT symplectic")]
    _emit(args, payload, lines)
    return EXIT_OK if symplectic else EXIT_FAILED


def cmd_kvi_check(args):
    if args.b < 1:
        raise UsageError("the surface needs at least one boundary circle")
    trunc = _trunc(args)
    try:
        theta = solve_symplectic(args.g, args.b - 1, trunc)
    except ValueError as err:
        raise UsageError(str(err)) from None
    cert = kvi_check(kvi_automorphism(theta))
    payload = {
        "command": "kvi-check",
        "surface": [args.g, args.b],
        "certificate": cert,
    }
    # the certificate is the deliverable, so this command always
    # prints the JSON document
    payload["schema"] = SCHEMA
    print(json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_OK if cert["passed"] else EXIT_FAILED


def cmd_bar_pair(args):
    spec = _surface(args)
    model = open_model(spec)
    try:
        element = parse_bar(args.bar, model)
    except ValueError as err:
        raise UsageError(str(err)) from None
    value = chen_pairing(element, _word(args.word))
    payload = {
        "command": "bar-pair",
        "surface": [spec.genus, spec.boundary],
        "bar": args.bar,
        "word": args.word,
        "value": str(value),
    }
    _emit(args, payload, ["%s" % value])
    return EXIT_OK


def cmd_resolution(args):
    try:
        report = resolution_check(args.g, args.max_n)
    except (ValueError, AssertionError) as err:
        raise UsageError(str(err)) from None
    payload = {"command": "resolution", "report": report}
    lines = ["degree dims: %s" % report["dims"]]
    for row in report["rows"]:
        lines.append("n=%d dims=%s composite=%s injective=%s surjective=%s "
                     "ranks=%s" % (row["n"], row["dims"],
                                   row["composite_zero"], row["injective"],
                                   row["surjective"],
                                   "checked" if row["rank_cross_checked"]
                                   else "counted"))
    lines.append("passed" if report["passed"] else "FAILED")
    _emit(args, payload, lines)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_twist_check(args):
    try:
        g, b = (int(part) for part in args.surface.split(","))
        spec = SurfaceSpec(g, b)
        curves = twist_curve_names(spec)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if not curves:
        raise UsageError("no tabulated twist curves for surface %s"
                         % args.surface)
    trunc = _trunc(args)
    theta = default_expansion(spec, trunc)
    rows = []
    ok = True
    for curve in curves:
        flow = derivation_exp(twist_derivation(spec, curve, trunc))
        for name in spec.generators():
            got = flow.apply(theta.image(name))
            image = dehn_twist(spec, curve, FreeWord(((name, 1),)))
            match = got == theta.expand_word(image)
            ok = ok and match
            rows.append({"curve": curve, "generator": name,
                         "image": render_word(image) or "1",
                         "matches": bool(match)})
    payload = {
        "command": "twist-check",
        "surface": [spec.genus, spec.boundary],
        "truncation": trunc,
        "rows": rows,
        "passed": bool(ok),
    }
    lines = ["%s(%s) = %s: %s" % (r["curve"], r["generator"], r["image"],
                                  "ok" if r["matches"] else "MISMATCH")
             for r in rows]
    lines.append("passed" if ok else "FAILED")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_verify(args):
    report = suites.run_suite(args.suite, genus=args.g, boundary=args.b,
                              trunc=args.N, seed=args.seed)
    payload = {"command": "verify", "report": report}
    lines = []
    for check in report["checks"]:
        if check["passed"]:
            lines.append("ok   %s (%d cases)" % (check["name"],
                                                 check["cases"]))
        else:
            lines.append("FAIL %s (%d cases)" % (check["name"],
                                                 check["cases"]))
            lines.extend("     %s" % f for f in check["failures"])
    lines.append("pass" if report["passed"] else "fail")
    _emit(args, payload, lines)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="goldman-forge",
        description="Exact loop-surgery computations on bordered surfaces.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, default=1,
                        help="genus (default 1)")
    common.add_argument("--b", type=int, default=1,
                        help="boundary circles (default 1)")
    common.add_argument("--N", type=int, default=None,
                        help="truncation degree (default 4; suites pick their own)")
    common.add_argument("--seed", type=int, default=suites.DEFAULT_SEED,
                        help="seed for randomized sweeps")
    common.add_argument("--json", action="store_true",
                        help="print a stable JSON document")
    common.add_argument("--trace", action="store_true",
                        help="include per-crossing records where supported")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", parents=[common],
                       help="bracket of two loop words")
    p.add_argument("words", nargs=2, metavar="WORD")
    p.set_defaults(handler=cmd_bracket)

    p = sub.add_parser("kk", parents=[common],
                       help="loop acting on a boundary-to-boundary path")
    p.add_argument("loop", metavar="WORD")
    p.add_argument("path", metavar="FROM:TO:WORD")
    p.set_defaults(handler=cmd_kk)

    p = sub.add_parser("bipair", parents=[common],
                       help="pairing of two endpoint-disjoint paths")
    p.add_argument("paths", nargs=2, metavar="FROM:TO:WORD")
    p.set_defaults(handler=cmd_bipair)

    p = sub.add_parser("expand", parents=[common],
                       help="tensor-series expansion of a word")
    p.add_argument("word", metavar="WORD")
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("adams", parents=[common],
                       help="power map applied to a loop class")
    p.add_argument("--n", type=int, required=True, help="exponent")
    p.add_argument("word", metavar="WORD")
    p.set_defaults(handler=cmd_adams)

    p = sub.add_parser("solve-expansion", parents=[common],
                       help="solve for a symplectic expansion")
    p.set_defaults(handler=cmd_solve_expansion)

    p = sub.add_parser("kvi-check", parents=[common],
                       help="tangential automorphism certificate")
    p.set_defaults(handler=cmd_kvi_check)

    p = sub.add_parser("bar-pair", parents=[common],
                       help="pair a bar word like [xi1|eta1] with a loop")
    p.add_argument("bar", metavar="BAR")
    p.add_argument("word", metavar="WORD")
    p.set_defaults(handler=cmd_bar_pair)

    p = sub.add_parser("resolution", parents=[common],
                       help="surface-algebra resolution certificate")
    p.add_argument("--max-n", type=int, default=6, dest="max_n")
    p.set_defaults(handler=cmd_resolution)

    p = sub.add_parser("twist-check", parents=[common],
                       help="twist logarithm formula on all generators")
    p.add_argument("--surface", default="1,1", metavar="G,B")
    p.set_defaults(handler=cmd_twist_check)

    p = sub.add_parser("verify", parents=[common],
                       help="run a named property suite")
    p.add_argument("suite", choices=sorted(suites.SUITES))
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

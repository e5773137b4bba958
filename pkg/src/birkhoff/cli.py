"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 precision error.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from fractions import Fraction
from typing import Any, Sequence

from . import hopfconv, qshuffle, renorm, trees, verify
from .exactalg import PoleOrderError, SymbolicPoly, format_coeff
from .laurent import DEFAULT_ORDER, LaurentSeries, PoleError, PrecisionError

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--pretty", action="store_true", help="print π² and ln c in text mode")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="birkhoff", description="Exact Hopf-algebraic renormalization toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    tree = sub.add_parser("tree", help="rooted-tree Hopf algebra")
    tsub = tree.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("coproduct", "antipode"):
        p = tsub.add_parser(name, parents=[common])
        p.add_argument("--forest", required=True, help='bracket syntax, e.g. "[[]] []"; "1" is the unit')

    word = sub.add_parser("word", help="quasi-shuffle Hopf algebra")
    wsub = word.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = wsub.add_parser("qshuffle", parents=[common])
    p.add_argument("--word", action="append", required=True, help="s:r letters, comma separated (give twice)")
    p = wsub.add_parser("coproduct", parents=[common])
    p.add_argument("--word", required=True)

    for name, helptext in (("birkhoff", "phi, phi_- and phi_+ of one element"),
                           ("renorm", "renormalized value"),
                           ("naive", "finite part without subdivergence subtraction")):
        p = sub.add_parser(name, help=helptext)
        ksub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
        tp = ksub.add_parser("tree", parents=[common])
        tp.add_argument("--forest", required=True)
        tp.add_argument("--order", type=int, default=DEFAULT_ORDER)
        mp = ksub.add_parser("mzv", parents=[common])
        mp.add_argument("--word", required=True)
        mp.add_argument("--order", type=int, default=DEFAULT_ORDER)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=verify.SUITE_NAMES, default="all")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--golden-dir", default=None)
    return parser


# --- rendering ---------------------------------------------------------------


def _value_text(v: Any, pretty: bool) -> str:
    if isinstance(v, LaurentSeries):
        return v.to_string(pretty)
    if isinstance(v, (SymbolicPoly, Fraction, int)):
        return format_coeff(v, pretty)
    return str(v)


def _value_json(v: Any) -> Any:
    if isinstance(v, LaurentSeries):
        return v.to_json()
    if isinstance(v, (SymbolicPoly, Fraction, int)):
        return format_coeff(v)
    return v


def _word_tensor_text(ts: Counter) -> str:
    items = sorted(((k, c) for k, c in ts.items() if c), key=lambda kc: (len(kc[0][0]), kc[0]))
    return " + ".join(
        (f"{c}*" if c != 1 else "") + f"({qshuffle.render_word(u)})⊗({qshuffle.render_word(w)})"
        for (u, w), c in items)


def _emit(args, input_desc: Any, text: str, json_result: Any, order: int | None = None) -> None:
    if args.format == "json":
        print(json.dumps({"input": input_desc, "result": json_result, "order": order}, ensure_ascii=False))
    else:
        print(text)


def _parse_forest(text: str) -> trees.RootedForest:
    try:
        return trees.parse_forest(text)
    except trees.ParseError as exc:
        raise UsageError(f"cannot parse forest {text!r}: {exc}") from None


def _parse_word(text: str):
    try:
        return qshuffle.parse_word(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse word {text!r}: {exc}") from None


# --- commands ------------------------------------------------------------------


def _cmd_tree(args) -> int:
    forest = _parse_forest(args.forest)
    if args.action == "coproduct":
        ts = trees.coproduct(forest)
        rows = [[str(l), str(r), c] for (l, r), c in sorted(ts.items(), key=lambda kv: (kv[0][0], kv[0][1]))]
        _emit(args, str(forest), trees.render_tensor(ts), rows)
    else:
        s = hopfconv.antipode(hopfconv.tree_context(), forest)
        rows = [[str(f), format_coeff(c)] for f, c in sorted(s.terms.items())]
        _emit(args, str(forest), str(s), rows)
    return EXIT_OK


def _cmd_word(args) -> int:
    if args.action == "qshuffle":
        if len(args.word) != 2:
            raise UsageError("qshuffle needs exactly two --word arguments")
        u, w = (_parse_word(t) for t in args.word)
        ws = qshuffle.quasi_shuffle(u, w)
        rows = [[qshuffle.render_word(x), c] for x, c in sorted(ws.items()) if c]
        _emit(args, [qshuffle.render_word(u), qshuffle.render_word(w)], qshuffle.render_word_sum(ws), rows)
    else:
        w = _parse_word(args.word)
        ts = qshuffle.deconcat_coproduct(w)
        rows = [[qshuffle.render_word(a), qshuffle.render_word(b), c] for (a, b), c in sorted(ts.items())]
        _emit(args, qshuffle.render_word(w), _word_tensor_text(ts), rows)
    return EXIT_OK


def _element(args):
    if args.kind == "tree":
        f = _parse_forest(args.forest)
        return f, str(f)
    w = _parse_word(args.word)
    return w, qshuffle.render_word(w)


def _cmd_values(args) -> int:
    element, desc = _element(args)
    try:
        if args.command == "birkhoff":
            phi, minus, plus = renorm.birkhoff_parts(args.kind, element, args.order)
            text = "\n".join(f"{name} = {v.to_string(args.pretty)}"
                             for name, v in (("phi", phi), ("phi_minus", minus), ("phi_plus", plus)))
            _emit(args, desc, text, {"phi": phi.to_json(), "phi_minus": minus.to_json(),
                                     "phi_plus": plus.to_json()}, args.order)
            return EXIT_OK
        fn = renorm.renormalize if args.command == "renorm" else renorm.naive_finite_part
        value = fn(args.kind, element, args.order)
    except renorm.UnsupportedArgument as exc:
        raise UsageError(str(exc)) from None
    _emit(args, desc, _value_text(value, args.pretty), _value_json(value), args.order)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.max_degree < 1:
        raise UsageError("--max-degree must be positive")
    try:
        checks = verify.run_suites(args.suite, args.max_degree, args.golden_dir)
    except (OSError, ValueError) as exc:
        print(f"birkhoff: golden data unreadable: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    ok = all(c.passed for c in checks)
    if args.format == "json":
        print(json.dumps({"input": {"suite": args.suite, "max_degree": args.max_degree},
                          "result": [{"suite": c.suite, "property": c.name, "passed": c.passed,
                                      "detail": c.detail} for c in checks],
                          "order": None}, ensure_ascii=False))
    else:
        for c in checks:
            print(c.line())
        print(f"{sum(c.passed for c in checks)}/{len(checks)} passed")
    return EXIT_OK if ok else EXIT_VERIFY


_COMMANDS = {"tree": _cmd_tree, "word": _cmd_word, "birkhoff": _cmd_values, "renorm": _cmd_values,
             "naive": _cmd_values, "verify": _cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"birkhoff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, PoleError, PoleOrderError) as exc:
        print(f"birkhoff: precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

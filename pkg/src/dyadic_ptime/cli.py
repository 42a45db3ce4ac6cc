"""Command-line front end.

All numbers are read and printed as exact literals over ``0 1 - .``;
``--decimal`` adds a rounded decimal marked with ``≈``.
"""

from __future__ import annotations

import argparse
import decimal
import sys
from typing import List, Optional

from .dyadic import (
    Dyadic,
    DomainError,
    MalformedLiteral,
    dyadic_from_string,
    tau_star_decode,
    tau_star_encode,
    to_string,
)
from . import costlab, modulus, polytime, witnesses
from .oracle import CanonicalOracle, JitteredOracle

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}")
    return value


def _literal(text: str) -> Dyadic:
    try:
        return dyadic_from_string(text)
    except MalformedLiteral as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _decimal(d: Dyadic, digits: int = 30) -> str:
    q = d.to_fraction()
    ctx = decimal.Context(prec=digits)
    value = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return f"≈ {value}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadic-ptime",
        description="Exact dyadic arithmetic, separation witnesses and cost scans.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="literal -> tau* bits")
    p.add_argument("literal")

    p = sub.add_parser("decode", help="tau* bits -> literal")
    p.add_argument("bits")

    p = sub.add_parser("eval", help="evaluate a witness exactly at a dyadic")
    p.add_argument("--witness", required=True, choices=list(witnesses.WITNESSES))
    p.add_argument("--at", required=True, type=_literal)
    p.add_argument("--n", type=_nat, default=16, help="precision for exp-demo only")
    p.add_argument("--decimal", action="store_true")

    p = sub.add_parser("eval-real", help="evaluate a bundled real function via oracles")
    p.add_argument("--spec", required=True, choices=list(polytime.bundled_specs()))
    p.add_argument("--x", required=True, type=_literal)
    p.add_argument("--n", required=True, type=_nat)
    p.add_argument("--oracle", default="canonical",
                   help="canonical or jitter:<seed>")
    p.add_argument("--transcript", action="store_true")
    p.add_argument("--decimal", action="store_true")

    p = sub.add_parser("modulus-check", help="check a modulus claim on [0, 2^k]")
    p.add_argument("--witness", required=True,
                   choices=[w for w, info in witnesses.WITNESSES.items() if info.function])
    p.add_argument("--k", required=True, type=_nat)
    p.add_argument("--n", required=True, type=_nat)
    p.add_argument("--claim", default="paper", help="paper, poly:<b> or expk:<c>")
    p.add_argument("--grid", type=_nat, default=None)

    p = sub.add_parser("cost-scan", help="growth scan written as CSV")
    p.add_argument("--target", required=True)
    p.add_argument("--param", required=True, help="<name>=<lo>..<hi>")
    p.add_argument("--csv", required=True)
    p.add_argument("--fix", action="append", default=[], help="<name>=<value>")
    p.add_argument("--cost", default="digit_ops",
                   choices=["digit_ops", "output_len", "oracle_depth"])
    p.add_argument("--size", default=None,
                   choices=["input_len", "int_len", "param", "k", "n", "k+n"])

    sub.add_parser("list-witnesses", help="list witness ids")
    return parser


def _parse_oracle(text: str, x: Dyadic):
    if text == "canonical":
        return CanonicalOracle(x)
    kind, _, seed = text.partition(":")
    if kind == "jitter" and seed.isdigit():
        return JitteredOracle(x, int(seed))
    raise UsageError(f"--oracle: expected canonical or jitter:<seed>, got {text!r}")


def _parse_range(text: str):
    name, sep, rng = text.partition("=")
    lo, dots, hi = rng.partition("..")
    if not (sep and dots and name and lo.isdigit() and hi.isdigit()):
        raise UsageError(f"--param: expected <name>=<lo>..<hi>, got {text!r}")
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise UsageError(f"--param: empty range {text!r}")
    return name, range(lo, hi + 1)


def _parse_fix(items: List[str]):
    fixed = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not (sep and value.isdigit()):
            raise UsageError(f"--fix: expected <name>=<value>, got {item!r}")
        fixed[name] = int(value)
    return fixed


def _cmd_eval(args, out):
    if args.witness == "exp-demo":
        value, _ = witnesses.exp_digit_demo(args.at, args.n)
    else:
        value = witnesses.get_witness(args.witness).function(args.at)
    print(to_string(value), file=out)
    if args.decimal:
        print(_decimal(value), file=out)


def _cmd_eval_real(args, out):
    spec = polytime.get_spec(args.spec)
    oracle = _parse_oracle(args.oracle, args.x)
    value, transcript = polytime.evaluate(spec, oracle, args.n)
    print(to_string(value), file=out)
    if args.decimal:
        print(_decimal(value), file=out)
    if args.transcript:
        for line in transcript.lines():
            print(line, file=out)
        out.write(transcript.to_csv())


def _cmd_modulus(args, out):
    info = witnesses.get_witness(args.witness)
    if args.claim == "paper":
        if info.documented_modulus is None:
            raise DomainError(f"no documented modulus for {args.witness}; "
                              "pass --claim poly:<b> or expk:<c>")
        claim = info.documented_modulus
    else:
        try:
            claim = modulus.parse_claim(args.claim)
        except ValueError as exc:
            raise UsageError(f"--claim: {exc}") from None
    report = modulus.check_modulus_bounded(info.function, 0, claim, args.k, args.n,
                                           args.grid)
    out.write(report.to_csv())


_DEFAULT_SIZE = {"sawtooth-depth": "k", "exp-demo": "param"}


def _cmd_scan(args, out):
    name, values = _parse_range(args.param)
    fixed = _parse_fix(args.fix)
    target = args.target
    if target not in costlab.TARGETS and not (
            target.startswith("real:") and target[5:] in polytime.bundled_specs()):
        raise UsageError(f"--target: unknown target {target!r}; known: "
                         + ", ".join(costlab.TARGETS))
    size = args.size or _DEFAULT_SIZE.get(target)
    if size is None:
        size = name if target.startswith("real:") else "input_len"
    cost = args.cost
    if target == "sawtooth-depth" and cost == "digit_ops":
        cost = "oracle_depth"
    verdict, rows = costlab.growth_scan(target, name, values, cost_axis=cost,
                                        size_axis=size, fixed=fixed)
    costlab.write_csv(rows, args.csv)
    print(f"target={target} cost={cost} size={size} "
          f"classification={verdict.classification} "
          f"slope_first={verdict.slope_first:.3f} "
          f"slope_second={verdict.slope_second:.3f}", file=out)


def _cmd_list(args, out):
    for wid, info in witnesses.WITNESSES.items():
        print(f"{wid}\t{info.description}", file=out)


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "encode":
            print(tau_star_encode(dyadic_from_string(args.literal)), file=out)
        elif args.command == "decode":
            print(to_string(tau_star_decode(args.bits)), file=out)
        elif args.command == "eval":
            _cmd_eval(args, out)
        elif args.command == "eval-real":
            _cmd_eval_real(args, out)
        elif args.command == "modulus-check":
            _cmd_modulus(args, out)
        elif args.command == "cost-scan":
            _cmd_scan(args, out)
        else:
            _cmd_list(args, out)
    except (MalformedLiteral, UsageError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (DomainError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

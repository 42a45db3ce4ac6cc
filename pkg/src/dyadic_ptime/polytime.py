"""Real functions on ``[a, oo)`` given by a modulus and a dyadic
approximator, evaluated through Cauchy oracles."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

from .dyadic import (
    ZERO,
    Dyadic,
    DomainError,
    DyadicLike,
    DyadicError,
    counting,
    dyadic,
    length,
    round_to_precision,
    to_string,
)
from .modulus import Modulus
from .oracle import CanonicalOracle, CauchyOracle, instrument
from .witnesses import precision_gated_eval, precision_gated_machine, sawtooth_eval

__all__ = [
    "InconsistentOracles",
    "DomainViolation",
    "RealFunctionSpec",
    "EvalTranscript",
    "determine_extension",
    "evaluate",
    "dyadic_restriction",
    "identity_spec",
    "affine_spec",
    "square_spec",
    "precision_gated_spec",
    "sawtooth_ext_spec",
    "bundled_specs",
    "get_spec",
]

QUARTER = Dyadic(1, -2)


class InconsistentOracles(DyadicError):
    pass


class DomainViolation(DomainError):
    pass


Approximator = Callable[[Dyadic, int], Dyadic]


@dataclass(frozen=True)
class RealFunctionSpec:
    """``f`` on ``[a, oo)`` as (modulus, approximator, left endpoint).

    ``exact`` is the true value at dyadics when it is finitely computable
    (used by tests and cost scans); ``machine`` is an optional dedicated
    oracle machine.  ``cost`` documents the approximator's polynomial.
    """

    id: str
    modulus: Modulus
    approximator: Approximator
    left_endpoint: Dyadic = ZERO
    exact: Optional[Callable[[Dyadic], Dyadic]] = None
    machine: Optional[Callable[[CauchyOracle, int], Dyadic]] = None
    cost: str = ""
    description: str = ""

    @property
    def poly(self) -> bool:
        return self.modulus.poly

    def psi(self, d: Dyadic, n: int) -> Dyadic:
        if d < self.left_endpoint:
            raise DomainViolation(f"{d} lies left of the domain [{self.left_endpoint}, oo)")
        return self.approximator(d, n)


@dataclass
class EvalTranscript:
    spec_id: str
    n: int
    d1: Dyadic
    d2: Dyadic
    k: int
    alpha: int
    d: Dyadic
    output: Dyadic
    cost: "CostReport" = None
    x: Optional[Dyadic] = None

    CSV_HEADER = ("spec_id", "x_literal", "n", "k", "alpha", "query_depth",
                  "digit_ops", "output_literal")

    def csv_row(self):
        return [self.spec_id, "" if self.x is None else to_string(self.x),
                str(self.n), str(self.k), str(self.alpha),
                str(self.cost.oracle_depth), str(self.cost.digit_ops),
                to_string(self.output)]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(self.CSV_HEADER)
        writer.writerow(self.csv_row())
        return buf.getvalue()

    def lines(self):
        yield f"d1 = {to_string(self.d1)}"
        yield f"d2 = {to_string(self.d2)}"
        yield f"k = {self.k}"
        yield f"alpha = {self.alpha}"
        yield f"d = {to_string(self.d)}"
        yield f"psi(d, {self.n + 1}) = {to_string(self.output)}"
        yield f"query_depth = {self.cost.oracle_depth}"
        yield f"oracle_count = {self.cost.oracle_count}"
        yield f"digit_ops = {self.cost.digit_ops}"


def determine_extension(d1: Dyadic, d2: Dyadic) -> int:
    """Least ``k`` with ``d2 + 1/4 <= (d1 - 1/4) + 2**k``.

    With ``d1``, ``d2`` within 1/4 of ``a`` and ``x`` this guarantees
    ``x in [a, a + 2**k]``, overshooting the least such ``k`` by at most one.
    """
    top = d2 + QUARTER
    base = d1 - QUARTER
    if top < base:
        raise InconsistentOracles(
            f"approximations {d1} (for a) and {d2} (for x) contradict x >= a")
    k = 0
    while top > base + Dyadic.pow2(k):
        k += 1
    return k


def evaluate(spec: RealFunctionSpec, phi_x: CauchyOracle, n: int,
             phi_a: Optional[CauchyOracle] = None):
    """Approximate ``f(x)`` within ``2**-n`` from an oracle for ``x``.

    Returns ``(output, transcript)``.  The query ``d = phi_x(alpha)`` is
    clamped into ``[a, a + 2**k]``; that only moves it toward ``x``.
    """
    from .costlab import CostReport

    if n < 0:
        raise ValueError("precision must be a natural number")
    a = spec.left_endpoint
    if phi_a is None:
        phi_a = CanonicalOracle(a)
    ox = instrument(phi_x)
    with counting() as tally:
        d1 = phi_a(2)
        d2 = ox(2)
        k = determine_extension(d1, d2)
        alpha = spec.modulus(k, n + 1)
        d = ox(alpha)
        if d < a:
            d = a
        else:
            right = a + Dyadic.pow2(k)
            if d > right:
                d = right
        e = spec.psi(d, n + 1)
        out_len = length(e)
    cost = CostReport(input_len=0, output_len=out_len,
                      digit_ops=tally.ops + out_len // 2,
                      oracle_depth=ox.max_depth, oracle_count=ox.count, k=k, n=n)
    x = getattr(phi_x, "x", None)
    return e, EvalTranscript(spec.id, n, d1, d2, k, alpha, d, e, cost, x)


def dyadic_restriction(spec: RealFunctionSpec, d: DyadicLike, n: int) -> Dyadic:
    """``psi(d, n)``: an n-approximation of ``f`` at a dyadic point."""
    return spec.psi(dyadic(d), n)


# -- bundled specs -------------------------------------------------------------

def identity_spec() -> RealFunctionSpec:
    return RealFunctionSpec(
        "identity", Modulus.custom(lambda k, n: n, "n", poly=True),
        lambda d, n: d, exact=lambda d: d,
        cost="psi copies its input: O(len(d))",
        description="x -> x on [0, oo)")


def affine_spec(c: DyadicLike = 3, e: DyadicLike = Dyadic(-1, -1)) -> RealFunctionSpec:
    """``x -> c*x + e``; modulus ``n + ceil(log2 |c|)``."""
    c, e = dyadic(c), dyadic(e)
    mag = abs(c)
    lip = 0
    while Dyadic.pow2(lip) < mag:
        lip += 1

    def psi(d, n):
        return round_to_precision(c * d + e, n + 1)

    return RealFunctionSpec(
        "affine", Modulus.custom(lambda k, n: n + lip, f"n+{lip}", poly=True),
        psi, exact=lambda d: c * d + e,
        cost="one product and one sum: O((len(d)+n)^2)",
        description=f"x -> {to_string(c)}*x + {to_string(e)} on [0, oo)")


def square_spec() -> RealFunctionSpec:
    # |x^2 - y^2| <= 2^(k+1) |x - y| on [0, 2^k]
    return RealFunctionSpec(
        "square", Modulus.custom(lambda k, n: n + k + 1, "n+k+1", poly=True),
        lambda d, n: round_to_precision(d * d, n + 1), exact=lambda d: d * d,
        cost="one product: O(len(d)^2)",
        description="x -> x^2 on [0, oo)")


def precision_gated_spec() -> RealFunctionSpec:
    # slope of each tent is 2 * peak <= 2
    def psi(d, n):
        return precision_gated_machine(CanonicalOracle(d), n)

    return RealFunctionSpec(
        "precision-gated", Modulus.custom(lambda k, n: n + 1, "n+1", poly=True),
        psi, exact=precision_gated_eval, machine=precision_gated_machine,
        cost="machine arithmetic on O(n + k)-bit numbers",
        description="tents with peak 1/2 + 2^-(2^k)")


def sawtooth_ext_spec() -> RealFunctionSpec:
    return RealFunctionSpec(
        "sawtooth-ext", Modulus.affine_exp(3), lambda d, n: sawtooth_eval(d),
        exact=sawtooth_eval,
        cost="psi exact and poly-time on dyadics; modulus is not polynomial",
        description="real extension of the sawtooth witness (outside P_R)")


def bundled_specs() -> Dict[str, RealFunctionSpec]:
    specs = [identity_spec(), affine_spec(), square_spec(), precision_gated_spec(),
             sawtooth_ext_spec()]
    return {s.id: s for s in specs}


_BUNDLED = bundled_specs()


def get_spec(spec_id: str) -> RealFunctionSpec:
    try:
        return _BUNDLED[spec_id]
    except KeyError:
        raise KeyError(f"unknown spec {spec_id!r}; known: {', '.join(_BUNDLED)}") from None

"""Cost measurement and growth classification.

Cost model: ``digit_ops`` counts operations on 64-bit limbs of the
mantissas involved (every dyadic helper charges its share) plus one per
emitted output symbol.  Wall-clock time is never used.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .dyadic import (
    ONE,
    ZERO,
    Dyadic,
    DomainError,
    DyadicLike,
    counting,
    dyadic,
    floor,
    length,
)
from .oracle import CanonicalOracle, CauchyOracle, ExactValue, exact_value, instrument
from .pwl import PiecewiseLinear, ceil_log2, pieces
from . import polytime, witnesses

__all__ = [
    "CostReport",
    "GrowthVerdict",
    "CSV_HEADER",
    "measure_dyadic",
    "measure_real",
    "extension_of",
    "scan_point",
    "required_depth",
    "classify",
    "growth_scan",
    "grid_scan",
    "write_csv",
    "TARGETS",
]

CSV_HEADER = ("target", "param_name", "param_value", "input_len", "k", "n",
              "output_len", "digit_ops", "oracle_depth", "oracle_count")

POLY = "poly"
SUPER_POLY = "super-poly"


@dataclass
class CostReport:
    input_len: int = 0
    output_len: int = 0
    digit_ops: int = 0
    oracle_depth: int = 0
    oracle_count: int = 0
    k: Optional[int] = None
    n: Optional[int] = None
    output_int_len: Optional[int] = None

    def __post_init__(self):
        for name in ("input_len", "output_len", "digit_ops", "oracle_depth",
                     "oracle_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def measure_dyadic(witness_id: str, d: DyadicLike) -> CostReport:
    info = witnesses.get_witness(witness_id)
    if info.function is None:
        raise ValueError(f"{witness_id} is not a dyadic witness")
    d = dyadic(d)
    if d < info.function.domain_start:
        raise DomainError(f"{witness_id} is undefined at {d}")
    with counting() as tally:
        value = info.function.evaluate(d)
    out_len = length(value)
    return CostReport(input_len=length(d), output_len=out_len,
                      digit_ops=tally.ops + out_len // 2,
                      output_int_len=max(1, floor(value).bit_length()))


def extension_of(x: Dyadic, a: Dyadic = ZERO) -> int:
    """``min {j : x in [a, a + 2**j]}``."""
    if x < a:
        raise DomainError(f"{x} lies left of {a}")
    k = 0
    while x > a + Dyadic.pow2(k):
        k += 1
    return k


def measure_real(spec_id: str, x: ExactValue, n: int,
                 oracle: Optional[CauchyOracle] = None) -> CostReport:
    """Cost of computing ``f(x)`` within ``2**-n``, keyed by ``(k, n)``.

    Specs carrying a dedicated oracle machine are measured on it; the rest
    go through :func:`polytime.evaluate`.
    """
    spec = polytime.get_spec(spec_id)
    xv = exact_value(x)
    k = extension_of(xv, spec.left_endpoint)
    phi = oracle if oracle is not None else CanonicalOracle(xv)
    if spec.machine is not None:
        ox = instrument(phi)
        with counting() as tally:
            out = spec.machine(ox, n)
        out_len = length(out)
        return CostReport(input_len=k + n, output_len=out_len,
                          digit_ops=tally.ops + out_len // 2,
                          oracle_depth=ox.max_depth, oracle_count=ox.count,
                          k=k, n=n)
    _, transcript = polytime.evaluate(spec, phi, n)
    cost = transcript.cost
    cost.input_len = k + n
    cost.k = k
    return cost


def required_depth(f: PiecewiseLinear, x: DyadicLike, n: int) -> int:
    """Least ``D`` such that every ``y`` within ``2**-D`` of ``x`` has
    ``|f(y) - f(x)| <= 2**(1-n)``.

    No evaluator meeting accuracy ``2**-n`` can stop querying above this
    depth: the answers it saw would also be valid for some such ``y``.
    """
    x = dyadic(x)
    lo = max(x - ONE, f.domain_start)
    hi = x + ONE
    nodes = f.nodes(lo, hi)
    fx = f.evaluate(x)
    allowed = Dyadic.pow2(1 - n)

    def local_osc(h: Dyadic) -> Dyadic:
        left, right = max(x - h, lo), x + h
        best = max(abs(f.evaluate(left) - fx), abs(f.evaluate(right) - fx))
        for y, fy in nodes:
            if left <= y <= right:
                best = max(best, abs(fy - fx))
        return best

    steep = max((abs(s) for _, _, s in pieces(nodes)), default=0)
    top = 0 if steep == 0 else max(0, n + ceil_log2(steep))
    lo_d, hi_d = 0, top
    while lo_d < hi_d:
        mid = (lo_d + hi_d) // 2
        if local_osc(Dyadic.pow2(-mid)) <= allowed:
            hi_d = mid
        else:
            lo_d = mid + 1
    return lo_d


# -- classification ------------------------------------------------------------

@dataclass
class GrowthVerdict:
    series: List[Tuple[int, int]]
    classification: str
    degree: float
    slope_first: float
    slope_second: float
    ratio_increasing: bool

    @property
    def poly(self) -> bool:
        return self.classification == POLY


def _slope(points: Sequence[Tuple[float, float]]) -> float:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return statistics.linear_regression(xs, ys).slope


def classify(series: Iterable[Tuple[int, int]], b: int = 6) -> GrowthVerdict:
    """Poly vs super-poly from a (size, cost) series.

    The series is reduced to its worst case per size.  Log-cost is fit
    against log-size by least squares on the lower and upper halves; the
    verdict is super-poly when the upper slope exceeds the lower by more
    than 0.5, or when ``cost / size**b`` increases strictly along the whole
    series.  ``degree`` is the upper-half slope.
    """
    worst: Dict[int, int] = {}
    for size, cost in series:
        if size <= 0:
            continue
        worst[size] = max(worst.get(size, 0), cost)
    pts = sorted(worst.items())
    if len(pts) < 3:
        raise ValueError("need at least three distinct positive sizes")
    logs = [(math.log(s), math.log(max(c, 1))) for s, c in pts]
    h = max(2, len(logs) // 2)
    s1 = _slope(logs[:h])
    s2 = _slope(logs[-h:])
    ratios = [max(c, 1) / s ** b for s, c in pts]
    increasing = all(r2 > r1 for r1, r2 in zip(ratios, ratios[1:]))
    label = SUPER_POLY if (s2 - s1 > 0.5 or increasing) else POLY
    return GrowthVerdict(pts, label, s2, s1, s2, increasing)


# -- scans ---------------------------------------------------------------------

def _real_point(k: int) -> Dyadic:
    # midpoint of a tent whose integer part has bit-length k; extension is k
    if k == 0:
        return Dyadic(1, -1)
    return Dyadic(1 << (k - 1)) + Dyadic(1, -1)


TARGETS = {
    "sawtooth": "r: sawtooth at its apex d_r",
    "slow-decay": "i: slow-decay at d_i = 1 - 2^-i",
    "combined": "r: combined witness at d_r",
    "precision-gated": "b: precision-gated at j + 1/2 with j = 2^b - 1",
    "sawtooth-depth": "r: oracle depth forced at d_r for accuracy 2^-n (n fixed, default 2)",
    "exp-demo": "x: e^x demo at integer x (n fixed, default 8)",
    "real:<spec>": "k or n: measure_real at x with extension k (other fixed)",
}


def scan_point(target: str, name: str, value: int,
               fixed: Optional[Dict[str, int]] = None) -> dict:
    """One CSV row for ``target`` at ``name = value``."""
    fixed = dict(fixed or {})
    row = {"target": target, "param_name": name, "param_value": value,
           "k": "", "n": "", "oracle_depth": 0, "oracle_count": 0}
    if target in ("sawtooth", "combined", "slow-decay", "precision-gated"):
        if target == "slow-decay":
            point = witnesses.slow_decay_point(value)
        elif target == "precision-gated":
            point = Dyadic((1 << value) - 1) + Dyadic(1, -1)
        else:
            point = witnesses.sawtooth_peak(value)
        rep = measure_dyadic(target, point)
        row.update(input_len=rep.input_len, output_len=rep.output_len,
                   digit_ops=rep.digit_ops,
                   int_len=length(Dyadic(floor(point))))
        if target in ("sawtooth", "combined"):
            row["k"] = value.bit_length()
        return row
    if target == "sawtooth-depth":
        n = fixed.get("n", 2)
        point = witnesses.sawtooth_peak(value)
        depth = required_depth(witnesses.sawtooth, point, n)
        row.update(input_len=length(point), k=value.bit_length(), n=n,
                   output_len=0, digit_ops=depth, oracle_depth=depth,
                   oracle_count=1)
        return row
    if target == "exp-demo":
        n = fixed.get("n", 8)
        _, rep = witnesses.exp_digit_demo(value, n)
        row.update(input_len=rep.input_len, n=n, output_len=rep.output_len,
                   digit_ops=rep.digit_ops, int_len=rep.output_int_len)
        return row
    if target.startswith("real:"):
        spec_id = target[5:]
        if name not in ("k", "n"):
            raise ValueError("real targets scan k or n")
        k = value if name == "k" else fixed.get("k", 4)
        n = value if name == "n" else fixed.get("n", 16)
        rep = measure_real(spec_id, _real_point(k), n)
        row.update(input_len=rep.input_len, k=rep.k, n=n, output_len=rep.output_len,
                   digit_ops=rep.digit_ops, oracle_depth=rep.oracle_depth,
                   oracle_count=rep.oracle_count)
        return row
    raise KeyError(f"unknown scan target {target!r}")


_SIZE = {
    "input_len": lambda row: row["input_len"],
    "int_len": lambda row: row["int_len"],
    "param": lambda row: row["param_value"],
    "k": lambda row: row["k"],
    "n": lambda row: row["n"],
    "k+n": lambda row: row["k"] + row["n"],
}


def growth_scan(target: str, name: str, values: Iterable[int],
                cost_axis: str = "digit_ops", size_axis: str = "input_len",
                fixed: Optional[Dict[str, int]] = None):
    """Measure ``target`` over ``values`` and classify ``cost_axis`` against
    ``size_axis``.  Returns ``(GrowthVerdict, rows)``; rows follow
    :data:`CSV_HEADER` ordered by parameter."""
    rows = [scan_point(target, name, v, fixed) for v in sorted(values)]
    series = [(_SIZE[size_axis](r), r[cost_axis]) for r in rows]
    return classify(series), rows


def grid_scan(spec_id: str, ks: Iterable[int], ns: Iterable[int],
              cost_axis: str = "digit_ops"):
    """``measure_real`` over a (k, n) grid, classified along ``k + n``,
    along ``k`` at the largest ``n`` and along ``n`` at the largest ``k``."""
    ks, ns = sorted(ks), sorted(ns)
    rows = [scan_point(f"real:{spec_id}", "k", k, {"n": n}) for n in ns for k in ks]
    by_sum = classify((r["k"] + r["n"], r[cost_axis]) for r in rows)
    by_k = classify((r["k"], r[cost_axis]) for r in rows if r["n"] == ns[-1])
    by_n = classify((r["n"], r[cost_axis]) for r in rows if r["k"] == ks[-1])
    return {"k+n": by_sum, "k": by_k, "n": by_n}, rows


def write_csv(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

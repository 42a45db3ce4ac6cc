"""Moduli of continuity: representation, grid/vertex checking, exact
minimal moduli for piecewise-linear functions."""

from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

from .dyadic import Dyadic, DomainError, DyadicLike, dyadic, to_string
from .pwl import Node, PiecewiseLinear, ceil_log2, pieces

__all__ = [
    "Modulus",
    "ModulusReport",
    "EmptyStrip",
    "check_modulus_bounded",
    "check_modulus_open",
    "min_modulus_pwl",
    "oscillation",
    "slope_modulus_bound",
    "steepest_piece",
    "pair_violates",
    "parse_claim",
]

VERIFIED = "verified-on-grid"
REFUTED = "refuted"

# plain callables are grid-checked up to this many (x, y) evaluations
MAX_GRID_PAIRS = 1 << 20


class EmptyStrip(DomainError):
    pass


class Modulus:
    """A function ``m(k, n)`` made monotone in both arguments.

    ``form`` is ``"poly"`` for ``(k+n)**b``, ``"affine_exp"`` for
    ``c*2**k + n`` and ``"custom"`` otherwise; custom moduli are wrapped in
    running maxima.
    """

    def __init__(self, fn: Callable[[int, int], int], form: str = "custom",
                 param: Optional[int] = None, label: Optional[str] = None,
                 poly: Optional[bool] = None) -> None:
        self.form = form
        self.param = param
        self.label = label or form
        self.poly = (form == "poly") if poly is None else poly
        self._fn = fn
        if form == "custom":
            self._eval = lru_cache(maxsize=None)(self._running_max)
        else:
            self._eval = fn

    @classmethod
    def poly_form(cls, b: int) -> Modulus:
        return cls(lambda k, n: (k + n) ** b, "poly", b, f"poly:{b}")

    @classmethod
    def affine_exp(cls, c: int) -> Modulus:
        return cls(lambda k, n: c * (1 << k) + n, "affine_exp", c, f"expk:{c}",
                   poly=False)

    @classmethod
    def table(cls, values: dict, label: str = "table") -> Modulus:
        def lookup(k, n):
            return max((v for (kk, nn), v in values.items() if kk <= k and nn <= n),
                       default=0)
        return cls(lookup, "table", None, label)

    @classmethod
    def custom(cls, fn: Callable[[int, int], int], label: str = "custom",
               poly: bool = False) -> Modulus:
        return cls(fn, "custom", None, label, poly=poly)

    def _running_max(self, k: int, n: int) -> int:
        best = max(0, int(self._fn(k, n)))
        if k > 0:
            best = max(best, self._eval(k - 1, n))
        if n > 0:
            best = max(best, self._eval(k, n - 1))
        return best

    def __call__(self, k: int, n: int) -> int:
        if k < 0 or n < 0:
            raise ValueError("modulus arguments are natural numbers")
        return self._eval(k, n)

    def __repr__(self) -> str:
        return f"Modulus({self.label})"


def parse_claim(text: str) -> Modulus:
    """``poly:<b>`` or ``expk:<c>``."""
    kind, _, arg = text.partition(":")
    try:
        value = int(arg)
    except ValueError:
        raise ValueError(f"bad modulus claim {text!r}") from None
    if value < 0:
        raise ValueError(f"bad modulus claim {text!r}")
    if kind == "poly":
        return Modulus.poly_form(value)
    if kind == "expk":
        return Modulus.affine_exp(value)
    raise ValueError(f"bad modulus claim {text!r}")


@dataclass(frozen=True)
class ModulusReport:
    verdict: str
    k: int
    n: int
    m: int
    pairs_checked: int
    witness: Optional[Tuple[Dyadic, Dyadic, Dyadic, Dyadic]] = None
    exact: bool = False

    CSV_HEADER = ("verdict", "k", "n", "m", "witness_x", "witness_y", "gap", "bound")

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED

    def csv_row(self) -> List[str]:
        w = ["", "", "", ""]
        if self.witness is not None:
            w = [to_string(v) for v in self.witness]
        return [self.verdict, str(self.k), str(self.n), str(self.m), *w]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(self.CSV_HEADER)
        writer.writerow(self.csv_row())
        return buf.getvalue()


def pair_violates(f: Callable[[Dyadic], Dyadic], x: DyadicLike, y: DyadicLike,
                  m: int, n: int) -> bool:
    """Replay one pair: close within ``2**-m`` yet apart by more than ``2**-n``."""
    x, y = dyadic(x), dyadic(y)
    return abs(x - y) <= Dyadic.pow2(-m) and abs(f(x) - f(y)) > Dyadic.pow2(-n)


# -- candidate pairs --------------------------------------------------------

def _vertex_pairs(f, nodes: Sequence[Node], h: Dyadic):
    """Pairs at which ``sup |f(x)-f(y)|`` over ``|x-y| <= h`` is attained
    for f linear between nodes: node/node within h, and node against the
    point h away (clipped to the interval)."""
    xs = [x for x, _ in nodes]
    lo, hi = xs[0], xs[-1]
    keys = [x.to_fraction() for x in xs]
    hf = h.to_fraction()
    for i, (b, fb) in enumerate(nodes):
        stop = bisect.bisect_right(keys, keys[i] + hf)
        for y, fy in nodes[i + 1:stop]:
            yield b, fb, y, fy
        right = b + h
        if right < hi:
            yield b, fb, right, f(right)
        left = b - h
        if left > lo:
            yield left, f(left), b, fb


def oscillation(f, nodes: Sequence[Node], h: Dyadic) -> Fraction:
    """Exact ``sup {|f(x)-f(y)| : |x-y| <= h}`` over the node span."""
    best = Fraction(0)
    for _, fx, _, fy in _vertex_pairs(f, nodes, h):
        gap = abs((fx - fy).to_fraction())
        if gap > best:
            best = gap
    return best


def _sweep(f, nodes: Sequence[Node], h: Dyadic, bound: Dyadic):
    """Largest violating pair (leftmost on ties) and number of pairs."""
    worst = None
    count = 0
    for x, fx, y, fy in _vertex_pairs(f, nodes, h):
        count += 1
        gap = abs(fx - fy)
        if gap > bound and (worst is None or gap > worst[2]):
            worst = (x, y, gap, bound)
    return worst, count


def _grid_sweep(f, lo: Dyadic, hi: Dyadic, h: Dyadic, bound: Dyadic,
                grid_exp: int):
    span = (hi - lo).shift(grid_exp)
    points = int(span.to_fraction()) + 1
    reach = max(0, int(h.shift(grid_exp).to_fraction()))
    if points * max(reach, 1) > MAX_GRID_PAIRS:
        raise ValueError(
            f"grid of {points} points x {reach} offsets is too large; "
            "use a function that exposes breakpoints or a coarser grid")
    values = [f(lo + Dyadic(i, -grid_exp)) for i in range(points)]
    worst = None
    count = 0
    for i in range(points):
        for t in range(1, reach + 1):
            if i + t >= points:
                break
            count += 1
            gap = abs(values[i] - values[i + t])
            if gap > bound and (worst is None or gap > worst[2]):
                worst = (lo + Dyadic(i, -grid_exp), lo + Dyadic(i + t, -grid_exp),
                         gap, bound)
    return worst, count


def _check(f, lo: Dyadic, hi: Dyadic, m: Modulus, k: int, n: int,
           grid_exp: Optional[int]) -> ModulusReport:
    mk = m(k, n)
    h = Dyadic.pow2(-mk)
    bound = Dyadic.pow2(-n)
    if grid_exp is None:
        grid_exp = mk + 2
    if isinstance(f, PiecewiseLinear):
        exact = not f.accumulates(lo, hi)
        nodes = f.nodes(lo, hi, max_index=max(grid_exp, mk) + 1)
        worst, count = _sweep(f, nodes, h, bound)
    else:
        exact = False
        worst, count = _grid_sweep(f, lo, hi, h, bound, grid_exp)
    verdict = REFUTED if worst is not None else VERIFIED
    return ModulusReport(verdict, k, n, mk, count, worst, exact and worst is None)


def check_modulus_bounded(f, a: DyadicLike, m: Modulus, k: int, n: int,
                          grid_exp: Optional[int] = None) -> ModulusReport:
    """Check ``|x-y| <= 2**-m(k,n) => |f(x)-f(y)| <= 2**-n`` on
    ``[a, a + 2**k]``.

    Functions exposing breakpoints are checked at every extremal
    configuration, which is exact for piecewise-linear ``f`` without an
    accumulation point in the window; plain callables are checked on the
    dyadic grid of spacing ``2**-grid_exp``.  A refutation is always a
    genuine counterexample.
    """
    a = dyadic(a)
    return _check(f, a, a + Dyadic.pow2(k), m, k, n, grid_exp)


def check_modulus_open(f, a: DyadicLike, b: Optional[DyadicLike], m: Modulus,
                       k: int, n: int, grid_exp: Optional[int] = None) -> ModulusReport:
    """Same check over the strip ``[a + 2**-k, b - 2**-k]``; ``b=None``
    stands for an unbounded right end, capped at ``a + 2**k``."""
    a = dyadic(a)
    lo = a + Dyadic.pow2(-k)
    hi = a + Dyadic.pow2(k) if b is None else dyadic(b) - Dyadic.pow2(-k)
    if not lo < hi:
        raise EmptyStrip(f"strip [{lo}, {hi}] is empty")
    return _check(f, lo, hi, m, k, n, grid_exp)


# -- exact minimal moduli ---------------------------------------------------

def _pwl_nodes(f: PiecewiseLinear, lo: DyadicLike, hi: DyadicLike) -> List[Node]:
    lo, hi = dyadic(lo), dyadic(hi)
    if f.accumulates(lo, hi):
        raise DomainError(f"{f.id} has infinitely many breakpoints in [{lo}, {hi}]")
    return f.nodes(lo, hi)


def steepest_piece(f: PiecewiseLinear, lo: DyadicLike, hi: DyadicLike
                   ) -> Tuple[Dyadic, Dyadic, Fraction]:
    """Leftmost piece of maximal absolute slope."""
    best = None
    for left, right, s in pieces(_pwl_nodes(f, lo, hi)):
        if best is None or abs(s) > abs(best[2]):
            best = (left, right, s)
    return best


def slope_modulus_bound(f: PiecewiseLinear, lo: DyadicLike, hi: DyadicLike,
                        n: int) -> int:
    """``n + ceil(log2 s)`` for the steepest slope ``s``: always a modulus."""
    s = abs(steepest_piece(f, lo, hi)[2])
    if s == 0:
        return 0
    return max(0, n + ceil_log2(s))


def min_modulus_pwl(f: PiecewiseLinear, lo: DyadicLike, hi: DyadicLike, n: int) -> int:
    """Least ``M`` with ``|x-y| <= 2**-M  =>  |f(x)-f(y)| <= 2**-n`` on
    ``[lo, hi]``.

    Starts from the slope bound and lowers it while the exact
    oscillation at spacing ``2**-M`` still fits; pieces narrower than the
    spacing are what make the lowering possible.
    """
    nodes = _pwl_nodes(f, lo, hi)
    bound = Fraction(1, 1 << n)
    top = slope_modulus_bound(f, lo, hi, n)

    def fits(M: int) -> bool:
        return oscillation(f, nodes, Dyadic.pow2(-M)) <= bound

    lo_m, hi_m = 0, top
    while lo_m < hi_m:
        mid = (lo_m + hi_m) // 2
        if fits(mid):
            hi_m = mid
        else:
            lo_m = mid + 1
    return lo_m

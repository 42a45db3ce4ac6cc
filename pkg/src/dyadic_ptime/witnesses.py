"""The separation witnesses, evaluated exactly on dyadics.

``sawtooth``
    Per unit block ``[r, r+1]`` rises through ``d_j = r + eps_j`` to the
    apex ``2**r`` and falls back symmetrically; poly-time over dyadics
    but its modulus grows like ``3 * 2**k`` in the extension argument.
``slow-decay``
    Decreasing on ``[0, 1]`` through ``d_i = 1 - 2**-i`` with values
    ``1 / log2(alpha(i))``; slopes on the rare steps are doubly
    exponential, so no modulus is polynomial in the precision argument.
``precision-gated``
    Tent on every ``[j, j+1]`` with peak ``1/2 + 2**-(2**k)``; cheap as a
    real function, exponentially long outputs as a dyadic function.
``combined``
    Pointwise sum of the first two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

from .dyadic import (
    HALF,
    ONE,
    ZERO,
    Dyadic,
    DomainError,
    DyadicLike,
    charge,
    counting,
    dyadic,
    floor,
    length,
    limbs,
)
from .modulus import Modulus
from .oracle import CauchyOracle
from .pwl import Node, PiecewiseLinear, _with_ends

__all__ = [
    "epsilon",
    "alpha",
    "Sawtooth",
    "SlowDecay",
    "PrecisionGated",
    "Combined",
    "sawtooth",
    "slow_decay",
    "precision_gated",
    "combined",
    "sawtooth_eval",
    "slow_decay_eval",
    "precision_gated_eval",
    "combined_eval",
    "sawtooth_modulus",
    "sawtooth_slope",
    "sawtooth_peak",
    "slow_decay_point",
    "slow_decay_slope",
    "precision_gated_machine",
    "MachineRun",
    "exp_digit_demo",
    "WITNESSES",
    "get_witness",
]


def epsilon(a: int) -> Dyadic:
    """``0.(01)^a`` in binary, i.e. ``(4**a - 1) / (3 * 4**a)``."""
    if a < 0:
        raise ValueError("repetition count must be a natural number")
    return Dyadic(((1 << (2 * a)) - 1) // 3, -2 * a)


def alpha(i: int) -> int:
    """Largest ``j <= i`` of the form ``2**(2**m)``; 0 for ``i < 2``."""
    if i < 2:
        return 0
    return 1 << (1 << _tower_exp(i))


def _tower_exp(i: int) -> int:
    # m with alpha(i) = 2**(2**m), for i >= 2
    return (i.bit_length() - 1).bit_length() - 1


# -- sawtooth ----------------------------------------------------------------

class Sawtooth(PiecewiseLinear):
    """``growth(r)`` rising steps in block ``r``; identity by default."""

    id = "sawtooth"

    def __init__(self, growth: Optional[Callable[[int], int]] = None) -> None:
        self.growth = growth

    def steps(self, r: int) -> int:
        return r if self.growth is None else self.growth(r)

    @staticmethod
    def _level(j: int) -> Dyadic:
        return ZERO if j == 0 else Dyadic.pow2(j)

    def _ascend(self, t: Dyadic, top: int) -> Dyadic:
        # largest j in [0, top] with eps_j <= t, then interpolate
        lo, hi = 0, top
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if epsilon(mid) <= t:
                lo = mid
            else:
                hi = mid - 1
        j = lo
        if j == top:
            return self._level(j)
        rise = self._level(j + 1) - self._level(j)
        return self._level(j) + ((t - epsilon(j)) * rise).shift(2 * (j + 1))

    def evaluate(self, d: Dyadic) -> Dyadic:
        r = floor(d)
        t = d - r
        R = self.steps(r)
        if t.is_zero() or R == 0:
            return ZERO
        # Compare against eps_J with 2J > frac_bits(t) + 2 first: that
        # decides t against eps_R without building the 2R-bit breakpoints.
        J = min(R, t.frac_bits() // 2 + 2)
        if J < R:
            eps_j = epsilon(J)
            if t < eps_j:
                return self._ascend(t, J)
            if t > eps_j.shift(1):
                return ZERO
        else:
            eps_r = epsilon(R)
            if t <= eps_r:
                return self._ascend(t, R)
            if t >= eps_r.shift(1):
                return ZERO
        # falling side mirrors the rising side about the apex d_R = e_R
        return self._ascend(epsilon(R).shift(1) - t, R)

    def block_index(self, d: Dyadic) -> int:
        return floor(d)

    def block_nodes(self, block: int) -> List[Node]:
        r = Dyadic(block)
        R = self.steps(block)
        out: List[Node] = [(r, ZERO)]
        if R == 0:
            return out
        top = epsilon(R).shift(1)
        for j in range(1, R + 1):
            out.append((r + epsilon(j), self._level(j)))
        for j in range(R - 1, -1, -1):
            out.append((r + top - epsilon(j), self._level(j)))
        return out

    def d(self, r: int, j: int) -> Dyadic:
        return Dyadic(r) + epsilon(j)

    def e(self, r: int, j: int) -> Dyadic:
        return Dyadic(r) + epsilon(self.steps(r)).shift(1) - epsilon(j)


def sawtooth_modulus() -> Modulus:
    return Modulus.affine_exp(3)


def sawtooth_slope(j: int) -> Dyadic:
    """Closed-form slope on ``[d_{j-1}, d_j]``: ``2**(3j-1)`` for ``j >= 2``;
    the first step rises from 0 and has slope 8."""
    if j < 1:
        raise ValueError("step index starts at 1")
    return Dyadic(8) if j == 1 else Dyadic.pow2(3 * j - 1)


def sawtooth_peak(r: int) -> Dyadic:
    """The apex ``d_r = r + eps_r`` of block ``r``."""
    return Dyadic(r) + epsilon(r)


# -- slow decay ----------------------------------------------------------------

def slow_decay_point(i: int) -> Dyadic:
    """``d_i = 1 - 2**-i``."""
    return ONE - Dyadic.pow2(-i)


def _slow_level(i: int) -> Dyadic:
    if i < 2:
        return ONE
    return Dyadic.pow2(-_tower_exp(i))


def slow_decay_slope(j: int) -> Dyadic:
    """Closed-form slope magnitude on ``l_i``, ``i = 2**(2**j)``."""
    return Dyadic.pow2((1 << (1 << j)) - j)


class SlowDecay(PiecewiseLinear):
    id = "slow-decay"

    @staticmethod
    def index(d: Dyadic) -> int:
        """``i`` with ``d_i <= d < d_{i+1}``, for ``0 <= d < 1``."""
        gap = ONE - d
        return -gap.exponent - (gap.mantissa - 1).bit_length()

    def evaluate(self, d: Dyadic) -> Dyadic:
        if d >= ONE:
            return ZERO
        i = self.index(d)
        left = slow_decay_point(i)
        lv = _slow_level(i)
        if d == left:
            return lv
        drop = _slow_level(i + 1) - lv
        return lv + ((d - left) * drop).shift(i + 1)

    def block_index(self, d: Dyadic) -> int:
        # block b >= 1 is l_b = [d_{b-1}, d_b]; block 0 is the flat [1, oo)
        return 0 if d >= ONE else self.index(d) + 1

    def block_nodes(self, block: int) -> List[Node]:
        if block == 0:
            return [(ONE, ZERO)]
        return [(slow_decay_point(i), _slow_level(i)) for i in (block - 1, block)]

    def accumulates(self, lo: Dyadic, hi: Dyadic) -> bool:
        return lo < ONE <= hi

    def nodes(self, lo: DyadicLike, hi: DyadicLike,
              max_index: Optional[int] = None) -> List[Node]:
        lo, hi = dyadic(lo), dyadic(hi)
        if lo > hi:
            raise ValueError("empty interval")
        if lo < ZERO:
            raise DomainError("slow-decay is undefined below 0")
        if lo >= ONE:
            return _with_ends(self, lo, hi, [])
        if hi < ONE:
            last = self.index(hi) + 1
        elif max_index is None:
            raise DomainError("breakpoints accumulate at 1; pass max_index")
        else:
            last = max_index
        first = self.index(lo)
        inner = [(slow_decay_point(i), _slow_level(i)) for i in range(first, last + 1)]
        inner = [p for p in inner if lo < p[0] < hi]
        if lo < ONE < hi:
            inner.append((ONE, ZERO))
        return _with_ends(self, lo, hi, inner)


# -- precision gated -----------------------------------------------------------

def _gated_peak(j: int) -> Dyadic:
    # value at j + 1/2: 1/2 + 2**-(2**k), k = min{i : j + 1/2 < 2**i}
    return HALF + Dyadic.pow2(-(1 << j.bit_length()))


class PrecisionGated(PiecewiseLinear):
    id = "precision-gated"

    def evaluate(self, d: Dyadic) -> Dyadic:
        j = floor(d)
        t = d - j
        if t.is_zero():
            return ZERO
        peak = _gated_peak(j)
        if t <= HALF:
            return (t * peak).shift(1)
        return ((ONE - t) * peak).shift(1)

    def block_index(self, d: Dyadic) -> int:
        return floor(d)

    def block_nodes(self, block: int) -> List[Node]:
        j = Dyadic(block)
        return [(j, ZERO), (j + HALF, _gated_peak(block))]


@dataclass
class MachineRun:
    output: Dyadic
    extension: int
    threshold_k: int
    exact_branch: bool
    d: Dyadic


def precision_gated_machine(phi: CauchyOracle, n: int, trace: bool = False):
    """Oracle machine for the precision-gated function.

    Queries ``phi`` at 2 (to bound the extension) and at ``n + 3``; only
    when ``n >= 2**k - 10`` is the peak correction ``2**-(2**k)`` built, so
    the work is polynomial in ``n`` and the extension.  ``k`` is the
    bit-length of the integer part of the segment holding the query
    answer, i.e. the exponent that fixes the peak value of that tent.
    """
    e = phi(2)
    ext = 0
    while e + 1 >= Dyadic.pow2(ext):
        ext += 1
    d = phi(n + 3)
    if d < ZERO:
        d = ZERO
    j = floor(d)
    t = d - j
    if t > HALF:
        t = ONE - t
    k = j.bit_length()
    charge(limbs(j))
    exact = (1 << k) - 10 <= n
    if exact:
        out = (t * _gated_peak(j)).shift(1)
    else:
        out = t
    if trace:
        return MachineRun(out, ext, k, exact, d)
    return out


# -- combined ------------------------------------------------------------------

class Combined(PiecewiseLinear):
    """Sawtooth plus slow-decay; their supports meet only at 1."""

    id = "combined"

    def __init__(self) -> None:
        self.saw = Sawtooth()
        self.slow = SlowDecay()

    def evaluate(self, d: Dyadic) -> Dyadic:
        return self.saw.evaluate(d) + self.slow.evaluate(d)

    def block_index(self, d: Dyadic) -> int:
        return floor(d)

    def block_nodes(self, block: int) -> List[Node]:
        if block == 0:
            raise DomainError("block 0 of the combined witness has infinitely many nodes")
        return self.saw.block_nodes(block)

    def accumulates(self, lo: Dyadic, hi: Dyadic) -> bool:
        return self.slow.accumulates(lo, hi)

    def nodes(self, lo: DyadicLike, hi: DyadicLike,
              max_index: Optional[int] = None) -> List[Node]:
        lo, hi = dyadic(lo), dyadic(hi)
        inner: List[Node] = []
        if lo < ONE:
            part = self.slow.nodes(lo, min(hi, ONE), max_index)
            inner.extend((x, self.evaluate(x)) for x, _ in part)
        if hi > ONE:
            part = self.saw.nodes(max(lo, ONE), hi)
            inner.extend((x, self.evaluate(x)) for x, _ in part)
        inner = [p for p in inner if lo < p[0] < hi]
        return _with_ends(self, lo, hi, inner)


sawtooth = Sawtooth()
slow_decay = SlowDecay()
precision_gated = PrecisionGated()
combined = Combined()


def sawtooth_eval(d: DyadicLike) -> Dyadic:
    return sawtooth(d)


def slow_decay_eval(d: DyadicLike) -> Dyadic:
    return slow_decay(d)


def precision_gated_eval(d: DyadicLike) -> Dyadic:
    return precision_gated(d)


def combined_eval(d: DyadicLike) -> Dyadic:
    return combined(d)


# -- e^x -----------------------------------------------------------------------

def exp_digit_demo(x: DyadicLike, n: int):
    """``e**x`` to within ``2**-n`` from the Taylor series.

    The tail is cut once ``2 * x**(N+1)/(N+1)! <= 2**-(n+2)``; each of the
    ``N + 1`` terms is floored at ``p = n + ceil(log2(N+1)) + 2`` bits and
    the sum is floored at ``n + 1`` bits.  Returns ``(value, CostReport)``.
    """
    from .costlab import CostReport

    x = dyadic(x)
    if x < ZERO:
        raise DomainError("exp demo takes x >= 0")
    X = x.to_fraction()
    tail_target = Fraction(1, 1 << (n + 3))
    term = Fraction(1)
    i = 0
    while True:
        i += 1
        term = term * X / i
        if i > 2 * X and term <= tail_target:
            break
    terms = i  # indices 0 .. i-1
    p = n + (terms - 1).bit_length() + 2
    M, E = x.signed_mantissa, x.exponent
    with counting() as tally:
        total = 0
        power = 1
        fact = 1
        for t in range(terms):
            if t:
                power *= M
                fact *= t
                charge(limbs(power) + limbs(fact))
            shift = E * t + p
            if shift >= 0:
                total += (power << shift) // fact
            else:
                total += power // (fact << -shift)
            charge(limbs(total))
        value = Dyadic(total >> (p - n - 1), -(n + 1))
        out_len = length(value)
        charge(out_len // 2)
    report = CostReport(input_len=length(x), output_len=out_len,
                        digit_ops=tally.ops, n=n,
                        output_int_len=max(1, floor(value).bit_length()))
    return value, report


# -- registry ------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessInfo:
    id: str
    function: Optional[PiecewiseLinear]
    documented_modulus: Optional[Modulus]
    description: str


WITNESSES = {
    "sawtooth": WitnessInfo(
        "sawtooth", sawtooth, sawtooth_modulus(),
        "block-wise rising/falling steps to 2^r; modulus 3*2^k+n"),
    "slow-decay": WitnessInfo(
        "slow-decay", slow_decay, None,
        "decreasing on [0,1] through 1-2^-i; no modulus polynomial in n"),
    "precision-gated": WitnessInfo(
        "precision-gated", precision_gated, Modulus.custom(lambda k, n: n + 1,
                                                           "n+1", poly=True),
        "tents with peak 1/2+2^-(2^k); real poly-time, dyadic exponential"),
    "combined": WitnessInfo(
        "combined", combined, None,
        "sawtooth + slow-decay; non-polynomial modulus in k and in n"),
    "exp-demo": WitnessInfo(
        "exp-demo", None, None,
        "e^x by exact series; integer part grows like x*log2(e)"),
}


def get_witness(witness_id: str) -> WitnessInfo:
    try:
        return WITNESSES[witness_id]
    except KeyError:
        raise KeyError(f"unknown witness {witness_id!r}; "
                       f"known: {', '.join(WITNESSES)}") from None

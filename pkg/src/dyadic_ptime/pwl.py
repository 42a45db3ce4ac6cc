"""Continuous piecewise-linear functions given by exact dyadic nodes."""

from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .dyadic import Dyadic, DomainError, DyadicLike, dyadic

Node = Tuple[Dyadic, Dyadic]


class PiecewiseLinear(ABC):
    """Base for the witness functions.

    Subclasses supply an exact evaluator and the nodes (breakpoint, value)
    of each block.  ``nodes(lo, hi)`` lists every breakpoint in ``[lo, hi]``
    together with both endpoints, so the function is linear between
    consecutive entries.
    """

    id: str = "pwl"
    domain_start: Dyadic = Dyadic(0)

    def __call__(self, d: DyadicLike) -> Dyadic:
        d = dyadic(d)
        if d < self.domain_start:
            raise DomainError(f"{self.id} is undefined at {d}")
        return self.evaluate(d)

    @abstractmethod
    def evaluate(self, d: Dyadic) -> Dyadic:
        ...

    @abstractmethod
    def block_index(self, d: Dyadic) -> int:
        ...

    @abstractmethod
    def block_nodes(self, block: int) -> List[Node]:
        """Ordered nodes of one block, including its left end."""

    def accumulates(self, lo: Dyadic, hi: Dyadic) -> bool:
        """True when ``[lo, hi]`` holds infinitely many breakpoints."""
        return False

    def nodes(self, lo: DyadicLike, hi: DyadicLike,
              max_index: Optional[int] = None) -> List[Node]:
        lo, hi = dyadic(lo), dyadic(hi)
        if lo > hi:
            raise ValueError("empty interval")
        if lo < self.domain_start:
            raise DomainError(f"{self.id} is undefined below {self.domain_start}")
        inner: List[Node] = []
        for b in range(self.block_index(lo), self.block_index(hi) + 1):
            inner.extend(p for p in self.block_nodes(b) if lo < p[0] < hi)
        return _with_ends(self, lo, hi, inner)

    def breakpoints(self, lo: DyadicLike, hi: DyadicLike,
                    max_index: Optional[int] = None) -> List[Dyadic]:
        return [x for x, _ in self.nodes(lo, hi, max_index)]


def _with_ends(f: PiecewiseLinear, lo: Dyadic, hi: Dyadic,
               inner: Iterable[Node]) -> List[Node]:
    out: List[Node] = [(lo, f.evaluate(lo))]
    for node in sorted(inner, key=lambda p: p[0].to_fraction()):
        if node[0] != out[-1][0]:
            out.append(node)
    if hi != out[-1][0]:
        out.append((hi, f.evaluate(hi)))
    return out


def slope(a: Node, b: Node) -> Fraction:
    return (b[1] - a[1]).to_fraction() / (b[0] - a[0]).to_fraction()


def pieces(nodes: List[Node]) -> List[Tuple[Dyadic, Dyadic, Fraction]]:
    """(left, right, slope) for each linear piece between nodes."""
    return [(a[0], b[0], slope(a, b)) for a, b in zip(nodes, nodes[1:])]


def ceil_log2(q: Fraction) -> int:
    """Exact ``ceil(log2 q)`` for positive rational ``q``."""
    if q <= 0:
        raise ValueError("log of non-positive number")
    e = q.numerator.bit_length() - q.denominator.bit_length()
    # 2**(e-1) < q < 2**(e+1)
    while _pow2(e) < q:
        e += 1
    while _pow2(e - 1) >= q:
        e -= 1
    return e


def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)

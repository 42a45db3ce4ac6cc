"""Cauchy-function oracles: ``n -> d`` with ``|x - d| <= 2**-n``."""

from __future__ import annotations

import hashlib
from typing import Callable, Protocol, Tuple, Union

from .dyadic import Dyadic, DyadicLike, dyadic, round_to_precision

__all__ = [
    "CauchyOracle",
    "CanonicalOracle",
    "JitteredOracle",
    "FunctionOracle",
    "InstrumentedOracle",
    "ExactValue",
    "exact_value",
    "canonical_oracle",
    "jittered_oracle",
    "instrument",
]


class CauchyOracle(Protocol):
    def __call__(self, n: int) -> Dyadic: ...


# A dyadic, or a (function, dyadic argument) pair with a dyadic value.
ExactValue = Union[DyadicLike, Tuple[Callable[[Dyadic], Dyadic], DyadicLike]]


def exact_value(x: ExactValue) -> Dyadic:
    if isinstance(x, tuple):
        fn, arg = x
        return fn(dyadic(arg))
    return dyadic(x)


class CanonicalOracle:
    """``n -> floor(2**n x) / 2**n``."""

    __slots__ = ("x",)

    def __init__(self, x: ExactValue) -> None:
        self.x = exact_value(x)

    def __call__(self, n: int) -> Dyadic:
        if n < 0:
            raise ValueError("oracle precision must be a natural number")
        return round_to_precision(self.x, n)

    def __repr__(self) -> str:
        return f"CanonicalOracle({self.x})"


def _jitter(seed: int, n: int) -> int:
    digest = hashlib.blake2b(f"{seed}:{n}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") % 3 - 1


class JitteredOracle:
    """Valid but non-canonical answers.

    ``n -> floor_{n+1}(x) + j * 2**-(n+1)`` with ``j`` in {-1, 0, 1} fixed
    by ``(seed, n)``; the error stays within ``[-2**-(n+1), 2**-(n+1))``.
    """

    __slots__ = ("x", "seed")

    def __init__(self, x: ExactValue, seed: int) -> None:
        self.x = exact_value(x)
        self.seed = seed

    def offset(self, n: int) -> int:
        return _jitter(self.seed, n)

    def __call__(self, n: int) -> Dyadic:
        if n < 0:
            raise ValueError("oracle precision must be a natural number")
        base = round_to_precision(self.x, n + 1)
        j = self.offset(n)
        if j == 0:
            return base
        return base + Dyadic(j, -(n + 1))

    def __repr__(self) -> str:
        return f"JitteredOracle({self.x}, seed={self.seed})"


class FunctionOracle:
    """Wrap a caller-supplied ``n -> Dyadic`` callable."""

    __slots__ = ("fn", "label")

    def __init__(self, fn: Callable[[int], Dyadic], label: str = "custom") -> None:
        self.fn = fn
        self.label = label

    def __call__(self, n: int) -> Dyadic:
        return self.fn(n)


class InstrumentedOracle:
    """Forwarding wrapper recording the deepest precision asked and the
    number of queries.  Not for sharing between concurrent evaluations."""

    def __init__(self, inner: CauchyOracle) -> None:
        self.inner = inner
        self.max_depth = 0
        self.count = 0
        self.queries: list[int] = []

    def __call__(self, n: int) -> Dyadic:
        self.count += 1
        self.queries.append(n)
        if n > self.max_depth:
            self.max_depth = n
        return self.inner(n)

    def __repr__(self) -> str:
        return (f"InstrumentedOracle({self.inner!r}, max_depth={self.max_depth}, "
                f"count={self.count})")


def canonical_oracle(x: ExactValue) -> CanonicalOracle:
    return CanonicalOracle(x)


def jittered_oracle(x: ExactValue, seed: int) -> JitteredOracle:
    return JitteredOracle(x, seed)


def instrument(oracle: CauchyOracle) -> InstrumentedOracle:
    return InstrumentedOracle(oracle)

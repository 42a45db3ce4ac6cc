import random
from fractions import Fraction

from hypothesis import given, strategies as st

from dyadic_ptime.dyadic import Dyadic, dyadic, round_to_precision
from dyadic_ptime.oracle import (
    CanonicalOracle,
    canonical_oracle,
    exact_value,
    instrument,
    jittered_oracle,
)
from dyadic_ptime.witnesses import sawtooth, sawtooth_peak, slow_decay, slow_decay_point

from conftest import dyadics


def test_canonical_examples():
    x = canonical_oracle(dyadic(Fraction(21, 64)))
    assert x(3) == Fraction(1, 4)  # floor(2.625) / 8
    assert x(4) == Fraction(5, 16)
    five = canonical_oracle(dyadic(5))
    assert all(five(n) == 5 for n in range(20))
    assert canonical_oracle(dyadic(Fraction(-3, 8)))(1) == Fraction(-1, 2)


def test_exact_value_from_witness_pair():
    x = (sawtooth, sawtooth_peak(3))
    assert exact_value(x) == 8
    assert canonical_oracle(x)(0) == 8


def test_jitter_small_cases():
    half = jittered_oracle(dyadic(Fraction(1, 2)), 1)
    assert abs(half(4) - Fraction(1, 2)) <= Fraction(1, 16)
    zero = jittered_oracle(dyadic(0), 0)
    for seed in range(50):
        o = jittered_oracle(dyadic(0), seed)
        assert abs(o(0)) <= 1
    # some seed must actually move the answer
    assert any(jittered_oracle(dyadic(0), s).offset(0) != 0 for s in range(50))
    assert zero(3) == zero(3)


def test_jitter_soundness_sweep():
    rng = random.Random(20261019)
    for _ in range(10_000):
        x = Dyadic(rng.randint(-(1 << 40), 1 << 40), rng.randint(-30, 10))
        n = rng.randint(0, 40)
        o = jittered_oracle(x, rng.randint(0, 1 << 30))
        assert abs((o(n) - x).to_fraction()) <= Fraction(1, 2 ** n)


def test_instrument():
    inner = canonical_oracle(dyadic(Fraction(21, 64)))
    w = instrument(inner)
    assert (w.max_depth, w.count) == (0, 0)
    seen = []
    for n in (2, 7, 3):
        assert w(n) == inner(n)
        seen.append((w.max_depth, w.count))
    assert seen == [(2, 1), (7, 2), (7, 3)]


@given(dyadics(), st.integers(0, 50), st.integers(0, 50))
def test_canonical_sound_and_consistent(x, n, n2):
    o = CanonicalOracle(x)
    q = o(n).to_fraction()
    assert 0 <= x.to_fraction() - q <= Fraction(1, 2 ** n)
    lo, hi = sorted((n, n2))
    assert abs(o(lo).to_fraction() - o(hi).to_fraction()) <= Fraction(1, 2 ** lo)


@given(dyadics(), st.integers(0, 50), st.integers(0, 1 << 20))
def test_jitter_sound(x, n, seed):
    o = jittered_oracle(x, seed)
    assert abs(o(n).to_fraction() - x.to_fraction()) <= Fraction(1, 2 ** n)


@given(st.integers(1, 9), st.integers(0, 40))
def test_prefix_agreement_on_witness_points(r, n0):
    for x in (slow_decay_point(r), sawtooth_peak(r)):
        d = CanonicalOracle(x)(n0)
        for j in range(n0 + 1):
            assert CanonicalOracle(d)(j) == CanonicalOracle(x)(j)


@given(st.integers(0, 60), st.integers(0, 60))
def test_prefix_agreement_on_witness_values(i, n0):
    x = (slow_decay, slow_decay_point(i))
    d = canonical_oracle(x)(n0)
    for j in range(n0 + 1):
        assert canonical_oracle(d)(j) == canonical_oracle(x)(j)
        assert canonical_oracle(d)(j) == round_to_precision(exact_value(x), j)

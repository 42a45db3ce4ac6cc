import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from dyadic_ptime.dyadic import Dyadic, DomainError, dyadic, floor, length
from dyadic_ptime.oracle import CanonicalOracle, JitteredOracle, instrument
from dyadic_ptime.pwl import pieces
from dyadic_ptime.witnesses import (
    Sawtooth,
    WITNESSES,
    alpha,
    combined,
    combined_eval,
    epsilon,
    exp_digit_demo,
    get_witness,
    precision_gated,
    precision_gated_eval,
    precision_gated_machine,
    sawtooth,
    sawtooth_eval,
    sawtooth_peak,
    sawtooth_slope,
    slow_decay,
    slow_decay_eval,
    slow_decay_point,
    slow_decay_slope,
)

from conftest import dyadics

F = Fraction


def test_epsilon():
    assert [epsilon(a) for a in (1, 3, 0)] == [F(1, 4), F(21, 64), 0]
    for a in range(1, 30):
        assert epsilon(a) == F(4 ** a - 1, 3 * 4 ** a)
        # delta_j = eps_j - eps_{j-1} = 2^-2j
        assert epsilon(a) - epsilon(a - 1) == F(1, 4 ** a)


def test_alpha():
    assert [alpha(i) for i in (0, 1, 2, 3, 4, 15, 16, 255, 256, 65535, 65536)] == \
        [0, 0, 2, 2, 4, 4, 16, 16, 256, 256, 65536]


def test_sawtooth_examples():
    assert sawtooth_eval(3) == 0
    assert sawtooth_eval(3 + F(21, 64)) == 8
    assert sawtooth_eval(3 + F(1, 8)) == 1
    assert sawtooth_eval(0) == 0 and sawtooth_eval(F(1, 2)) == 0
    with pytest.raises(DomainError):
        sawtooth_eval(F(-1, 2))


@pytest.mark.parametrize("r", range(1, 9))
def test_sawtooth_values_and_continuity(r):
    for j in range(1, r + 1):
        assert sawtooth(sawtooth.d(r, j)) == 2 ** j
        assert sawtooth(sawtooth.e(r, j)) == 2 ** j
    assert sawtooth.d(r, r) == sawtooth.e(r, r)
    nodes = sawtooth.block_nodes(r)
    xs = [x for x, _ in nodes]
    assert xs == sorted(xs) and len(set(xs)) == len(xs)
    for x, v in nodes:
        assert sawtooth(x) == v
    # interpolation between nodes agrees with evaluation
    for (x0, v0), (x1, v1) in zip(nodes, nodes[1:]):
        mid = (x0 + x1) * Dyadic(1, -1)
        assert sawtooth(mid) == (v0 + v1) * Dyadic(1, -1)
    assert sawtooth(r + 1) == 0


@pytest.mark.parametrize("r", range(2, 9))
def test_sawtooth_slope_law(r):
    for j in range(2, r + 1):
        a, b = sawtooth.d(r, j - 1), sawtooth.d(r, j)
        s = (sawtooth(b) - sawtooth(a)).to_fraction() / (b - a).to_fraction()
        assert s == 2 ** (3 * j - 1) == sawtooth_slope(j)
    assert sawtooth_slope(1) == 8


def test_sawtooth_growth_parameter():
    tall = Sawtooth(growth=lambda r: 2 * r)
    assert tall(2 + epsilon(4)) == 16
    assert sawtooth(2 + epsilon(2)) == 4


def test_sawtooth_exponential_in_integer_part():
    for r in (2, 4, 8, 16):
        assert length(sawtooth(sawtooth_peak(r))) >= 2 ** (length(Dyadic(r)) // 2 - 1)


@given(st.integers(0, 40), dyadics(max_bits=30, min_exp=-30, max_exp=0, nonneg=True))
def test_sawtooth_agrees_with_interpolation(r, t):
    t = t - floor(t)
    d = Dyadic(r) + t
    nodes = sawtooth.block_nodes(r) + [(Dyadic(r + 1), Dyadic(0))]
    for (x0, v0), (x1, v1) in zip(nodes, nodes[1:]):
        if x0 <= d <= x1:
            want = v0.to_fraction() + (v1 - v0).to_fraction() * (d - x0).to_fraction() / (x1 - x0).to_fraction()
            assert sawtooth(d).to_fraction() == want
            break


def test_slow_decay_examples():
    assert slow_decay_eval(F(1, 4)) == 1
    assert slow_decay_eval(F(15, 16)) == F(1, 2)
    assert slow_decay_eval(2) == 0
    assert slow_decay_eval(1) == 0
    with pytest.raises(DomainError):
        slow_decay_eval(-1)


def test_slow_decay_values_and_continuity():
    for i in range(2, 300):
        assert slow_decay(slow_decay_point(i)) == F(1, int(math.log2(alpha(i))))
        lo, hi = slow_decay_point(i - 1), slow_decay_point(i)
        mid = (lo + hi) * Dyadic(1, -1)
        assert slow_decay(mid) == (slow_decay(lo) + slow_decay(hi)) * Dyadic(1, -1)


@pytest.mark.parametrize("j", [1, 2])
def test_slow_decay_slope_law(j):
    i = 2 ** 2 ** j
    (a, va), (b, vb) = slow_decay.block_nodes(i)
    assert (a, b) == (slow_decay_point(i - 1), slow_decay_point(i))
    s = abs((vb - va).to_fraction() / (b - a).to_fraction())
    assert s == 2 ** (2 ** 2 ** j - j) == slow_decay_slope(j)
    assert [slow_decay_slope(1), slow_decay_slope(2)] == [8, 2 ** 14]


def test_precision_gated_examples():
    assert precision_gated_eval(F(1, 2)) == 1
    assert precision_gated_eval(F(5, 2)) == F(9, 16)
    assert precision_gated_eval(F(9, 4)) == F(9, 32)
    assert precision_gated_eval(7) == 0


def test_precision_gated_continuity_and_length():
    for j in range(0, 70):
        peak = precision_gated(Dyadic(j) + Dyadic(1, -1))
        k = j.bit_length()
        assert peak == F(1, 2) + F(1, 2 ** (2 ** k))
        assert precision_gated(j) == 0
        eps = Dyadic(1, -60)
        assert abs(precision_gated(Dyadic(j + 1) - eps)) < F(2, 2 ** 59)
        assert length(peak) >= 2 ** k


def test_combined_examples():
    assert combined_eval(2) == 0
    assert combined_eval(F(15, 16)) == sawtooth_eval(F(15, 16)) + F(1, 2)
    assert combined_eval(3 + F(21, 64)) == 8


def _machine_points():
    pts = [Dyadic(j) for j in (0, 1, 2, 3, 7, 8, 100)]
    for j in (0, 1, 2, 3, 5, 6, 7, 8, 15, 16, 31, 1000, 1 << 20):
        half = Dyadic(j) + Dyadic(1, -1)
        pts += [half, Dyadic(j) + Dyadic(1, -2), Dyadic(j) + Dyadic(3, -2)]
        for s in (5, 13, 27, 40):
            pts += [half + Dyadic(1, -s), half - Dyadic(1, -s)]
        pts += [Dyadic(j + 1) - Dyadic(1, -30)]
    return pts


@pytest.mark.parametrize("oracle", ["canonical", "jitter"])
def test_precision_gated_machine_matrix(oracle):
    for x in _machine_points():
        exact = precision_gated(x)
        for n in range(25):
            phi = CanonicalOracle(x) if oracle == "canonical" else JitteredOracle(x, 31 * n + 7)
            box = instrument(phi)
            out = precision_gated_machine(box, n)
            assert abs(out - exact) <= Dyadic.pow2(-n), (x, n)
            assert box.queries == [2, n + 3]


def test_precision_gated_machine_branches():
    run = precision_gated_machine(CanonicalOracle(dyadic(F(5, 2))), 20, trace=True)
    assert run.output == F(9, 16) and run.exact_branch
    far = Dyadic(1000000) + Dyadic(1, -1)
    run = precision_gated_machine(CanonicalOracle(far), 5, trace=True)
    assert run.output == F(1, 2) and not run.exact_branch
    assert abs(run.output - precision_gated(far)) < F(1, 32)
    for n in range(10):
        assert abs(precision_gated_machine(CanonicalOracle(dyadic(3)), n)) <= Dyadic.pow2(-n)


def _mp(d):
    q = dyadic(d).to_fraction()
    return mpmath.mpf(q.numerator) / q.denominator


def test_exp_demo():
    mpmath.mp.prec = 200
    assert exp_digit_demo(0, 5)[0] == 1
    v, _ = exp_digit_demo(1, 10)
    assert abs(_mp(v) - mpmath.e) <= mpmath.mpf(2) ** -10
    _, rep = exp_digit_demo(16, 4)
    assert rep.output_int_len >= 23


@given(st.integers(0, 1 << 12), st.integers(6, 10), st.integers(0, 30))
def test_exp_demo_accuracy(m, s, n):
    x = Dyadic(m, -s)  # x < 64
    mpmath.mp.prec = n + 200  # e**x < 2**93 here
    v, rep = exp_digit_demo(x, n)
    assert abs(_mp(v) - mpmath.exp(_mp(x))) <= mpmath.mpf(2) ** -n
    assert rep.digit_ops >= rep.output_len // 2


def test_registry():
    assert list(WITNESSES) == ["sawtooth", "slow-decay", "precision-gated", "combined", "exp-demo"]
    assert get_witness("sawtooth").function is sawtooth
    with pytest.raises(KeyError):
        get_witness("nope")


def test_linear_output_length_on_corpus():
    corpus = []
    for r in range(1, 20):
        corpus += [Dyadic(r), sawtooth.d(r, r), sawtooth.d(r, 1), sawtooth.e(r, 1)]
        corpus += [(sawtooth.d(r, j) + sawtooth.d(r, j + 1)) * Dyadic(1, -1) for j in range(r)]
    for i in range(1, 40):
        corpus.append(slow_decay_point(i))
    for d in corpus:
        for f in (sawtooth, slow_decay):
            assert length(f(d)) <= 4 * length(d) + 4

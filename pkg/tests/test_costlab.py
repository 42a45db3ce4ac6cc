import csv
from fractions import Fraction

import pytest

from dyadic_ptime.costlab import (
    CSV_HEADER,
    CostReport,
    classify,
    extension_of,
    grid_scan,
    growth_scan,
    measure_dyadic,
    measure_real,
    required_depth,
    scan_point,
    write_csv,
)
from dyadic_ptime.dyadic import Dyadic, dyadic
from dyadic_ptime.modulus import min_modulus_pwl
from dyadic_ptime.witnesses import sawtooth, sawtooth_peak

F = Fraction


def test_measure_dyadic_examples():
    assert measure_dyadic("sawtooth", 3).output_len == 2
    rep = measure_dyadic("sawtooth", sawtooth_peak(8))
    assert rep.output_len == 18 and rep.input_len == 42
    rep = measure_dyadic("precision-gated", Dyadic(2 ** 10 - 1) + Dyadic(1, -1))
    assert rep.output_len >= 2 ** 10
    assert rep.digit_ops >= rep.output_len / 2


def test_measure_real_examples():
    assert measure_real("identity", dyadic(F(43, 8)), 4).oracle_depth == 5
    rep = measure_real("precision-gated", dyadic(F(5, 2)), 20)
    assert rep.oracle_depth == 23 and rep.oracle_count == 2
    rep = measure_real("square", dyadic(F(3, 2)), 3)
    assert rep.oracle_depth == 6 and (rep.k, rep.n) == (1, 3)


def test_extension_of():
    assert [extension_of(dyadic(x)) for x in (0, 1, F(3, 2), 2, 5, 8, 9)] == [0, 0, 1, 1, 3, 3, 4]


def test_cost_report_nonnegative():
    with pytest.raises(ValueError):
        CostReport(output_len=-1)


def test_determinism():
    a = [scan_point("sawtooth", "r", r) for r in (3, 5)]
    b = [scan_point("sawtooth", "r", r) for r in (3, 5)]
    assert a == b
    assert measure_real("square", dyadic(F(7, 4)), 9) == measure_real("square", dyadic(F(7, 4)), 9)


def test_classify_synthetic():
    assert classify([(s, s ** 3) for s in range(2, 40)]).poly
    assert classify([(s, 7 * s + 3) for s in range(2, 40)]).poly
    assert not classify([(s, 2 ** s) for s in range(2, 40)]).poly
    assert not classify([(2, 4), (4, 16), (8, 256), (16, 65536)]).poly
    with pytest.raises(ValueError):
        classify([(1, 1), (2, 2)])


def test_classify_uses_worst_case_per_size():
    v = classify([(2, 1), (2, 8), (3, 27), (4, 64), (5, 125)])
    assert v.series[0] == (2, 8)


@pytest.mark.parametrize("rs", [(2, 4, 8, 16), (2, 4, 8, 16, 32)])
def test_sawtooth_verdicts(rs):
    v, _ = growth_scan("sawtooth", "r", rs, cost_axis="output_len", size_axis="int_len")
    assert not v.poly
    v, _ = growth_scan("sawtooth", "r", rs, cost_axis="digit_ops", size_axis="input_len")
    assert v.poly


def test_required_depth_tracks_min_modulus():
    for r in (2, 3, 4, 6):
        depth = required_depth(sawtooth, sawtooth_peak(r), 2)
        m = min_modulus_pwl(sawtooth, r, r + 1, 2)
        assert depth >= 3 * r - 3
        assert 0 <= m - depth <= 3


def test_grid_scan_square():
    verdicts, rows = grid_scan("square", range(0, 9), (0, 8, 16, 32, 64))
    assert all(v.poly for v in verdicts.values())
    assert len(rows) == 45


def test_csv_roundtrip(tmp_path):
    _, rows = growth_scan("real:identity", "n", range(0, 10), size_axis="n")
    path = tmp_path / "scan.csv"
    write_csv(rows, path)
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        body = list(reader)
    assert tuple(header) == CSV_HEADER
    assert ",".join(header) == ("target,param_name,param_value,input_len,k,n,"
                                "output_len,digit_ops,oracle_depth,oracle_count")
    assert [int(r[2]) for r in body] == list(range(10))


def test_unknown_target():
    with pytest.raises(KeyError):
        scan_point("nope", "r", 1)
    with pytest.raises(ValueError):
        scan_point("real:square", "r", 1)

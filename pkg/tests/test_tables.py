import time

import pytest

import oracles
from legendre_e import tables
from legendre_e.second_expansion import DEFAULT_DELTA


def _rel(e, a):
    return float((e - a) / e)


@pytest.mark.parametrize("idx", range(12))
def test_table1_rows_against_reference(idx):
    row = tables.build_table(1)[idx]
    lam, k, N = row.lam, row.k, row.order
    e = oracles.E(lam, k)
    en = oracles.E_N(lam, k, N)
    eh = oracles.E_hat(lam, k, N)
    lo, up = oracles.first_interval(lam, k, N)
    assert row.exactE == pytest.approx(float(e), rel=1e-15)
    assert row.approx == pytest.approx(float(en), rel=1e-14)
    assert row.refined == pytest.approx(float(eh), rel=1e-14)
    assert row.rel_err == pytest.approx(_rel(e, en), rel=1e-9)
    assert row.rel_err_refined == pytest.approx(_rel(e, eh), rel=1e-6)
    assert row.range == pytest.approx(float((up - lo) / e), rel=1e-9)


@pytest.mark.parametrize("idx", range(12))
def test_table2_rows_against_reference(idx):
    row = tables.build_table(2)[idx]
    lam, k, N = row.lam, row.k, row.order
    e = oracles.E(lam, k)
    et = oracles.E_tilde(lam, k, N)
    lo, up = oracles.second_bounds(lam, k, N)
    d = oracles.mpf(67) / 187
    eb = et - (d * up + (1 - d) * lo)
    assert row.approx == pytest.approx(float(et), rel=1e-14)
    assert row.refined == pytest.approx(float(eb), rel=1e-14)
    assert row.rel_err == pytest.approx(_rel(e, et), rel=1e-8)
    assert row.rel_err_refined == pytest.approx(_rel(e, eb), rel=1e-6)
    assert row.range == pytest.approx(float((up - lo) / e), rel=1e-9)


def test_table_shapes_and_speed():
    for which, n in ((1, 12), (2, 12), (3, 7)):
        t = time.perf_counter()
        rows = tables.build_table(which)
        assert time.perf_counter() - t < 1.0
        assert len(rows) == n == len(tables.printed_rows(which))
        for row, printed in zip(rows, tables.printed_rows(which)):
            assert (row.lam, row.k) == (float(printed[0]), float(printed[1]))
    with pytest.raises(ValueError):
        tables.build_table(4)


def test_refined_parameters_are_used():
    a = tables.build_table(1, eps=0.5)[0].refined
    b = tables.build_table(1, eps=0.25)[0].refined
    assert a != b
    c = tables.build_table(2, delta=DEFAULT_DELTA)[0].refined
    d = tables.build_table(2, delta=0.5)[0].refined
    assert c != d


@pytest.mark.parametrize("printed,value,ok", [
    (".8714", 0.87146, True),  # rounded
    (".8714", 0.87144, True),
    (".9500", 0.950066, True),  # truncated
    (".8714", 0.87161, False),
    ("-.02504", -0.025044, True),
    ("-.02504", 0.02504, False),
    (".6011e-3", 0.000601151, True),
    (".6011e-3", 0.000606, True),  # 2 significant digits for scientific cells
    (".6011e-3", 0.00062, False),
    ("1.0056", 1.00560389, True),
])
def test_matches_printed(printed, value, ok):
    assert tables.matches_printed(printed, value) is ok




def test_check_reports_every_disagreement_with_a_note_or_value():
    for which in (1, 2, 3):
        bad = tables.check_table(which, tables.build_table(which))
        for m in bad:
            assert m.printed in tables.printed_rows(which)[m.row]
            assert not tables.matches_printed(m.printed, m.computed)


def test_mismatch_counts_are_stable():
    counts = {w: len(tables.check_table(w, tables.build_table(w))) for w in (1, 2, 3)}
    assert counts == {1: 12, 2: 16, 3: 1}
    exp_shift = sum(1 for w in (1, 2) for m in tables.check_table(w, tables.build_table(w)) if m.note)
    assert exp_shift == 22


def test_deterministic():
    assert tables.build_table(2) == tables.build_table(2)

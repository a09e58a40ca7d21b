import math

import numpy as np
import pytest

from snflimit.errors import NotUnit, ZeroSingularValue
from snflimit.harness import (
    DEFAULT_SCHEDULE,
    convergence_table,
    determinant_gap,
    lemma_bound_estimate,
    log_singular_values,
    minmax_spot_check,
    sandwich_check,
)
from snflimit.parsing import parse_matrix
from snflimit.series import SeriesMatrix
from snflimit.suite import suite

RUNNING = parse_matrix({"n": 2, "entries": [["1", "1"], ["1", "1 + t"]]})


def mat(entries):
    return parse_matrix({"n": len(entries), "entries": entries})


def test_log_singular_values_examples():
    assert np.allclose(log_singular_values(SeriesMatrix.identity(3), 0.1), 0)
    assert np.allclose(log_singular_values(mat([["t", "0"], ["0", "t^-1"]]), 0.01), [1, -1])

    # symmetric with trace 2 + t and det t, so the singular values are the eigenvalues
    t = 1e-6
    disc = math.sqrt((2 + t) ** 2 - 4 * t)
    exact = np.array([2 * t / (2 + t + disc), (2 + t + disc) / 2])
    logs = log_singular_values(RUNNING, t)
    # rounding 1 + t in the input limits agreement to about eps / t relative in d_1
    assert np.allclose(logs, np.log(exact) / math.log(t), rtol=0, atol=1e-9)
    # d_1 ~ t/2 and d_2 ~ 2, so the gap to (1, 0) is ln 2 / |ln t|, just over 0.05
    assert np.allclose(logs, [1, 0], atol=math.log(2) / abs(math.log(t)) + 1e-6)


def test_log_of_zero_singular_value():
    with pytest.raises(ZeroSingularValue) as info:
        log_singular_values(mat([["1", "1"], ["1", "1"]]), 0.5)
    assert info.value.index == 0


def test_identity_table_has_no_error():
    assert all(r.max_error == 0 for r in convergence_table(SeriesMatrix.identity(2)))


def test_running_example_error_strictly_decreases():
    errs = [r.max_error for r in convergence_table(RUNNING)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_exact_diagonal_is_exact():
    rows = convergence_table(mat([["t^2", "0"], ["0", "t^-1"]]))
    assert max(r.max_error for r in rows) <= 1e-12


def test_schedule_validation():
    with pytest.raises(ValueError):
        convergence_table(RUNNING, [1e-4, 1e-2])
    with pytest.raises(ValueError):
        convergence_table(RUNNING, [1.5])


def test_parallel_rows_match_serial():
    a = suite()["twisted_4x4"]
    assert convergence_table(a, workers=4) == convergence_table(a)


@pytest.mark.parametrize("name", sorted(suite()))
def test_error_bound_for_small_t(name):
    for row in convergence_table(suite()[name]):
        if row.t <= 1e-4:
            assert row.max_error <= 3 / abs(math.log(row.t))


@pytest.mark.parametrize("name", sorted(suite()))
def test_determinant_consistency(name):
    a = suite()[name]
    for t in DEFAULT_SCHEDULE:
        assert determinant_gap(a, t) <= 1e-8


def test_minmax_examples():
    assert minmax_spot_check(np.diag([1.0, 2.0, 3.0]), 2, trials=200).passed
    rep = minmax_spot_check(np.eye(3), 2, trials=50)
    assert rep.passed and rep.tightest_max == pytest.approx(1) and rep.tightest_min == pytest.approx(1)


def test_minmax_rejects_bad_k():
    with pytest.raises(ValueError):
        minmax_spot_check(np.eye(2), 3)


def test_lemma_bounds_identity():
    est = lemma_bound_estimate(SeriesMatrix.identity(3))
    assert est.m_est == pytest.approx(1) and est.M_est == pytest.approx(1)


def test_lemma_bounds_shear_approach_one():
    p = mat([["1", "t"], ["0", "1"]])
    for t in (1e-2, 1e-3, 1e-4):
        est = lemma_bound_estimate(p, [t])
        assert abs(est.m_est - 1) <= 2 * t and abs(est.M_est - 1) <= 2 * t


def test_lemma_bounds_need_unit_matrix():
    with pytest.raises(NotUnit):
        lemma_bound_estimate(mat([["t", "0"], ["0", "1"]]))


def test_lemma_bounds_on_smith_factors_are_stable():
    from snflimit.smith import smith_normal_form

    for a in suite().values():
        d = smith_normal_form(a)
        for p in (d.p, d.q):
            est = lemma_bound_estimate(p)
            assert 0 < est.m_est <= est.M_est < math.inf


def test_sandwich_collapses_for_diagonal():
    a = mat([["t^2", "0"], ["0", "t^-1"]])
    for k in (1, 2):
        r = sandwich_check(a, 1e-3, k)
        assert r.passed
        assert r.lower == pytest.approx(r.log_d_k) and r.upper == pytest.approx(r.log_d_k)


def test_sandwich_running_example():
    for k in (1, 2):
        assert sandwich_check(RUNNING, 1e-4, k).passed

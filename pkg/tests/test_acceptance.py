"""The eight acceptance criteria, one test each, at their stated tolerances."""

import json
import time

import numpy as np

from corpus import MALFORMED, round_trip_cases
from oracles import random_nonsingular
from snflimit.cli import main
from snflimit.errors import SeriesSyntaxError
from snflimit.harness import DEFAULT_SCHEDULE, convergence_table, minmax_spot_check, sandwich_check
from snflimit.parsing import format_series, parse_series
from snflimit.smith import invariant_factors, minor_valuation_oracle, smith_normal_form, verify_decomposition
from snflimit.suite import EXPECTED, suite
from snflimit.svd import svd
from snflimit.tropical import amoeba_sample_line, distances_to_rayset, ray_probes, tropical_line

RANDOM_SEED = 20240611


def _random_instances():
    rng = np.random.default_rng(RANDOM_SEED)
    return [random_nonsingular(rng, int(rng.integers(2, 5))) for _ in range(100)]


def _non_increasing(seq, slack=0.05, floor=1e-12):
    return all(b <= (1 + slack) * a + floor for a, b in zip(seq, seq[1:]))


def test_criterion_1_convergence():
    start = time.perf_counter()
    mats = suite()
    assert len(mats) == 10 and {a.n for a in mats.values()} == {2, 3, 4}
    spans = [v for e in EXPECTED.values() for v in e]
    assert min(spans) == -3 and max(spans) == 3
    for name, a in mats.items():
        rows = convergence_table(a, DEFAULT_SCHEDULE)
        assert rows[0].invariant_factors == EXPECTED[name]
        assert rows[-1].t == 1e-8 and rows[-1].max_error <= 0.1, (name, rows[-1].max_error)
        assert _non_increasing([r.max_error for r in rows]), (name, [r.max_error for r in rows])
    assert time.perf_counter() - start <= 5.0


def test_criterion_2_smith_oracle_equivalence():
    failures = 0
    for a in _random_instances():
        if invariant_factors(a) != minor_valuation_oracle(a):
            failures += 1
    assert failures == 0


def test_criterion_3_decomposition_certificate():
    for a in [*suite().values(), *_random_instances()]:
        rep = verify_decomposition(a, smith_normal_form(a))
        assert rep.residual <= 1e-10 and rep.ord_det_p == 0 and rep.ord_det_q == 0 and rep.passed, rep


def test_criterion_4_svd_quality():
    rng = np.random.default_rng(RANDOM_SEED + 4)
    for i in range(100):
        n = 1 + i % 8
        a = np.sqrt(rng.random((n, n))) * np.exp(2j * np.pi * rng.random((n, n)))
        res = svd(a)
        assert np.linalg.norm(res.reconstruct() - a) <= 1e-12 * np.linalg.norm(a)
        assert max(res.unitarity_residuals()) <= 1e-12 * n
    # graded: A = X diag(t^v), exact singular values t^v, ratios down to 1e-12 and beyond
    x, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    v = np.array([0.0, 1.0, 2.0, 3.0])
    smallest_ratio = 1.0
    for t in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
        expected = np.sort(t**v)
        d = svd(x @ np.diag(t**v)).singular_values
        assert np.all(np.abs(d - expected) <= 1e-6 * expected), t
        smallest_ratio = min(smallest_ratio, expected[0] / expected[-1])
    assert smallest_ratio <= 1e-12


def test_criterion_5_minmax():
    rng = np.random.default_rng(RANDOM_SEED + 5)
    for i in range(10):
        n = 1 + i % 5
        z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = (z + z.conj().T) / 2
        for k in range(1, n + 1):
            rep = minmax_spot_check(h, k, trials=1000, seed=RANDOM_SEED + 10 * i + k)
            assert rep.max_violations == 0 and rep.min_violations == 0


def test_criterion_6_sandwich():
    for name, a in suite().items():
        d = smith_normal_form(a)
        for t in DEFAULT_SCHEDULE:
            for k in range(1, a.n + 1):
                rep = sandwich_check(a, t, k, d, samples=100)
                assert rep.passed, (name, t, k, rep)
                assert rep.gram_identity_error <= 1e-12


def test_criterion_7_amoeba():
    line = tropical_line()
    worst = []
    for t in (1e-1, 1e-2, 1e-3, 1e-4):
        pts = amoeba_sample_line(1, 1, 1, t, 2000, seed=RANDOM_SEED)
        dist = distances_to_rayset(pts, line)
        worst.append(float(dist.max()))
        if t == 1e-3:
            assert len(pts) == 2000 and np.all(dist <= 0.25)
        if t == 1e-4:
            probes = ray_probes(line, 20)
            nearest = np.min(np.linalg.norm(probes[:, None, :] - pts[None, :, :], axis=2), axis=1)
            assert len(probes) == 20 and np.all(nearest <= 0.25)
    assert _non_increasing(worst), worst


def test_criterion_8_parser_corpus(tmp_path, capsys):
    cases = round_trip_cases(200)
    assert len(cases) == 200
    for text, k in cases:
        a = parse_series(text, k)
        assert parse_series(format_series(a), k) == a, text
    assert len(MALFORMED) == 50
    for i, text in enumerate(MALFORMED):
        try:
            parse_series(text)
        except SeriesSyntaxError as exc:
            assert 0 <= exc.offset <= len(text.encode("utf-8"))
        else:
            raise AssertionError(f"{text!r} parsed")
        path = tmp_path / f"bad{i}.json"
        path.write_text(json.dumps({"n": 1, "entries": [[text]]}), encoding="utf-8")
        assert main(["smith", str(path)]) == 1
        assert "syntax error at entry (0, 0), byte" in capsys.readouterr().err

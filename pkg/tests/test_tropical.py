import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import brute_force_ray_distance
from snflimit.errors import OrdOfZero, ZeroCoordinate
from snflimit.parsing import parse_series
from snflimit.series import LaurentSeries, evaluate
from snflimit.tropical import (
    RaySet,
    amoeba_sample_line,
    distance_to_rayset,
    distances_to_rayset,
    log_map,
    on_line_amoeba,
    ray_probes,
    trop_point,
    tropical_line,
)

LINE = tropical_line()


def s(text, k=1):
    return parse_series(text, k)


def test_trop_point_examples():
    assert trop_point([s("t^2"), s("3*t^-1 + t")]).coordinates == (2, -1)
    assert trop_point([s("1"), s("1")]).coordinates == (0, 0)
    assert trop_point([s("t^(1/2)", 2), s("t", 2)]).coordinates == (Fraction(1, 2), 1)
    with pytest.raises(OrdOfZero) as info:
        trop_point([s("1"), LaurentSeries.zero()])
    assert info.value.index == 1


def test_trop_point_is_additive():
    rng = np.random.default_rng(0)
    for _ in range(50):
        f = [s(f"{rng.integers(1, 5)}*t^{rng.integers(-3, 4)} + t^5") for _ in range(3)]
        g = [s(f"{rng.integers(1, 5)}*t^{rng.integers(-3, 4)} - t^6") for _ in range(3)]
        assert trop_point([a * b for a, b in zip(f, g)]) == trop_point(f) + trop_point(g)


def test_log_map_examples():
    assert np.allclose(log_map([1, 1], 0.3), [0, 0])
    assert np.allclose(log_map([0.1, 10], 0.1), [1, -1])
    assert np.allclose(log_map([np.exp(0.4j), np.exp(-2.1j)], 0.01), [0, 0])
    with pytest.raises(ZeroCoordinate):
        log_map([1, 0], 0.5)


def test_log_map_tends_to_trop():
    rng = np.random.default_rng(1)
    schedule = [1e-2, 1e-4, 1e-6, 1e-8]
    for _ in range(20):
        fs = []
        for _ in range(3):
            e = int(rng.integers(-3, 4))
            fs.append(s(" + ".join(f"{rng.integers(1, 4)}*t^{e + j}" for j in range(int(rng.integers(1, 4))))))
        target = np.array([float(c) for c in trop_point(fs).coordinates])
        dev = [np.max(np.abs(log_map([evaluate(f, t) for f in fs], t) - target)) for t in schedule]
        c = dev[0] * abs(math.log(schedule[0]))
        for t, d in zip(schedule[1:], dev[1:]):
            assert d <= c / abs(math.log(t)) + 1e-12


def test_tropical_line_rays():
    assert LINE.vertex == (0.0, 0.0)
    assert set(LINE.directions) == {(1, 0), (0, 1), (-1, -1)}
    with pytest.raises(ValueError):
        RaySet((0.0, 0.0), ((Fraction(0), Fraction(0)),))


def test_distance_examples():
    assert distance_to_rayset((5, 0), LINE) == 0
    assert distance_to_rayset((-2, -2), LINE) == pytest.approx(0)
    assert distance_to_rayset((1, 1), LINE) == pytest.approx(1)


def test_distance_against_grid_search():
    rng = np.random.default_rng(2)
    pts = rng.uniform(-6, 6, size=(30, 2))
    fast = distances_to_rayset(pts, LINE)
    for p, d in zip(pts, fast):
        assert d == pytest.approx(distance_to_rayset(p, LINE), abs=1e-12)
        assert d == pytest.approx(brute_force_ray_distance(p, LINE.directions), abs=1e-3)


def test_amoeba_membership():
    pts = amoeba_sample_line(1, 1, 1, 0.1, 500, seed=3)
    assert pts.shape == (500, 2)
    assert all(on_line_amoeba(p, 0.1) for p in pts)
    assert not on_line_amoeba((3.0, 3.0), 0.1)


def test_amoeba_membership_general_coefficients():
    a, b, c = 2 - 1j, 0.5j, -3
    pts = amoeba_sample_line(a, b, c, 0.05, 300, seed=4)
    assert all(on_line_amoeba(p, 0.05, a, b, c) for p in pts)


def test_amoeba_sampling_is_deterministic_and_sorted():
    a = amoeba_sample_line(1, 1, 1, 0.01, 200, seed=5)
    assert np.array_equal(a, amoeba_sample_line(1, 1, 1, 0.01, 200, seed=5))
    assert np.array_equal(a, a[np.lexsort((a[:, 1], a[:, 0]))])


def test_amoeba_rejects_bad_arguments():
    with pytest.raises(ValueError):
        amoeba_sample_line(0, 1, 1, 0.1, 10)
    with pytest.raises(ValueError):
        amoeba_sample_line(1, 1, 1, 1.5, 10)


def _ks_statistic(x, y):
    grid = np.sort(np.concatenate([x, y]))
    fx = np.searchsorted(np.sort(x), grid, side="right") / len(x)
    fy = np.searchsorted(np.sort(y), grid, side="right") / len(y)
    return float(np.max(np.abs(fx - fy)))


def test_amoeba_symmetric_under_swap():
    pts = amoeba_sample_line(1, 1, 1, 0.01, 4000, seed=6)
    d = _ks_statistic(pts[:, 0], pts[:, 1])
    # two-sample critical value at the 0.1% level
    assert d <= 1.95 * math.sqrt(2 / len(pts))


def test_all_three_tentacles_populated():
    pts = amoeba_sample_line(1, 1, 1, 1e-3, 2000, seed=7)
    near = np.array([
        [np.linalg.norm(p - max(0.0, p @ d / (d @ d)) * d) for d in (np.array([1, 0]), np.array([0, 1]), np.array([-1, -1]))]
        for p in pts
        if np.linalg.norm(p) > 2
    ])
    assert np.all(np.bincount(near.argmin(axis=1), minlength=3) > 100)


def test_ray_probes():
    probes = ray_probes(LINE)
    assert probes.shape == (20, 2)
    assert np.allclose(distances_to_rayset(probes, LINE), 0)
    assert np.all(np.abs(probes) <= 5)

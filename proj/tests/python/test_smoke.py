import cmath
import math

import pytest

import sgl


def test_normalize_merges_and_measures():
    s = sgl.normalize([(0.5, 1.0), (0.0, 0.6), (2.0, 2.5)])
    assert s.intervals == [(0.0, 1.0), (2.0, 2.5)]
    assert s.measure == pytest.approx(1.5)
    assert s.contains(0.7)
    assert not s.contains(1.5)
    assert sgl.parse_spectrum(repr(s)[len("SpectrumSet("):-1]) == s


def test_project_and_gaps():
    s = sgl.normalize([(0.0, 0.1), (2.2, 2.4)])
    p = sgl.project(s, 1.0)
    assert p.measure == pytest.approx(0.3)
    g = sgl.gap_report(s, 1.0)
    assert g["weak"]
    assert g["complement_measure"] == pytest.approx(0.7)


def test_error_carries_kind():
    with pytest.raises(sgl.SglError) as info:
        sgl.project(sgl.normalize([(0.0, 1.0)]), -1.0)
    assert info.value.kind == "InvalidPeriod"


def test_gram_identity_and_frame():
    s = sgl.normalize([(0.0, 1.0)])
    g = sgl.gram([0.0, 1.0, 2.0, 3.0], s)
    for j in range(4):
        for k in range(4):
            assert abs(g[j, k] - (1.0 if j == k else 0.0)) < 1e-12
    rep = sgl.frame_report(list(range(16)), s, claimed=0.5)
    assert rep["min_eigenvalue"] == pytest.approx(1.0, abs=1e-12)
    assert rep["certified"]


def test_residual_and_blocks():
    a = sgl.normalize([(0.0, 0.6)])
    assert sgl.residual(0, [0, 1], a) == pytest.approx(0.0, abs=1e-9)
    assert sgl.residual(3, [], a) == pytest.approx(math.sqrt(0.6))
    b = sgl.build_blocks(a, 2, 64)
    assert b["blocks"][0] == (1, 0, 1)
    assert all(row[4] < row[5] for row in b["table"])


def test_dirichlet_and_window():
    assert sgl.dirichlet_value(5, 3.5, 0.0) == pytest.approx(1.0)
    assert sgl.dirichlet_value(5, 3.5, 2.0 / 3.5) == pytest.approx(1.0)
    assert sgl.window_phi(0.0) == pytest.approx(1.0)
    assert abs(sgl.window_phi(2.0)) == pytest.approx(28.0 / 70.0, abs=1e-12)


def test_least_norm_interpolant_witness():
    lam = [float(n) for n in range(-10, 11)] + [0.5]
    lam.sort()
    data = [1.0 if x == 0.5 else 0.0 for x in lam]
    f = sgl.least_norm_interpolant(lam, sgl.normalize([(0.0, 2.0)]), data)
    assert f["min_eigenvalue"] > 1e-6
    ev = f["evaluate"]
    assert abs(ev(0.5) - 1.0) < 1e-9
    assert max(abs(ev(float(n))) for n in range(-10, 11)) < 1e-9


def test_neumann_exponential_profile():
    lam = [float(n) for n in range(-25, 26)]
    r = sgl.neumann_interpolate(lam, 2.0, [1.0] * len(lam))
    expected = 2.0 * math.exp(-2.0) / (1.0 - math.exp(-2.0))
    assert r["contraction_norm"] == pytest.approx(expected, abs=1e-12)
    assert r["residual"] < 1e-10


def test_neumann_refuses_non_contraction():
    lam = [0.1 * n for n in range(40)]
    with pytest.raises(sgl.SglError) as info:
        sgl.neumann_interpolate(lam, 0.5, [1.0] * len(lam))
    assert info.value.kind == "NotContraction"


def test_monte_carlo_single_window():
    freq, stderr = sgl.mc_hit_probability(q=3.5, N=1, J=2, trials=4000, seed=5)
    assert abs(freq - 0.5) < 4 * stderr + 1e-3
    assert sgl.mc_hit_probability(3.5, 1, 2, 500, 9) == sgl.mc_hit_probability(3.5, 1, 2, 500, 9)


def test_sample_gamma_gaps():
    g = sgl.sample_gamma(3, 200)
    assert g[0] == 0.0
    assert all(3.0 <= b - a <= 4.0 for a, b in zip(g, g[1:]))


def test_random_pipeline_positive():
    r = sgl.random_pipeline(1)
    assert r["contained"]
    assert r["positive"]
    assert r["offdiag_max"] < 0.5


def test_periodized_identity():
    pieces = [(-0.4, 0.3, 1.0 + 0.5j), (0.8, 1.7, -0.25 + 0j)]
    c = sgl.periodized_coefficients(pieces, 0.25, 10)
    assert c["max_abs_difference"] < 1e-10
    assert sgl.periodized_l2([(0.0, 1.0, 1.0 + 0j)]) == pytest.approx(1.0)
    assert sgl.sobolev_norm([(0.0, 1.0, 1.0 + 0j)], 1.0) == pytest.approx(math.sqrt(4.0 / 3.0))

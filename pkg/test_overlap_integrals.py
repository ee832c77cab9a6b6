#!/usr/bin/env python3
"""
overlap_integrals 테스트
- 괄호식 테일러 급수 ↔ 직접 계산 (double / mpmath 확장 정밀도)
- 폐형식 ↔ 구-구 거리 밀도 1차원 적분 (scipy.integrate.quad)
- 몬테카를로 오라클 (3σ, 결정론, 작업자 수 무관)
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

import bose_thermo
import correlation
import overlap_integrals
from bose_thermo import GasSpec
from correlation import CorrelationKernel
from overlap_integrals import INFINITE, RegionGeometryError, RegionSpec


def _setup(t, n=1e14, N_total=1e6):
    thermo = bose_thermo.build_thermo_state(GasSpec(n=n, N_total=N_total, t=t))
    return thermo, CorrelationKernel(thermo, n)


def _separation_density(s, R):
    """같은 구 안 두 균일점 거리 s의 밀도 × Ω² (∫ = Ω²)"""
    omega = 4.0 * math.pi / 3.0 * R ** 3
    return omega * 4.0 * math.pi * s * s * (1.0 - 0.75 * s / R + s ** 3 / (16.0 * R ** 3))


@pytest.mark.parametrize('x', np.logspace(-3, -1, 21))
def test_series_matches_extended_precision_direct(x):
    for bracket in (overlap_integrals.aa_bracket, overlap_integrals.prime_bracket):
        direct = bracket(x, method='direct', dps=50)
        assert abs(bracket(x, method='series') - direct) <= 1e-9 * abs(direct)


@pytest.mark.parametrize('x', np.linspace(0.2, 1.0, 9))
def test_series_matches_double_direct_in_overlap_window(x):
    for bracket in (overlap_integrals.aa_bracket, overlap_integrals.prime_bracket):
        assert_allclose(bracket(x, method='series'), bracket(x, method='direct'), rtol=1e-9)


def test_bracket_leading_orders():
    x = 1e-6
    assert_allclose(overlap_integrals.aa_bracket(x) / x ** 4, 2.0, rtol=1e-5)
    assert_allclose(overlap_integrals.prime_bracket(x) / x ** 5, 1.0 / 30.0, rtol=1e-5)


def test_auto_switches_at_threshold():
    below = overlap_integrals.SERIES_THRESHOLD * (1 - 1e-9)
    above = overlap_integrals.SERIES_THRESHOLD * (1 + 1e-9)
    assert_allclose(overlap_integrals.aa_bracket(below), overlap_integrals.aa_bracket(above), rtol=1e-8)
    assert_allclose(overlap_integrals.prime_bracket(below), overlap_integrals.prime_bracket(above), rtol=1e-8)


@pytest.mark.parametrize('t', [0.6, 1.2, 1.5])
@pytest.mark.parametrize('kappa_r', [0.01, 0.3, 1.0, 4.0])
def test_closed_forms_match_distance_integral(t, kappa_r):
    thermo, _ = _setup(t)
    R = kappa_r / thermo.kappa
    region = RegionSpec(R=R)
    amplitude = thermo.z / thermo.lam ** 2

    def yukawa_sq(s):
        return _separation_density(s, R) * (amplitude * math.exp(-0.5 * thermo.kappa * s) / s) ** 2

    def twice_yukawa(s):
        return 2.0 * _separation_density(s, R) * amplitude * math.exp(-0.5 * thermo.kappa * s) / s

    expected_aa, _ = integrate.quad(yukawa_sq, 0.0, 2.0 * R, epsabs=0.0, epsrel=1e-12, limit=200)
    expected_prime, _ = integrate.quad(twice_yukawa, 0.0, 2.0 * R, epsabs=0.0, epsrel=1e-12, limit=200)
    assert_allclose(overlap_integrals.i1_aa_above(thermo, region), expected_aa, rtol=1e-9)
    assert_allclose(overlap_integrals.i1_prime(thermo, region), expected_prime, rtol=1e-9)


def test_i1_aa_decomposition():
    region = RegionSpec(R=1e-4)
    below, _ = _setup(0.5)
    terms = overlap_integrals.closed_form_terms(below, region)
    assert_allclose(terms['condensate_sq'], (below.n0 * region.Omega) ** 2, rtol=1e-15)
    assert overlap_integrals.i1_aa(below, region) == terms['total']
    above, _ = _setup(1.5)
    assert overlap_integrals.i1_aa(above, region) == overlap_integrals.i1_aa_above(above, region)
    assert overlap_integrals.closed_form_terms(above, region)['condensate_cross'] == 0.0


def test_onsite_condensate_terms_vanish_at_tc():
    region = RegionSpec(R=1e-4)
    at, _ = _setup(1.0)
    terms = overlap_integrals.closed_form_terms(at, region)
    assert terms['condensate_cross'] == 0.0 and terms['condensate_sq'] == 0.0

    condensate = []
    for eps in (1e-5, 1e-7, 1e-9):
        below, _ = _setup(1.0 - eps)
        terms = overlap_integrals.closed_form_terms(below, region)
        condensate.append(terms['condensate_cross'] + terms['condensate_sq'])
    assert all(a > b > 0.0 for a, b in zip(condensate, condensate[1:]))
    above, _ = _setup(1.0 + 1e-9)
    assert condensate[-1] < 1e-6 * overlap_integrals.i1_aa(above, region)


def test_onsite_yukawa_term_drops_below_tc():
    # 유한 N: t → 1⁻ 에서 z = N₀/(N₀+1) → 0, κ가 커져 Yukawa² 항이 위쪽 값보다 작아진다
    region = RegionSpec(R=1e-4)
    jumps = []
    for eps in (1e-3, 1e-5, 1e-7):
        below, _ = _setup(1.0 - eps)
        above, _ = _setup(1.0 + eps)
        low = overlap_integrals.closed_form_terms(below, region)['yukawa_sq']
        high = overlap_integrals.i1_aa(above, region)
        jumps.append((high - low) / high)
    assert all(a < b for a, b in zip(jumps, jumps[1:]))
    assert jumps[0] > 0.1 and jumps[-1] > 0.9


def test_onsite_integral_decreases_above_tc():
    region = RegionSpec(R=1e-4)
    values = [overlap_integrals.i1_aa_above(_setup(float(t))[0], region) for t in np.linspace(1.05, 3.0, 20)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_i1_aa_small_kappa_limit():
    thermo, _ = _setup(0.5)
    region = RegionSpec(R=1e-4)
    assert thermo.kappa * region.R < 0.05
    limit = 4.0 * math.pi ** 2 * thermo.z ** 2 * region.R ** 4 / thermo.lam ** 4
    assert_allclose(overlap_integrals.i1_aa_above(thermo, region), limit, rtol=0.05)


def test_i1_ab_infinite_and_finite():
    region = RegionSpec(R=1e-4)
    above, _ = _setup(1.5)
    below, _ = _setup(0.5)
    assert overlap_integrals.i1_ab(above, region) == 0.0
    assert_allclose(overlap_integrals.i1_ab(below, region), (below.n0 * region.Omega) ** 2, rtol=1e-15)

    finite = RegionSpec(R=1e-6, L_AB=10.0 * above.lam)
    rho = correlation.yukawa_rho1(above, finite.L_AB)
    assert_allclose(overlap_integrals.i1_ab(above, finite), (finite.Omega * rho) ** 2, rtol=1e-15)
    assert overlap_integrals.i1_ab(above, finite) > 0.0


def test_region_geometry_errors():
    with pytest.raises(RegionGeometryError):
        RegionSpec(R=0.0)
    with pytest.raises(RegionGeometryError):
        RegionSpec(R=1e-4, L_AB=2e-4)
    with pytest.raises(RegionGeometryError):
        RegionSpec(R=1e-4, L_AB=float('nan'))
    assert RegionSpec(R=1e-4).infinite
    assert_allclose(RegionSpec(R=1.0).Omega, 4.0 * math.pi / 3.0)


def test_sample_uniform_ball():
    rng = np.random.Generator(np.random.Philox(11))
    points = overlap_integrals.sample_uniform_ball(rng, 2.0, 200_000)
    assert points.shape == (200_000, 3)
    sq = np.sum(points * points, axis=1)
    assert np.all(sq <= 4.0)
    stderr = np.std(sq, ddof=1) / math.sqrt(len(sq))
    assert abs(np.mean(sq) - 0.6 * 4.0) <= 4.0 * stderr
    assert_allclose(np.mean(points, axis=0), 0.0, atol=0.02)


@pytest.mark.parametrize('t', [0.6, 1.2, 1.8])
def test_mc_oracle_on_site(t):
    thermo, kernel = _setup(t)
    region = RegionSpec(R=1e-4)
    estimate, stderr = overlap_integrals.mc_oracle(kernel, region, 'on-site', 200_000, seed=3)
    assert stderr > 0
    assert overlap_integrals.agrees_within(overlap_integrals.i1_aa(thermo, region), estimate, stderr)


@pytest.mark.parametrize('t', [0.6, 1.5])
def test_mc_oracle_cross(t):
    thermo, kernel = _setup(t)
    infinite = RegionSpec(R=1e-4)
    estimate, stderr = overlap_integrals.mc_oracle(kernel, infinite, 'cross', 50_000, seed=4)
    assert overlap_integrals.agrees_within(overlap_integrals.i1_ab(thermo, infinite), estimate, stderr)

    L = 10.0 * thermo.lam
    finite = RegionSpec(R=1e-5 * L, L_AB=L)
    estimate, stderr = overlap_integrals.mc_oracle(kernel, finite, 'cross', 200_000, seed=5)
    assert overlap_integrals.agrees_within(overlap_integrals.i1_ab(thermo, finite), estimate, stderr)


def test_mc_terms_match_closed_form_terms():
    thermo, kernel = _setup(0.8)
    region = RegionSpec(R=1e-4)
    terms = overlap_integrals.mc_oracle_terms(kernel, region, 'on-site', 200_000, seed=6)
    closed = overlap_integrals.closed_form_terms(thermo, region)
    for name in ('yukawa_sq', 'condensate_cross', 'condensate_sq', 'total'):
        estimate, stderr = terms[name]
        assert overlap_integrals.agrees_within(closed[name], estimate, stderr), name
    total = sum(terms[name][0] for name in ('yukawa_sq', 'condensate_cross', 'condensate_sq'))
    assert_allclose(total, terms['total'][0], rtol=1e-12)


def test_mc_oracle_is_deterministic_and_worker_independent():
    _, kernel = _setup(1.2)
    region = RegionSpec(R=1e-4)
    serial = overlap_integrals.mc_oracle(kernel, region, 'on-site', 300_000, seed=9)
    again = overlap_integrals.mc_oracle(kernel, region, 'on-site', 300_000, seed=9)
    threaded = overlap_integrals.mc_oracle(kernel, region, 'on-site', 300_000, seed=9, workers=4)
    assert serial == again == threaded
    other = overlap_integrals.mc_oracle(kernel, region, 'on-site', 300_000, seed=10)
    assert other != serial


def test_mc_oracle_accepts_custom_rho1():
    _, kernel = _setup(0.7)
    region = RegionSpec(R=1e-4)
    builtin = overlap_integrals.mc_oracle(kernel, region, 'on-site', 20_000, seed=1)
    custom = overlap_integrals.mc_oracle(
        kernel, region, 'on-site', 20_000, seed=1,
        rho1=lambda s: correlation.rho1_continuum(kernel, s),
    )
    assert_allclose(custom, builtin, rtol=1e-10)


def test_mc_oracle_argument_errors():
    _, kernel = _setup(1.5)
    region = RegionSpec(R=1e-4)
    with pytest.raises(ValueError):
        overlap_integrals.mc_oracle(kernel, region, 'on-site', 100, seed=0)
    with pytest.raises(ValueError):
        overlap_integrals.mc_oracle(kernel, region, 'diagonal', 20_000, seed=0)


def test_agrees_within():
    assert overlap_integrals.agrees_within(1.0, 1.02, 0.01)
    assert not overlap_integrals.agrees_within(1.0, 1.05, 0.01)
    assert overlap_integrals.agrees_within(0.0, 0.0, 0.0)
    assert INFINITE == math.inf

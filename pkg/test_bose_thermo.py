#!/usr/bin/env python3
"""
bose_thermo 테스트
- g₃/₂ 직접 급수/Robinson 전개 vs mpmath
- fugacity 두 분기와 t = 1 경계
- λ, n₀, μ
"""

import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose

import bose_thermo
from bose_thermo import GasSpec, ThermoDomainError


@pytest.mark.parametrize('z', [1e-6, 0.1, 0.5, 0.9, 0.99, 0.998, 0.999, 0.9995, 0.99999, 1.0 - 1e-9])
def test_polylog_matches_mpmath(z):
    with mpmath.workdps(30):
        expected = float(mpmath.polylog(1.5, mpmath.mpf(z)))
    assert abs(bose_thermo.polylog_three_halves(z) - expected) <= 1e-12


def test_polylog_branches_agree_at_switch():
    z = bose_thermo.ROBINSON_SWITCH
    assert abs(bose_thermo._polylog_series(z) - bose_thermo._polylog_robinson(z)) <= 1e-12


def test_polylog_endpoints_and_domain():
    assert bose_thermo.polylog_three_halves(0.0) == 0.0
    assert bose_thermo.polylog_three_halves(1.0) == bose_thermo.ZETA_3_2
    assert_allclose(bose_thermo.ZETA_3_2, float(mpmath.zeta(1.5)), rtol=1e-15)
    for z in (-0.1, 1.0 + 1e-12, 2.0):
        with pytest.raises(ThermoDomainError):
            bose_thermo.polylog_three_halves(z)


def test_zeta_constants():
    assert bose_thermo.zeta_three_halves(True) == 2.612
    assert_allclose(bose_thermo.zeta_three_halves(False), 2.6123753486854883, rtol=1e-14)


def test_fugacity_below_tc_closed_form():
    N = 1e6
    for t in (0.1, 0.5, 0.9, 0.999):
        N0 = N * (1.0 - t ** 1.5)
        assert bose_thermo.solve_fugacity(t, N) == N0 / (N0 + 1.0)


@pytest.mark.parametrize('t', [1.0, 1.001, 1.1, 1.5, 2.0, 5.0])
@pytest.mark.parametrize('paper_constants', [True, False])
def test_fugacity_above_tc_solves_density_equation(t, paper_constants):
    z = bose_thermo.solve_fugacity(t, 1e6, paper_constants)
    assert 0.0 < z < 1.0
    target = bose_thermo.zeta_three_halves(paper_constants) * t ** -1.5
    if z < np.nextafter(1.0, 0.0):
        assert abs(bose_thermo.polylog_three_halves(z) - target) <= 1e-10 * target


def test_fugacity_at_tc_full_precision_is_clamped_below_one():
    z = bose_thermo.solve_fugacity(1.0, 1e6, False)
    assert z == np.nextafter(1.0, 0.0)


def test_fugacity_is_monotone_on_each_side_of_transition():
    below = [bose_thermo.solve_fugacity(t, 1e6) for t in (0.5, 0.9, 0.99, 0.999)]
    above = [bose_thermo.solve_fugacity(t, 1e6) for t in (1.0, 1.001, 1.01, 1.2, 2.0)]
    assert all(a > b for a, b in zip(below, below[1:]))
    assert all(a > b for a, b in zip(above, above[1:]))
    assert all(0.0 < z < 1.0 for z in below + above)


def test_fugacity_jumps_up_at_tc():
    # 유한 N: t → 1⁻에서 N₀ → 0 이므로 z가 떨어지고, t = 1 에서 g₃/₂(z) = ζ(3/2) 해는 1에 붙는다
    z_below = bose_thermo.solve_fugacity(0.999, 1e6)
    z_at = bose_thermo.solve_fugacity(1.0, 1e6)
    assert z_below < z_at
    assert z_at > 1.0 - 1e-6
    assert bose_thermo.solve_fugacity(1.0 - 1e-9, 1e6) < z_below


def test_polylog_is_increasing_and_below_zeta():
    zs = np.concatenate([np.linspace(0.0, 0.999, 1999), 1.0 - np.logspace(-4, -12, 17)])
    values = [bose_thermo.polylog_three_halves(float(z)) for z in zs]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert max(values) < bose_thermo.ZETA_3_2


@pytest.mark.parametrize('t', [0.2, 0.5, 0.9])
def test_fugacity_increases_with_particle_number(t):
    zs = [bose_thermo.solve_fugacity(t, N) for N in np.logspace(0, 9, 10)]
    assert all(a < b for a, b in zip(zs, zs[1:]))


def test_kappa_lambda_identity_over_random_states():
    rng = np.random.Generator(np.random.Philox(11))
    for _ in range(200):
        spec = GasSpec(
            n=float(10.0 ** rng.uniform(12.0, 15.0)),
            N_total=float(10.0 ** rng.uniform(2.0, 8.0)),
            t=float(rng.uniform(0.05, 3.0)),
        )
        state = bose_thermo.build_thermo_state(spec)
        assert_allclose(state.kappa * state.lam, 2.0 * math.sqrt(4.0 * math.pi * (1.0 - state.z)), rtol=1e-14)


def test_fugacity_is_memoized():
    bose_thermo.solve_fugacity.cache_clear()
    bose_thermo.solve_fugacity(1.37, 1e6)
    bose_thermo.solve_fugacity(1.37, 1e6)
    info = bose_thermo.solve_fugacity.cache_info()
    assert info.hits == 1 and info.misses == 1


def test_thermal_wavelength():
    # λ³ n = ζ(3/2) at T_C
    lam = bose_thermo.thermal_wavelength(1e14, 1.0)
    assert_allclose(lam ** 3 * 1e14, 2.612, rtol=1e-14)
    assert_allclose(bose_thermo.thermal_wavelength(1e14, 4.0), 0.5 * lam, rtol=1e-14)
    with pytest.raises(ThermoDomainError):
        bose_thermo.thermal_wavelength(0.0, 1.0)


def test_ground_state_density_and_fraction():
    assert bose_thermo.ground_state_density(1e14, 1.0) == 0.0
    assert bose_thermo.ground_state_density(1e14, 1.5) == 0.0
    assert_allclose(bose_thermo.ground_state_density(1e14, 0.25), 1e14 * (1.0 - 0.125))
    assert_allclose(bose_thermo.condensate_fraction(0.25), 0.875)
    assert bose_thermo.condensate_fraction(1.2) == 0.0


def test_gas_spec_validation():
    for bad in ({'n': 0.0, 'N_total': 1e6, 't': 1.0},
                {'n': 1e14, 'N_total': 0.5, 't': 1.0},
                {'n': 1e14, 'N_total': 1e6, 't': -1.0}):
        with pytest.raises(ThermoDomainError):
            GasSpec(**bad)


def test_thermo_state_seam_has_no_condensate_above_tc():
    below = bose_thermo.build_thermo_state(GasSpec(1e14, 1e6, 0.999))
    at = bose_thermo.build_thermo_state(GasSpec(1e14, 1e6, 1.0))
    above = bose_thermo.build_thermo_state(GasSpec(1e14, 1e6, 1.001))
    assert below.below_tc and below.n0 > 0 and below.N0 > 0
    assert at.n0 == 0.0 and above.n0 == 0.0
    for state in (below, at, above):
        assert math.isfinite(state.kappa) and state.kappa > 0


def test_chemical_potential():
    below = bose_thermo.build_thermo_state(GasSpec(1e14, 1e6, 0.5))
    assert_allclose(bose_thermo.chemical_potential(below), -math.log1p(1.0 / below.N0), rtol=1e-15)
    assert_allclose(math.exp(bose_thermo.chemical_potential(below)), below.z, rtol=1e-12)
    above = bose_thermo.build_thermo_state(GasSpec(1e14, 1e6, 1.5))
    assert bose_thermo.chemical_potential(above) == math.log(above.z)

#!/usr/bin/env python3
"""
probe_state 테스트
- 부분 전치 (성분 배치, involution)
- 밀도 행렬 성질, E = P·N, 해석식 negativity (무작위 1000개)
- 진공 사영, 작은 결합 조건, 거짓 얽힘 기준선
"""

from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

import probe_state
from probe_state import Moments, ProbeDomainError, SmallnessError, VacuumOnlyError
from validation_suite import random_moment_tuples


@pytest.fixture(scope='module')
def random_tuples():
    rng = np.random.Generator(np.random.Philox(2024))
    return random_moment_tuples(rng, 1000)


def test_partial_transpose_layout():
    rho = np.arange(16).reshape(4, 4)
    expected = np.array([[0, 1, 8, 9],
                         [4, 5, 12, 13],
                         [2, 3, 10, 11],
                         [6, 7, 14, 15]])
    assert_array_equal(probe_state.partial_transpose_B(rho), expected)


def test_partial_transpose_is_involution(random_tuples):
    for m, gamma in random_tuples[:50]:
        rho = probe_state.build_probe_state(m, gamma)
        twice = probe_state.partial_transpose_B(probe_state.partial_transpose_B(rho))
        assert_array_equal(twice, rho.matrix)


def test_probe_states_are_valid_density_matrices(random_tuples):
    for m, gamma in random_tuples:
        rho = probe_state.build_probe_state(m, gamma)
        rho_prime, _ = probe_state.project_out_vacuum(rho)
        for state in (rho, rho_prime):
            assert state.is_hermitian()
            assert abs(state.trace - 1.0) <= 1e-12
            assert state.is_psd()


def test_weighted_entanglement_is_probability_times_negativity(random_tuples):
    for m, gamma in random_tuples:
        rho_prime, probability = probe_state.project_out_vacuum(probe_state.build_probe_state(m, gamma))
        e_value = probe_state.weighted_entanglement(m, gamma)
        assert abs(e_value - probability * probe_state.negativity(rho_prime)) <= 1e-12 * e_value
        assert_allclose(probability, probe_state.interaction_probability(m, gamma), rtol=1e-12)


def test_analytic_negativity_matches_eigensolver(random_tuples):
    for m, gamma in random_tuples:
        rho_prime, _ = probe_state.project_out_vacuum(probe_state.build_probe_state(m, gamma))
        assert abs(probe_state.negativity(rho_prime) - probe_state.analytic_negativity(m)) <= 1e-12


def test_negativity_tends_to_one_half():
    values = []
    for n_omega in (1e2, 1e3, 1e4):
        m = probe_state.limit_moments(n_omega)
        rho_prime, _ = probe_state.project_out_vacuum(probe_state.build_probe_state(m, 1e-6))
        value = probe_state.negativity(rho_prime)
        assert 0.5 - value < 1.0 / n_omega
        values.append(value)
    assert values[0] < values[1] < values[2] < 0.5


def test_asymmetric_moments():
    m = Moments(qa=10.0, qa2=150.0, qaqb=90.0, qb=8.0, qb2=100.0)
    assert not m.symmetric
    rho = probe_state.build_probe_state(m, 1e-3)
    assert rho.is_hermitian() and rho.is_psd()
    rho_prime, _ = probe_state.project_out_vacuum(rho)
    assert_allclose(probe_state.negativity(rho_prime), 90.0 / 250.0, rtol=1e-12)
    with pytest.raises(ProbeDomainError):
        probe_state.weighted_entanglement(m, 1e-3)


def test_moments_validation():
    with pytest.raises(ProbeDomainError):
        Moments(qa=-1.0, qa2=2.0, qaqb=1.0)
    with pytest.raises(ProbeDomainError):
        Moments(qa=10.0, qa2=50.0, qaqb=1.0)          # 분산 < 0
    with pytest.raises(ProbeDomainError):
        Moments(qa=1.0, qa2=2.0, qaqb=3.0)            # Cauchy-Schwarz
    assert Moments(qa=1.0, qa2=2.0, qaqb=2.0).symmetric


def test_smallness_warning_and_rejection():
    m = probe_state.limit_moments(1e3)
    assert probe_state.build_probe_state(m, 1e-5).warnings == ()
    warned = probe_state.build_probe_state(m, 5e-4)
    assert len(warned.warnings) == 1 and warned.warnings[0].startswith('smallness-warning')
    with pytest.raises(SmallnessError):
        probe_state.build_probe_state(m, 1e-3)
    assert_allclose(probe_state.smallness_metric(m, 5e-4), 0.5)


def test_vacuum_only_state():
    m = probe_state.limit_moments(10.0)
    rho = probe_state.build_probe_state(m, 0.0)
    assert_allclose(rho.matrix, np.diag([1.0, 0.0, 0.0, 0.0]))
    with pytest.raises(VacuumOnlyError):
        probe_state.project_out_vacuum(rho)
    assert probe_state.weighted_entanglement(m, 0.0) == 0.0
    with pytest.raises(ProbeDomainError):
        probe_state.build_probe_state(m, -1.0)


def test_false_entanglement():
    assert probe_state.false_entanglement(Fraction(1, 2)) == Fraction(1, 12)
    assert_allclose(probe_state.false_entanglement(0.01), 1e-4 * 0.99 ** 2 / 0.9999, rtol=1e-14)
    assert_allclose(probe_state.false_entanglement(0.01), 9.80198e-5, rtol=1e-5)
    assert probe_state.false_entanglement(0.0) == 0.0
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(ProbeDomainError):
            probe_state.false_entanglement(bad)


def test_probe_config_and_signal():
    from overlap_integrals import RegionSpec

    config = probe_state.ProbeConfig(region=RegionSpec(R=1e-4), gamma=2.4e-5)
    assert config.gamma == 2.4e-5
    with pytest.raises(ProbeDomainError):
        probe_state.ProbeConfig(region=RegionSpec(R=1e-4), gamma=0.0)
    with pytest.raises(ProbeDomainError):
        probe_state.ProbeConfig(region=None, gamma=2.4e-5)
    assert probe_state.condensation_signal(3e-4, 1e-4) == pytest.approx(2e-4)


def test_coupling_config_smallness_by_density():
    from overlap_integrals import RegionSpec

    config = probe_state.ProbeConfig(region=RegionSpec(R=1e-4), gamma=2.4e-5)
    assert_allclose(config.epsilon(1e14), 2.4e-5 * 1e14 * config.region.Omega, rtol=1e-15)
    assert config.check_smallness(1e14) == []
    warned = config.check_smallness(2e15)
    assert len(warned) == 1 and warned[0].startswith('smallness-warning')
    with pytest.raises(SmallnessError):
        config.check_smallness(1e16)

    m = probe_state.limit_moments(2e15 * config.region.Omega)
    assert config.epsilon(2e15) == probe_state.smallness_metric(m, config.gamma)


def test_compute_moments_from_gas():
    import bose_thermo
    import overlap_integrals
    from correlation import CorrelationKernel
    from overlap_integrals import RegionSpec

    region = RegionSpec(R=1e-4)
    thermo = bose_thermo.build_thermo_state(bose_thermo.GasSpec(n=1e14, N_total=1e6, t=0.5))
    integrals = overlap_integrals.compute_integrals(thermo, region)
    assert integrals.method_tag == 'closed-form'
    m = probe_state.compute_moments(CorrelationKernel(thermo, 1e14), region, integrals)
    n_omega = 1e14 * region.Omega
    assert m.symmetric
    assert_allclose(m.qa, n_omega, rtol=1e-15)
    assert_allclose(m.qa2, n_omega + n_omega ** 2 + integrals.i_aa, rtol=1e-15)
    assert_allclose(m.qaqb, n_omega ** 2 + integrals.i_ab, rtol=1e-15)
    assert m.qa2 > m.qaqb > n_omega ** 2


def test_check_smallness_levels():
    m = probe_state.limit_moments(100.0)
    assert probe_state.check_smallness(m, 1e-4) == []
    assert probe_state.check_smallness(m, 2e-3)[0].startswith('smallness-warning')
    with pytest.raises(SmallnessError):
        probe_state.check_smallness(m, 1e-2)

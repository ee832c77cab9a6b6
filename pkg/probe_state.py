#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
probe_state.py
두 탐침(2준위) 상태 및 얽힘 계산 모듈

기저 순서: |00⟩, |10⟩, |01⟩, |11⟩ (첫 자리 A, 둘째 자리 B, 평탄 인덱스 = i_A + 2·j_B)

- compute_moments: 기체 모멘트 ⟨Q_A⟩, ⟨Q_A²⟩, ⟨Q_AQ_B⟩
- build_probe_state: 4×4 밀도 행렬
- project_out_vacuum: |00⟩ 제거 및 상호작용 확률
- partial_transpose_B / negativity: 부분 전치와 negativity
- weighted_entanglement / false_entanglement: 가중 얽힘과 거짓 얽힘 기준선
"""

from dataclasses import dataclass, field

import numpy as np


SMALLNESS_WARN = 0.1
SMALLNESS_REJECT = 1.0

HERMITIAN_TOL = 1e-14
PSD_TOL = 1e-12


class SmallnessError(ValueError):
    """Γ·n·Ω ≥ 1: |11⟩ 절단 모델의 유효 범위 밖"""


class VacuumOnlyError(ValueError):
    """진공 사영 후 trace가 0 (상호작용 사건 없음)"""


class ProbeDomainError(ValueError):
    """모멘트/결합 상수/ε 정의역 위반"""


@dataclass(frozen=True)
class Moments:
    """
    기체 모멘트

    qb, qb2는 비대칭 영역일 때만 지정한다 (None이면 qa, qa2와 같음).
    """
    qa: float
    qa2: float
    qaqb: float
    qb: float | None = None
    qb2: float | None = None

    def __post_init__(self):
        if self.qa < 0 or self.qaqb < 0:
            raise ProbeDomainError(f"⟨Q_A⟩, ⟨Q_AQ_B⟩는 음수일 수 없습니다: {self}")
        for mean, second in ((self.qa, self.qa2), (self.qb_value, self.qb2_value)):
            if second - mean * mean < -PSD_TOL * max(second, 1.0):
                raise ProbeDomainError(f"분산이 음수입니다: ⟨Q²⟩={second}, ⟨Q⟩={mean}")
        bound = np.sqrt(self.qa2 * self.qb2_value)
        if self.qaqb > bound * (1.0 + PSD_TOL):
            raise ProbeDomainError(f"Cauchy-Schwarz 위반: ⟨Q_AQ_B⟩={self.qaqb} > {bound}")

    @property
    def qb_value(self):
        return self.qa if self.qb is None else self.qb

    @property
    def qb2_value(self):
        return self.qa2 if self.qb2 is None else self.qb2

    @property
    def symmetric(self):
        return self.qb_value == self.qa and self.qb2_value == self.qa2


@dataclass(frozen=True)
class ProbeConfig:
    """
    탐침 설정: 영역과 적분 결합 상수 Γ

    Attributes:
        region (RegionSpec): 두 탐침의 결합 영역
        gamma: 결합 상수 Γ (> 0)
    """
    region: object
    gamma: float

    def __post_init__(self):
        if not (self.gamma > 0):
            raise ProbeDomainError(f"gamma는 양수여야 합니다: {self.gamma}")
        if not (getattr(self.region, 'Omega', 0.0) > 0):
            raise ProbeDomainError(f"영역 부피 Ω가 양수여야 합니다: {self.region!r}")

    def epsilon(self, n):
        """유효성 지표 Γ·n·Ω (compute_moments의 ⟨Q_A⟩와 같은 곱셈 순서)"""
        return self.gamma * (n * self.region.Omega)

    def check_smallness(self, n):
        """
        밀도 n에서의 작은 결합 조건

        Returns:
            list[str]: 경고 문자열

        Raises:
            SmallnessError: Γ·n·Ω ≥ 1
        """
        return _smallness_notes(self.epsilon(n))


@dataclass(frozen=True)
class ProbeState:
    """
    4×4 복소 에르미트 밀도 행렬

    Attributes:
        matrix: ndarray (4, 4)
        normalized: trace = 1 여부
        warnings: 생성 중 기록된 경고 문자열
    """
    matrix: np.ndarray
    normalized: bool = True
    warnings: tuple = field(default=())

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def is_hermitian(self, tol=HERMITIAN_TOL):
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def is_psd(self, tol=PSD_TOL):
        return self.min_eigenvalue() >= -tol * self.trace


def compute_moments(kernel, region, integrals):
    """
    기체 모멘트 계산

    ⟨Q_A⟩ = nΩ, ⟨Q_A²⟩ = nΩ + n²Ω² + I₁ᴬᴬ, ⟨Q_AQ_B⟩ = n²Ω² + I₁ᴬᴮ

    Args:
        kernel (CorrelationKernel): 밀도 n 제공
        region (RegionSpec): 영역 부피 Ω
        integrals (IntegralSet): 같은 상태/영역의 적분

    Returns:
        Moments
    """
    n_omega = kernel.n * region.Omega
    return Moments(
        qa=n_omega,
        qa2=n_omega + n_omega * n_omega + integrals.i_aa,
        qaqb=n_omega * n_omega + integrals.i_ab,
    )


def limit_moments(n_omega):
    """t → 0 극한 모멘트 (n₀ = n, Yukawa 항 0)"""
    sq = n_omega * n_omega
    return Moments(qa=n_omega, qa2=n_omega + 2.0 * sq, qaqb=2.0 * sq)


def smallness_metric(m, gamma):
    """유효성 지표 Γ·⟨Q_A⟩ = Γ·n·Ω"""
    return gamma * max(m.qa, m.qb_value)


def check_smallness(m, gamma):
    """
    작은 결합 조건 검사

    Returns:
        list[str]: 경고 문자열 (Γ·n·Ω > 0.1)

    Raises:
        SmallnessError: Γ·n·Ω ≥ 1
    """
    return _smallness_notes(smallness_metric(m, gamma))


def _smallness_notes(metric):
    if metric >= SMALLNESS_REJECT:
        raise SmallnessError(f"Γ·n·Ω = {metric:.4g} ≥ {SMALLNESS_REJECT}: 절단 모델 유효 범위 밖")
    if metric > SMALLNESS_WARN:
        return [f"smallness-warning: Γ·n·Ω = {metric:.4g} > {SMALLNESS_WARN}"]
    return []


def build_probe_state(m, gamma):
    """
    두 탐침 밀도 행렬

    [[1,        iΓ⟨Q_A⟩,    iΓ⟨Q_B⟩,    0],
     [-iΓ⟨Q_A⟩, Γ²⟨Q_A²⟩,   Γ²⟨Q_AQ_B⟩, 0],
     [-iΓ⟨Q_B⟩, Γ²⟨Q_AQ_B⟩, Γ²⟨Q_B²⟩,   0],
     [0,        0,          0,          0]] / (1 + Γ²(⟨Q_A²⟩ + ⟨Q_B²⟩))

    Γ⁴ 차수인 |11⟩ 행/열은 버린다.

    Args:
        m (Moments): 기체 모멘트
        gamma: 결합 상수 Γ (≥ 0)

    Returns:
        ProbeState
    """
    if gamma < 0:
        raise ProbeDomainError(f"gamma는 음수일 수 없습니다: {gamma}")
    notes = check_smallness(m, gamma)

    qa, qb = m.qa, m.qb_value
    qa2, qb2 = m.qa2, m.qb2_value
    g2 = gamma * gamma
    matrix = np.array([
        [1.0, 1j * gamma * qa, 1j * gamma * qb, 0.0],
        [-1j * gamma * qa, g2 * qa2, g2 * m.qaqb, 0.0],
        [-1j * gamma * qb, g2 * m.qaqb, g2 * qb2, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ], dtype=complex)
    matrix /= 1.0 + g2 * (qa2 + qb2)
    return ProbeState(matrix=matrix, normalized=True, warnings=tuple(notes))


def project_out_vacuum(rho):
    """
    진공 사영 P = 1 - |00⟩⟨00|

    Returns:
        tuple: (ProbeState ρ′ = PρP/tr(PρP), 상호작용 확률 tr(PρP))

    Raises:
        VacuumOnlyError: tr(PρP) = 0
    """
    projector = np.diag([0.0, 1.0, 1.0, 1.0])
    projected = projector @ rho.matrix @ projector
    probability = float(np.trace(projected).real)
    if probability <= 0.0:
        raise VacuumOnlyError("진공 사영 후 상태가 없습니다 (Γ = 0).")
    return ProbeState(matrix=projected / probability, normalized=True, warnings=rho.warnings), probability


def partial_transpose_B(rho):
    """
    B 부분 전치: ⟨ij|ρ^{T_B}|kl⟩ = ⟨il|ρ|kj⟩

    평탄 인덱스 i + 2j를 (j, i, l, k) 텐서로 펼친 뒤 B 축 두 개를 교환한다.

    Args:
        rho: ProbeState 또는 4×4 배열

    Returns:
        ndarray: 4×4
    """
    matrix = rho.matrix if isinstance(rho, ProbeState) else np.asarray(rho)
    return matrix.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)


def negativity(rho_prime):
    """부분 전치의 음의 고유값 절댓값 합"""
    eigenvalues = np.linalg.eigvalsh(partial_transpose_B(rho_prime))
    return float(-np.sum(eigenvalues[eigenvalues < 0.0]))


def analytic_negativity(m):
    """N = ⟨Q_AQ_B⟩ / (⟨Q_A²⟩ + ⟨Q_B²⟩)"""
    return m.qaqb / (m.qa2 + m.qb2_value)


def interaction_probability(m, gamma):
    """P = Γ²(⟨Q_A²⟩+⟨Q_B²⟩) / (1 + Γ²(⟨Q_A²⟩+⟨Q_B²⟩))"""
    s = gamma * gamma * (m.qa2 + m.qb2_value)
    return s / (1.0 + s)


def weighted_entanglement(m, gamma):
    """
    가중 얽힘 E = Γ²⟨Q_AQ_B⟩ / (1 + 2Γ²⟨Q_A²⟩)

    대칭 영역 모멘트만 허용한다.

    Examples:
        >>> weighted_entanglement(Moments(qa=1.0, qa2=2.0, qaqb=1.0), 0.0)
        0.0
    """
    if not m.symmetric:
        raise ProbeDomainError("weighted_entanglement는 대칭 영역 모멘트만 지원합니다.")
    g2 = gamma * gamma
    return g2 * m.qaqb / (1.0 + 2.0 * g2 * m.qa2)


def false_entanglement(epsilon):
    """
    거짓 얽힘 E_F = ε²(1-ε)² / (1-ε²)

    fractions.Fraction을 넣으면 정확한 유리수로 계산된다.

    Examples:
        >>> from fractions import Fraction
        >>> false_entanglement(Fraction(1, 2))
        Fraction(1, 12)
    """
    if not (0 <= epsilon < 1):
        raise ProbeDomainError(f"ε는 [0, 1) 범위여야 합니다: {epsilon}")
    return epsilon ** 2 * (1 - epsilon) ** 2 / (1 - epsilon ** 2)


def condensation_signal(e_value, e_plateau):
    """응축 신호: E - (임계온도 위 배경값)"""
    return e_value - e_plateau


if __name__ == '__main__':
    print("=== probe_state 테스트 ===")
    for n_omega in (1e2, 1e3, 1e4):
        m = limit_moments(n_omega)
        rho = build_probe_state(m, 1e-6)
        rho_prime, p = project_out_vacuum(rho)
        print(f"  nΩ={n_omega:g}  N={negativity(rho_prime):.8f}  해석식={analytic_negativity(m):.8f}")
    print(f"  E_F(0.01) = {false_entanglement(0.01):.10e}")
    print("=== 테스트 완료 ===")

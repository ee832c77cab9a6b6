#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
correlation.py
기체 상관 함수 모듈

- rho1_continuum: 연속 극한 1체 밀도 행렬 ρ₁(r) = (z/λ²)·e^{-κr/2}/r (+ n₀)
- pair_distribution: 이상 기체 쌍 분포 g(r) = 1 + (ρ₁/n)²
- rho1_continuum_series: 저파수 근사 이전의 연속 ρ₁ (j-합)
- rho1_mode_sum: 유한 상자 모드 합 (연속 폐형식 검증용 오라클)
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

import bose_thermo


MODE_CUTOFF_TOL = 1e-12

# j-합 상한 (임계온도 아래 z → 1에서 꼬리는 g₃/₂로 보정)
CONTINUUM_SERIES_MAX_TERMS = 2_000_000


class CorrelationDomainError(ValueError):
    """상관 함수 정의역 위반 (r = 0, 상자 밖 r 등)"""


class CutoffWarning(UserWarning):
    """모드 합 절단 l_max가 점유수 기준을 만족하지 못함"""


@dataclass(frozen=True)
class CorrelationKernel:
    """ρ₁ 계산에 필요한 파라미터 묶음 (z, λ, κ, n₀ + 밀도 n)"""
    thermo: bose_thermo.ThermoState
    n: float

    def __post_init__(self):
        if not (self.n > 0):
            raise CorrelationDomainError(f"n은 양수여야 합니다: {self.n}")
        if self.thermo.n0 > self.n * (1.0 + 1e-12):
            raise CorrelationDomainError(
                f"n₀({self.thermo.n0})가 n({self.n})보다 클 수 없습니다."
            )


@dataclass(frozen=True)
class BoxSpec:
    """
    양자화 상자

    Attributes:
        L: 상자 한 변 [cm]
        l_max: 축당 모드 절단 (|l_i| ≤ l_max)
    """
    L: float
    l_max: int

    def __post_init__(self):
        if not (self.L > 0):
            raise CorrelationDomainError(f"L은 양수여야 합니다: {self.L}")
        if int(self.l_max) < 1:
            raise CorrelationDomainError(f"l_max는 1 이상이어야 합니다: {self.l_max}")

    @property
    def volume(self):
        return self.L ** 3


def _as_distance(r):
    """스칼라/배열 거리 검사 (r > 0)"""
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise CorrelationDomainError("연속 ρ₁은 r > 0에서만 정의됩니다 (r = 0은 대각 밀도 n).")
    return arr


def _unwrap(value, like):
    return float(value) if np.ndim(like) == 0 else value


def yukawa_rho1(thermo, r):
    """
    Yukawa 항 (z/λ²)·e^{-κr/2}/r

    Args:
        thermo (ThermoState): 열역학 상태
        r: 거리 [cm] (스칼라 또는 배열, > 0)
    """
    arr = _as_distance(r)
    value = thermo.z / thermo.lam ** 2 * np.exp(-0.5 * thermo.kappa * arr) / arr
    return _unwrap(value, r)


def yukawa_term(kernel, r):
    """ρ₁의 Yukawa 부분만 반환"""
    return yukawa_rho1(kernel.thermo, r)


def rho1_continuum(kernel, r):
    """
    연속 극한 1체 밀도 행렬

    ρ₁(r) = (z/λ²)·e^{-(κ/2)r}/r + n₀ (n₀는 t < 1에서만 0이 아님)

    Args:
        kernel (CorrelationKernel): 상관 파라미터
        r: 거리 [cm] (> 0)

    Returns:
        float 또는 ndarray: ρ₁ [cm⁻³]

    Examples:
        >>> state = bose_thermo.build_thermo_state(bose_thermo.GasSpec(1e14, 1e6, 2.0))
        >>> rho1_continuum(CorrelationKernel(state, 1e14), 1e3 * state.lam)
        0.0
    """
    arr = _as_distance(r)
    value = yukawa_rho1(kernel.thermo, arr) + kernel.thermo.n0
    return _unwrap(value, r)


def pair_distribution(kernel, r):
    """쌍 분포 g(r) = 1 + (ρ₁(r)/n)²"""
    rho = rho1_continuum(kernel, r)
    return 1.0 + (rho / kernel.n) ** 2


def rho1_continuum_series(kernel, r):
    """
    저파수 근사 이전의 연속 ρ₁

    ρ₁(r) = λ⁻³ Σ_{j≥1} z^j j^{-3/2} e^{-πr²/(jλ²)} (+ n₀)

    항 수가 CONTINUUM_SERIES_MAX_TERMS를 넘으면 나머지는 g₃/₂(z)에서 부분합을 뺀 값에
    경계 감쇠 인자를 곱해 더한다.

    Args:
        kernel (CorrelationKernel): 상관 파라미터
        r: 거리 [cm] (스칼라, > 0)
    """
    r = float(_as_distance(r))
    thermo = kernel.thermo
    z, lam = thermo.z, thermo.lam

    terms_needed = math.ceil(math.log(1e-16) / math.log(z))
    J = min(terms_needed, CONTINUUM_SERIES_MAX_TERMS)
    j = np.arange(1, J + 1, dtype=float)
    power = np.exp(j * math.log(z) - 1.5 * np.log(j))
    partial = math.fsum(power * np.exp(-math.pi * r * r / (j * lam * lam)))

    tail = 0.0
    if J < terms_needed:
        tail = max(bose_thermo.polylog_three_halves(z) - math.fsum(power), 0.0)
        tail *= math.exp(-math.pi * r * r / (J * lam * lam))

    return (partial + tail) / lam ** 3 + thermo.n0


def reduced_energy(lam, k_sq):
    """βE_k = λ²k²/(4π) (질량 없는 환산 단위)"""
    return lam * lam * np.asarray(k_sq, dtype=float) / (4.0 * math.pi)


def mode_occupations(thermo, box, l_sq):
    """
    Bose 점유수 N_k = 1/(e^{βE_k - βμ} - 1)

    Args:
        thermo (ThermoState): 열역학 상태
        box (BoxSpec): 상자
        l_sq: 정수 모드 벡터의 제곱 노름 |l|² (배열)

    Returns:
        ndarray: 점유수 (k = 0은 z/(1-z))
    """
    k_sq = (2.0 * math.pi / box.L) ** 2 * np.asarray(l_sq, dtype=float)
    x = reduced_energy(thermo.lam, k_sq) - bose_thermo.chemical_potential(thermo)
    return 1.0 / np.expm1(x)


def box_for_gas(spec, thermo=None, tol=MODE_CUTOFF_TOL):
    """
    기체 입력에 맞는 상자와 최소 절단 l_max

    L = (N_total/n)^{1/3}, 면 중심 모드(|l| = l_max)의 점유수가 최대 점유수의 tol 미만이 되는
    가장 작은 l_max를 고른다.
    """
    if thermo is None:
        thermo = bose_thermo.build_thermo_state(spec)
    L = (spec.N_total / spec.n) ** (1.0 / 3.0)
    mu = bose_thermo.chemical_potential(thermo)
    n_max = 1.0 / math.expm1(-mu)
    x_needed = math.log1p(1.0 / (tol * n_max))
    energy_needed = max(x_needed + mu, 0.0)
    l_max = max(1, math.ceil(L / thermo.lam * math.sqrt(energy_needed / math.pi)))
    return BoxSpec(L=L, l_max=l_max)


def _check_cutoff(thermo, box, tol):
    occupations = mode_occupations(thermo, box, [0.0, float(box.l_max) ** 2])
    if occupations[1] >= tol * occupations[0]:
        warnings.warn(
            f"모드 합 절단 부족: l_max={box.l_max}, "
            f"N(l_max)/N(0)={occupations[1] / occupations[0]:.3e} ≥ {tol:g}",
            CutoffWarning,
            stacklevel=3,
        )


def rho1_mode_sum(spec, box, r, thermo=None, tol=MODE_CUTOFF_TOL):
    """
    유한 상자 모드 합 ρ₁(r) = (1/V)·Σ_k N_k·e^{ik·r}

    x축 슬래브마다 y/z 위상을 행렬곱으로 묶어 계산하고, 슬래브 기여는 math.fsum으로 누적한다.
    누적 순서와 무관하게 같은 값을 돌려준다.

    Args:
        spec (GasSpec): 기체 입력
        box (BoxSpec): 상자와 절단
        r: 분리 벡터 (3,) 또는 (m, 3) [cm], |r| < L/2
        thermo (ThermoState, optional): 미리 계산한 상태
        tol: 절단 점유수 기준

    Returns:
        float 또는 ndarray(m,): 실수 ρ₁ [cm⁻³]
    """
    if thermo is None:
        thermo = bose_thermo.build_thermo_state(spec)

    vectors = np.atleast_2d(np.asarray(r, dtype=float))
    if vectors.shape[-1] != 3:
        raise CorrelationDomainError(f"r은 3차원 벡터여야 합니다: shape={vectors.shape}")
    if np.any(np.linalg.norm(vectors, axis=1) >= 0.5 * box.L):
        raise CorrelationDomainError("|r| < L/2 범위를 벗어났습니다 (주기 이미지 영향).")

    _check_cutoff(thermo, box, tol)

    l = np.arange(-box.l_max, box.l_max + 1, dtype=float)
    k = 2.0 * math.pi * l / box.L
    phase_x = np.exp(1j * np.outer(vectors[:, 0], k))
    phase_y = np.exp(1j * np.outer(vectors[:, 1], k))
    phase_z = np.exp(1j * np.outer(vectors[:, 2], k))
    l_sq_yz = l[:, None] ** 2 + l[None, :] ** 2

    slabs = []
    for ix, lx in enumerate(l):
        occupations = mode_occupations(thermo, box, lx * lx + l_sq_yz)
        slab = np.einsum('mz,mz->m', phase_y @ occupations, phase_z)
        slabs.append((phase_x[:, ix] * slab).real)

    slabs = np.array(slabs)
    values = np.array([math.fsum(slabs[:, m]) for m in range(vectors.shape[0])]) / box.volume
    if np.ndim(r) == 1:
        return float(values[0])
    return values


if __name__ == '__main__':
    print("=== correlation 테스트 ===")
    spec = bose_thermo.GasSpec(n=1e14, N_total=1e6, t=1.2)
    state = bose_thermo.build_thermo_state(spec)
    kernel = CorrelationKernel(state, spec.n)
    box = box_for_gas(spec, state)
    print(f"  L={box.L:.4e} cm, l_max={box.l_max}")
    for factor in (0.5, 1.0, 2.0, 3.0):
        r = factor * state.lam
        mode = rho1_mode_sum(spec, box, [r, 0.0, 0.0], thermo=state)
        series = rho1_continuum_series(kernel, r)
        closed = rho1_continuum(kernel, r)
        print(f"  r={factor}λ  모드합={mode:.6e}  j-합={series:.6e}  폐형식={closed:.6e}")
    print("=== 테스트 완료 ===")

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
bose_thermo.py
이상 보즈 기체 열역학 모듈 (환산 단위)

대정준 앙상블에서 필요한 값들을 계산:
- polylog_three_halves: g₃/₂(z) 다중로그 함수
- solve_fugacity: 임계온도 위/아래 fugacity z
- thermal_wavelength: 열적 파장 λ = (ζ/n)^{1/3} t^{-1/2}
- ground_state_density: 응축 밀도 n₀
- build_thermo_state: 위 값들을 묶은 ThermoState (κ 포함)

질량, ħ 등은 입력으로 받지 않는다. 모든 물리량은 (n, t = T/T_C, N_total)로 결정된다.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy import optimize, special


# ζ(3/2): 반올림 값(2.612)과 전체 정밀도 값
ZETA_3_2_ROUNDED = 2.612
ZETA_3_2 = float(special.zeta(1.5))

# 직접 급수 합산 / Robinson 전개 경계
ROBINSON_SWITCH = 0.999
SERIES_TAIL_TOL = 1e-13

FUGACITY_RTOL = 4 * np.finfo(float).eps
FUGACITY_XTOL = 1e-15


class ThermoDomainError(ValueError):
    """열역학 함수 정의역 위반 (z ∉ [0, 1], t ≤ 0, n ≤ 0 등)"""


class FugacityConvergenceError(RuntimeError):
    """fugacity 근 탐색 실패 (유효 입력에서는 발생하면 안 되는 내부 오류)"""


def _robinson_coefficients(terms=16):
    """ζ(3/2 - k)/k! 계수 (mpmath 50자리로 한 번만 계산)"""
    with mpmath.workdps(50):
        half3 = mpmath.mpf(3) / 2
        return tuple(
            float(mpmath.zeta(half3 - k) / mpmath.factorial(k))
            for k in range(terms)
        )


_ROBINSON_COEFFS = _robinson_coefficients()
_ROBINSON_POLY = np.array(_ROBINSON_COEFFS[::-1])


@dataclass(frozen=True)
class GasSpec:
    """
    기체 입력 파라미터

    Attributes:
        n: 입자 밀도 [cm⁻³]
        N_total: 전체 입자 수
        t: 환산 온도 T/T_C
        paper_constants: True면 ζ(3/2) = 2.612 사용
    """
    n: float
    N_total: float
    t: float
    paper_constants: bool = True

    def __post_init__(self):
        if not (self.n > 0):
            raise ThermoDomainError(f"n은 양수여야 합니다: {self.n}")
        if not (self.N_total >= 1):
            raise ThermoDomainError(f"N_total은 1 이상이어야 합니다: {self.N_total}")
        if not (self.t > 0):
            raise ThermoDomainError(f"t는 양수여야 합니다: {self.t}")


@dataclass(frozen=True)
class ThermoState:
    """
    유도된 열역학 상태

    Attributes:
        t: 환산 온도
        z: fugacity (0 < z < 1)
        lam: 열적 파장 λ [cm]
        n0: 응축 밀도 [cm⁻³]
        N0: 응축 입자 수
        kappa: κ = 2√(4π(1-z))/λ [cm⁻¹]
    """
    t: float
    z: float
    lam: float
    n0: float
    N0: float
    kappa: float

    @property
    def below_tc(self):
        return self.t < 1.0


def zeta_three_halves(paper_constants=True):
    """ζ(3/2) 상수 (paper_constants: 2.612)"""
    return ZETA_3_2_ROUNDED if paper_constants else ZETA_3_2


def _series_terms_needed(z):
    """
    직접 급수의 꼬리 합이 SERIES_TAIL_TOL 미만이 되는 항 수

    꼬리 Σ_{l>L} z^l/l^{3/2} ≤ z^{L+1}/(1-z) 로 상한을 잡는다.
    """
    return max(1, math.ceil(math.log(SERIES_TAIL_TOL * (1.0 - z)) / math.log(z)))


def _polylog_series(z):
    l = np.arange(1, _series_terms_needed(z) + 1, dtype=float)
    terms = np.exp(l * math.log(z) - 1.5 * np.log(l))
    return math.fsum(terms)


def _polylog_robinson(z):
    """z → 1 근처: g₃/₂(e^μ) = -2√π √(-μ) + Σ_k ζ(3/2-k) μ^k/k!"""
    mu = math.log(z)
    return -2.0 * math.sqrt(math.pi) * math.sqrt(-mu) + float(np.polyval(_ROBINSON_POLY, mu))


def polylog_three_halves(z):
    """
    다중로그 g₃/₂(z) = Σ_{l≥1} z^l / l^{3/2}

    z ≤ 0.999는 꼬리 상한을 둔 직접 합산, 그 위는 Robinson 전개를 사용한다.

    Args:
        z: fugacity, 0 ≤ z ≤ 1

    Returns:
        float: g₃/₂(z) (절대 오차 ≤ 1e-12)

    Examples:
        >>> polylog_three_halves(0.0)
        0.0
        >>> round(polylog_three_halves(1.0), 4)
        2.6124
    """
    z = float(z)
    if not (0.0 <= z <= 1.0):
        raise ThermoDomainError(f"g₃/₂ 정의역은 [0, 1]입니다: z={z}")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return ZETA_3_2
    if z <= ROBINSON_SWITCH:
        return _polylog_series(z)
    return _polylog_robinson(z)


@lru_cache(maxsize=4096)
def solve_fugacity(t, N_total, paper_constants=True):
    """
    fugacity z 계산

    - t < 1: N₀ = N_total·(1 - t^{3/2}), z = N₀/(N₀+1)
    - t ≥ 1: g₃/₂(z) = ζ(3/2)·t^{-3/2} 의 근 (이분법)

    t = 1에서 응축 분기는 z = 0이 되므로 연속 분기를 사용한다.
    전체 정밀도 모드에서 t = 1의 근은 z = 1이며, 1 바로 아래의 double로 고정한다.

    Args:
        t: 환산 온도 (> 0)
        N_total: 전체 입자 수 (≥ 1)
        paper_constants: ζ(3/2) = 2.612 사용 여부

    Returns:
        float: z (0 < z < 1)
    """
    if not (t > 0):
        raise ThermoDomainError(f"t는 양수여야 합니다: {t}")
    if not (N_total >= 1):
        raise ThermoDomainError(f"N_total은 1 이상이어야 합니다: {N_total}")

    if t < 1.0:
        N0 = N_total * (1.0 - t ** 1.5)
        return N0 / (N0 + 1.0)

    target = zeta_three_halves(paper_constants) * t ** -1.5
    upper = np.nextafter(1.0, 0.0)
    if target >= polylog_three_halves(upper):
        return float(upper)

    root, info = optimize.bisect(
        lambda z: polylog_three_halves(z) - target,
        0.0, upper,
        xtol=FUGACITY_XTOL, rtol=FUGACITY_RTOL, maxiter=500,
        full_output=True, disp=False,
    )
    if not info.converged:
        raise FugacityConvergenceError(
            f"fugacity 근 탐색 실패: t={t}, 반복={info.iterations}, flag={info.flag}"
        )
    return float(root)


def thermal_wavelength(n, t, paper_constants=True):
    """
    열적 파장 λ = (ζ(3/2)/n)^{1/3} · t^{-1/2} [cm]

    Examples:
        >>> round(thermal_wavelength(1e14, 1.0) * 1e5, 3)
        2.967
    """
    if not (n > 0) or not (t > 0):
        raise ThermoDomainError(f"n, t는 양수여야 합니다: n={n}, t={t}")
    return (zeta_three_halves(paper_constants) / n) ** (1.0 / 3.0) * t ** -0.5


def ground_state_density(n, t):
    """응축 밀도 n₀ = n·(1 - t^{3/2}) (t < 1), 그 외 0"""
    if not (n > 0) or not (t > 0):
        raise ThermoDomainError(f"n, t는 양수여야 합니다: n={n}, t={t}")
    if t >= 1.0:
        return 0.0
    return n * (1.0 - t ** 1.5)


def condensate_fraction(t):
    """응축 비율 n₀/n"""
    if not (t > 0):
        raise ThermoDomainError(f"t는 양수여야 합니다: {t}")
    return max(0.0, 1.0 - t ** 1.5) if t < 1.0 else 0.0


def build_thermo_state(spec):
    """
    GasSpec → ThermoState

    Args:
        spec (GasSpec): 기체 입력

    Returns:
        ThermoState: z, λ, n₀, N₀, κ
    """
    z = solve_fugacity(spec.t, spec.N_total, spec.paper_constants)
    lam = thermal_wavelength(spec.n, spec.t, spec.paper_constants)
    n0 = ground_state_density(spec.n, spec.t)
    N0 = spec.N_total * (1.0 - spec.t ** 1.5) if spec.t < 1.0 else 0.0
    kappa = 2.0 * math.sqrt(4.0 * math.pi * (1.0 - z)) / lam
    return ThermoState(t=spec.t, z=z, lam=lam, n0=n0, N0=N0, kappa=kappa)


def chemical_potential(thermo):
    """
    βμ = ln z

    임계온도 아래에서는 -ln(1 + 1/N₀) 보정값을 정밀하게 계산한다.
    """
    if thermo.N0 > 0:
        return -math.log1p(1.0 / thermo.N0)
    return math.log(thermo.z)


if __name__ == '__main__':
    print("=== bose_thermo 테스트 ===")
    for t in (0.5, 0.999, 1.001, 1.5, 2.0):
        state = build_thermo_state(GasSpec(n=1e14, N_total=1e6, t=t))
        print(f"  t={t:<6} z={state.z:.12f}  λ={state.lam:.4e} cm  "
              f"κλ={state.kappa * state.lam:.4e}  n₀={state.n0:.4e}")
    print(f"  g₃/₂(0.5) = {polylog_three_halves(0.5):.15f}")
    print(f"  g₃/₂(1)   = {polylog_three_halves(1.0):.15f}")
    print("=== 테스트 완료 ===")

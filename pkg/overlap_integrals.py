#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
overlap_integrals.py
구형 영역 이중 적분 ∫_A∫_B ρ₁(r - r′)² 계산 모듈

- i1_aa_above: 임계온도 위 on-site 적분 (Yukawa²)
- i1_prime: 응축 교차항 I′ = 2∫∫Yukawa
- i1_aa: 임계온도 아래 on-site 적분 n₀²Ω² + I₁ᴬᴬ(T>T_C) + n₀·I′
- i1_ab: 두 영역 사이 교차 적분
- mc_oracle / mc_oracle_terms: 몬테카를로 검증 오라클

폐형식 괄호 [...]는 κR이 작을 때 상쇄가 심하므로 κR < SERIES_THRESHOLD 에서는
테일러 급수로 계산한다.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import mpmath
import numpy as np

import correlation


INFINITE = math.inf

SERIES_THRESHOLD = 0.5
SERIES_TERMS = 30

MC_CHUNK = 2 ** 16
MC_MIN_SAMPLES = 10_000

# L_AB = INFINITE 교차 적분용 원거리 대체 거리 (max(λ, R)의 배수)
FAR_FIELD_FACTOR = 1e6


class RegionGeometryError(ValueError):
    """영역 기하 조건 위반 (R ≤ 0, L_AB ≤ 2R)"""


@dataclass(frozen=True)
class RegionSpec:
    """
    탐침 영역 (반지름 R인 두 구, 중심 거리 L_AB)

    Attributes:
        R: 반지름 [cm]
        L_AB: 영역 간 거리 [cm] 또는 INFINITE
    """
    R: float
    L_AB: float = INFINITE

    def __post_init__(self):
        if not (self.R > 0):
            raise RegionGeometryError(f"R은 양수여야 합니다: {self.R}")
        if math.isnan(self.L_AB) or (math.isfinite(self.L_AB) and self.L_AB <= 2.0 * self.R):
            raise RegionGeometryError(
                f"유한 L_AB는 2R보다 커야 합니다: L_AB={self.L_AB}, 2R={2.0 * self.R}"
            )

    @property
    def Omega(self):
        return 4.0 * math.pi / 3.0 * self.R ** 3

    @property
    def infinite(self):
        return math.isinf(self.L_AB)


@dataclass(frozen=True)
class IntegralSet:
    """on-site / 교차 적분 값과 계산 방법 ('closed-form' | 'monte-carlo')"""
    i_aa: float
    i_ab: float
    method_tag: str = 'closed-form'


def _series_coefficients():
    """
    괄호를 선두 차수로 나눈 급수의 계수 (x = κR)

    - aa: h(x)/x⁴ = Σ_{k≥4} (-1)^k (k-1) 2^k x^{k-4}/k!
    - prime: f(x)/x⁵ = Σ_{k≥5} (-1)^{k+1} (k-1)(k-4) x^{k-5}/k!
    """
    aa = [(-1) ** k * (k - 1) * 2.0 ** k / math.factorial(k) for k in range(4, 4 + SERIES_TERMS)]
    prime = [(-1) ** (k + 1) * (k - 1) * (k - 4) / math.factorial(k) for k in range(5, 5 + SERIES_TERMS)]
    # np.polyval은 최고차 계수부터
    return np.array(aa[::-1]), np.array(prime[::-1])


_AA_POLY, _PRIME_POLY = _series_coefficients()


def _aa_bracket_direct(x, dps=None):
    if dps is None:
        return 1.0 - 2.0 * x ** 2 + 8.0 / 3.0 * x ** 3 - (1.0 + 2.0 * x) * math.exp(-2.0 * x)
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        value = 1 - 2 * xm ** 2 + mpmath.mpf(8) / 3 * xm ** 3 - (1 + 2 * xm) * mpmath.exp(-2 * xm)
        return float(value)


def _prime_bracket_direct(x, dps=None):
    if dps is None:
        return 4.0 - x ** 2 + x ** 3 / 3.0 - (4.0 + 4.0 * x + x ** 2) * math.exp(-x)
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        value = 4 - xm ** 2 + xm ** 3 / 3 - (4 + 4 * xm + xm ** 2) * mpmath.exp(-xm)
        return float(value)


def aa_bracket(x, method='auto', dps=None):
    """
    on-site 괄호 h(x) = 1 - 2x² + (8/3)x³ - (1+2x)e^{-2x}

    Args:
        x: κR (≥ 0)
        method: 'auto' | 'series' | 'direct'
        dps: direct 계산 시 mpmath 자릿수 (None이면 double)
    """
    if method == 'series' or (method == 'auto' and x < SERIES_THRESHOLD):
        return x ** 4 * float(np.polyval(_AA_POLY, x))
    return _aa_bracket_direct(x, dps)


def prime_bracket(x, method='auto', dps=None):
    """교차항 괄호 f(x) = 4 - x² + x³/3 - (4+4x+x²)e^{-x}"""
    if method == 'series' or (method == 'auto' and x < SERIES_THRESHOLD):
        return x ** 5 * float(np.polyval(_PRIME_POLY, x))
    return _prime_bracket_direct(x, dps)


def i1_aa_above(thermo, region):
    """
    임계온도 위 on-site 적분

    I₁ᴬᴬ = (2π²z²/κ⁴λ⁴)·[1 - 2κ²R² + (8/3)κ³R³ - (1+2κR)e^{-2κR}]

    κR → 0 극한은 4π²z²R⁴/λ⁴.

    Args:
        thermo (ThermoState): 열역학 상태
        region (RegionSpec): 영역

    Returns:
        float: ∫_A∫_A (Yukawa)² (무차원)
    """
    z, lam, kappa, R = thermo.z, thermo.lam, thermo.kappa, region.R
    x = kappa * R
    if x < SERIES_THRESHOLD:
        return 2.0 * math.pi ** 2 * z * z * R ** 4 / lam ** 4 * float(np.polyval(_AA_POLY, x))
    return 2.0 * math.pi ** 2 * z * z / (kappa ** 4 * lam ** 4) * _aa_bracket_direct(x)


def i1_prime(thermo, region):
    """
    응축 교차항 I′ = (128π²z/κ⁵λ²)·[4 - κ²R² + (1/3)κ³R³ - (4+4κR+κ²R²)e^{-κR}]

    κR → 0 극한은 64π²zR⁵/(15λ²).

    Returns:
        float: 2∫_A∫_A Yukawa [cm³]
    """
    z, lam, kappa, R = thermo.z, thermo.lam, thermo.kappa, region.R
    x = kappa * R
    if x < SERIES_THRESHOLD:
        return 128.0 * math.pi ** 2 * z * R ** 5 / lam ** 2 * float(np.polyval(_PRIME_POLY, x))
    return 128.0 * math.pi ** 2 * z / (kappa ** 5 * lam ** 2) * _prime_bracket_direct(x)


def closed_form_terms(thermo, region):
    """
    on-site 적분의 항별 폐형식

    Returns:
        dict: {'yukawa_sq', 'condensate_cross', 'condensate_sq', 'total'}
    """
    n0, omega = thermo.n0, region.Omega
    terms = {
        'yukawa_sq': i1_aa_above(thermo, region),
        'condensate_cross': n0 * i1_prime(thermo, region) if n0 > 0 else 0.0,
        'condensate_sq': (n0 * omega) ** 2,
    }
    terms['total'] = terms['yukawa_sq'] + terms['condensate_cross'] + terms['condensate_sq']
    return terms


def i1_aa(thermo, region):
    """
    on-site 적분 I₁ᴬᴬ = n₀²Ω² + I₁ᴬᴬ(T>T_C) + n₀·I′

    t ≥ 1에서는 n₀ = 0이므로 i1_aa_above와 정확히 같다.
    """
    if thermo.n0 <= 0:
        return i1_aa_above(thermo, region)
    return closed_form_terms(thermo, region)['total']


def i1_ab(thermo, region):
    """
    교차 적분 I₁ᴬᴮ

    - L_AB = INFINITE: 임계온도 위 0, 아래 n₀²Ω²
    - 유한 L_AB: 거리를 상수로 두는 근사 Ω²·ρ₁(L_AB)²
    """
    if region.L_AB <= 2.0 * region.R:
        raise RegionGeometryError(f"L_AB({region.L_AB})는 2R보다 커야 합니다.")
    omega = region.Omega
    if region.infinite:
        return (thermo.n0 * omega) ** 2
    rho = correlation.yukawa_rho1(thermo, region.L_AB) + thermo.n0
    return (omega * rho) ** 2


def compute_integrals(thermo, region):
    """폐형식 IntegralSet"""
    return IntegralSet(i_aa=i1_aa(thermo, region), i_ab=i1_ab(thermo, region))


def sample_uniform_ball(rng, R, size):
    """
    반지름 R 구 내부 균일 샘플

    반지름은 세제곱근 역변환, 방향은 정규화한 가우시안 3성분.

    Returns:
        ndarray: (size, 3)
    """
    radius = R * np.cbrt(rng.random(size))
    direction = rng.standard_normal((size, 3))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    return direction * radius[:, None]


def _draw_separations(rng, region, target, far_field, size):
    """
    (거리, 가중치, 스케일) 샘플

    기여 = weight·(scale·ρ₁(sep))²

    - on-site: r ~ U(A), |s| ~ U(0, 2R], 방향 균일 → weight = Ω·8πR·1(r+s ∈ A), scale = |s|
    - cross: r ~ U(A), r′ ~ U(B) → weight = Ω², scale = 1
    """
    R, omega = region.R, region.Omega
    r = sample_uniform_ball(rng, R, size)
    if target == 'on-site':
        length = 2.0 * R * (1.0 - rng.random(size))
        direction = rng.standard_normal((size, 3))
        direction /= np.linalg.norm(direction, axis=1)[:, None]
        inside = np.linalg.norm(r + direction * length[:, None], axis=1) <= R
        weight = omega * 8.0 * math.pi * R * inside
        return length, weight, length
    if target == 'cross':
        offset = far_field if region.infinite else region.L_AB
        rp = sample_uniform_ball(rng, R, size)
        rp[:, 0] += offset
        sep = np.linalg.norm(rp - r, axis=1)
        return sep, np.full(size, omega * omega), np.ones(size)
    raise ValueError(f"알 수 없는 target: {target} ('on-site' | 'cross')")


def _chunk_terms(kernel, region, target, far_field, rho1, seed_seq, size):
    """
    한 청크의 항별 (count, mean, M2)

    rho1이 주어지면 'total'만, 아니면 Yukawa²/교차/응축² 분해까지 계산한다.
    """
    rng = np.random.Generator(np.random.Philox(seed_seq))
    sep, weight, scale = _draw_separations(rng, region, target, far_field, size)

    if rho1 is not None:
        values = {'total': weight * (scale * np.asarray(rho1(sep), dtype=float)) ** 2}
    else:
        thermo = kernel.thermo
        # scale·Yukawa: on-site에서는 |s|가 1/|s|를 상쇄
        decay = thermo.z / thermo.lam ** 2 * np.exp(-0.5 * thermo.kappa * sep)
        yuk = decay * (scale / sep)
        cond = thermo.n0 * scale
        values = {
            'yukawa_sq': weight * yuk * yuk,
            'condensate_cross': weight * 2.0 * yuk * cond,
            'condensate_sq': weight * cond * cond,
        }
        values['total'] = values['yukawa_sq'] + values['condensate_cross'] + values['condensate_sq']

    return {
        key: (size, float(np.mean(v)), float(np.sum((v - np.mean(v)) ** 2)))
        for key, v in values.items()
    }


def _merge(a, b):
    """스트리밍 평균/분산 병합 (Chan 등)"""
    n_a, mean_a, m2_a = a
    n_b, mean_b, m2_b = b
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * n_b / n
    m2 = m2_a + m2_b + delta * delta * n_a * n_b / n
    return n, mean, m2


def _run_chunks(kernel, region, target, samples, seed, workers, rho1):
    if samples < MC_MIN_SAMPLES:
        raise ValueError(f"samples는 {MC_MIN_SAMPLES} 이상이어야 합니다: {samples}")
    if target not in ('on-site', 'cross'):
        raise ValueError(f"알 수 없는 target: {target} ('on-site' | 'cross')")

    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    n_chunks = math.ceil(samples / MC_CHUNK)
    sizes = [MC_CHUNK] * (n_chunks - 1) + [samples - MC_CHUNK * (n_chunks - 1)]
    children = root.spawn(n_chunks)
    far_field = FAR_FIELD_FACTOR * max(kernel.thermo.lam, region.R)

    def work(i):
        return _chunk_terms(kernel, region, target, far_field, rho1, children[i], sizes[i])

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(work, range(n_chunks)))
    else:
        chunks = [work(i) for i in range(n_chunks)]

    # 청크 순서대로 병합 → 작업자 수와 무관하게 동일한 결과
    merged = chunks[0]
    for chunk in chunks[1:]:
        merged = {key: _merge(merged[key], chunk[key]) for key in merged}

    result = {}
    for key, (n, mean, m2) in merged.items():
        variance = m2 / (n - 1) if n > 1 else 0.0
        result[key] = (mean, math.sqrt(max(variance, 0.0) / n))
    return result


def mc_oracle(kernel, region, target, samples, seed, workers=1, rho1=None):
    """
    몬테카를로 이중 적분 오라클

    on-site는 분리 벡터 s를 1/s² 밀도로 뽑아 ρ₁²의 1/s² 특이점을 가중치로 흡수한다.
    cross는 두 구에서 독립 균일 샘플. INFINITE 거리는 FAR_FIELD_FACTOR·max(λ, R)로 대체한다.

    Args:
        kernel (CorrelationKernel): 상관 파라미터
        region (RegionSpec): 영역
        target: 'on-site' | 'cross'
        samples: 샘플 수 (≥ 1e4)
        seed: 정수 또는 numpy SeedSequence
        workers: 스레드 수 (결과는 작업자 수와 무관)
        rho1: ρ₁ 대체 함수 (거리 배열 → 값 배열), None이면 연속 폐형식

    Returns:
        tuple: (estimate, standard_error)
    """
    result = _run_chunks(kernel, region, target, samples, seed, workers, rho1)
    return result['total']


def mc_oracle_terms(kernel, region, target, samples, seed, workers=1):
    """
    항별 몬테카를로 분해 (같은 난수로 Yukawa², 2n₀·Yukawa, n₀², 합계를 동시에 추정)

    Returns:
        dict: {'yukawa_sq', 'condensate_cross', 'condensate_sq', 'total'} → (estimate, stderr)
    """
    return _run_chunks(kernel, region, target, samples, seed, workers, None)


def agrees_within(closed, estimate, stderr, sigmas=3.0, rel_floor=1e-9):
    """|closed - estimate| ≤ sigmas·stderr (+ 부동소수점 바닥값)"""
    return abs(closed - estimate) <= sigmas * stderr + rel_floor * max(abs(closed), abs(estimate))


if __name__ == '__main__':
    import bose_thermo

    print("=== overlap_integrals 테스트 ===")
    region = RegionSpec(R=1e-4)
    for t in (0.6, 0.8, 1.3):
        spec = bose_thermo.GasSpec(n=1e14, N_total=1e6, t=t)
        state = bose_thermo.build_thermo_state(spec)
        kernel = correlation.CorrelationKernel(state, spec.n)
        closed = i1_aa(state, region)
        estimate, stderr = mc_oracle(kernel, region, 'on-site', 200_000, seed=7)
        print(f"  t={t}  κR={state.kappa * region.R:.3e}  폐형식={closed:.6e}  "
              f"MC={estimate:.6e} ± {stderr:.1e}")
    print("=== 테스트 완료 ===")

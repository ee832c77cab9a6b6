#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
sweep_calculator.py
(t, n) 격자 스윕 계산 모듈

격자점마다 열역학 상태 → 적분 → 모멘트 → 탐침 상태 → 얽힘을 계산하여 ResultRecord로 반환.
격자점은 서로 독립이며, 난수는 (seed, 격자점 인덱스)에서만 유도하므로
작업자 수와 스케줄에 상관없이 결과가 같다.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass

import numpy as np

import bose_thermo
import correlation
import overlap_integrals
import probe_state


# CSV 헤더 (ResultRecord 필드 순서, lambda_ → lambda)
RESULT_COLUMNS = (
    't', 'n', 'z', 'lambda', 'kappa', 'n0',
    'i_aa', 'i_ab', 'qa', 'qa2', 'qaqb',
    'negativity', 'interaction_probability', 'weighted_entanglement',
    'e_false_baseline', 'epsilon',
    'oracle_i_aa', 'oracle_i_aa_stderr', 'oracle_i_ab', 'oracle_i_ab_stderr',
    'warnings',
)

PLATEAU_T_RANGE = (1.1, 2.0)


@dataclass(frozen=True)
class ResultRecord:
    """스윕 한 점의 결과 (oracle_* 는 검증을 끄면 None)"""
    t: float
    n: float
    z: float
    lambda_: float
    kappa: float
    n0: float
    i_aa: float
    i_ab: float
    qa: float
    qa2: float
    qaqb: float
    negativity: float
    interaction_probability: float
    weighted_entanglement: float
    e_false_baseline: float | None
    epsilon: float
    oracle_i_aa: float | None = None
    oracle_i_aa_stderr: float | None = None
    oracle_i_ab: float | None = None
    oracle_i_ab_stderr: float | None = None
    warnings: str = ''

    def as_row(self):
        """CSV 열 이름 → 값"""
        return dict(zip(RESULT_COLUMNS, astuple(self)))

    @classmethod
    def from_row(cls, row):
        values = [row[column] for column in RESULT_COLUMNS]
        return cls(*values)


def _oracle_integrals(kernel, region, samples, seed, index):
    """
    격자점별 몬테카를로 검증 (SeedSequence([seed, index])에서 두 하위 스트림)

    Returns:
        tuple: (IntegralSet(method_tag='monte-carlo'), 표준오차 IntegralSet)
    """
    aa_seed, ab_seed = np.random.SeedSequence([seed, index]).spawn(2)
    i_aa, i_aa_se = overlap_integrals.mc_oracle(kernel, region, 'on-site', samples, aa_seed)
    i_ab, i_ab_se = overlap_integrals.mc_oracle(kernel, region, 'cross', samples, ab_seed)
    estimate = overlap_integrals.IntegralSet(i_aa=i_aa, i_ab=i_ab, method_tag='monte-carlo')
    stderr = overlap_integrals.IntegralSet(i_aa=i_aa_se, i_ab=i_ab_se, method_tag='monte-carlo')
    return estimate, stderr


def evaluate_point(config, t, n, index=0):
    """
    단일 (t, n) 격자점 계산

    Γ·n·Ω ≥ 1인 점은 중단하지 않고 해석식 값으로 채운 뒤 warnings에 'smallness-rejected'를 남긴다.

    Args:
        config (SweepConfig): 스윕 설정
        t: 환산 온도
        n: 밀도 [cm⁻³]
        index: 격자점 인덱스 (난수 유도용)

    Returns:
        ResultRecord
    """
    spec = bose_thermo.GasSpec(n=n, N_total=config.N_total, t=t, paper_constants=config.paper_constants)
    thermo = bose_thermo.build_thermo_state(spec)
    kernel = correlation.CorrelationKernel(thermo, n)
    probe = config.probe()
    region = probe.region

    integrals = overlap_integrals.compute_integrals(thermo, region)
    m = probe_state.compute_moments(kernel, region, integrals)
    epsilon = probe.epsilon(n)

    notes = []
    try:
        notes.extend(probe.check_smallness(n))
        rho = probe_state.build_probe_state(m, probe.gamma)
        rho_prime, probability = probe_state.project_out_vacuum(rho)
        neg = probe_state.negativity(rho_prime)
    except probe_state.SmallnessError:
        notes.append('smallness-rejected')
        neg = probe_state.analytic_negativity(m)
        probability = probe_state.interaction_probability(m, probe.gamma)

    e_false = probe_state.false_entanglement(epsilon) if epsilon < 1.0 else None

    oracle_fields = {}
    if config.oracle_samples:
        oracle, stderr = _oracle_integrals(kernel, region, config.oracle_samples, config.seed, index)
        for name in ('i_aa', 'i_ab'):
            if not overlap_integrals.agrees_within(getattr(integrals, name), getattr(oracle, name),
                                                   getattr(stderr, name)):
                notes.append(f"oracle-mismatch:{name}")
        oracle_fields = {
            'oracle_i_aa': oracle.i_aa, 'oracle_i_aa_stderr': stderr.i_aa,
            'oracle_i_ab': oracle.i_ab, 'oracle_i_ab_stderr': stderr.i_ab,
        }

    return ResultRecord(
        t=t, n=n, z=thermo.z, lambda_=thermo.lam, kappa=thermo.kappa, n0=thermo.n0,
        i_aa=integrals.i_aa, i_ab=integrals.i_ab,
        qa=m.qa, qa2=m.qa2, qaqb=m.qaqb,
        negativity=neg,
        interaction_probability=probability,
        weighted_entanglement=probe_state.weighted_entanglement(m, probe.gamma),
        e_false_baseline=e_false,
        epsilon=epsilon,
        **oracle_fields,
        warnings=';'.join(notes),
    )


def _evaluate_task(task):
    config, t, n, index = task
    return evaluate_point(config, t, n, index)


def run_sweep(config, show_progress=True, on_progress=None):
    """
    전체 격자 스윕

    Args:
        config (SweepConfig): 검증된 설정
        show_progress: 진행 상황 출력 여부
        on_progress: 진행 상황 콜백 함수 (message: str) -> None

    Returns:
        list[ResultRecord]: t 우선, 그다음 밀도 순서
    """
    def log(message):
        """진행 상황 로깅"""
        if on_progress:
            on_progress(message)
        if show_progress:
            print(message)

    grid = config.grid()
    total = len(grid)
    tasks = [(config, t, n, index) for index, (t, n) in enumerate(grid)]
    log(f"🔄 {total}개 격자점 계산 중... (t {config.t_steps}개 × n {len(config.densities)}개)")
    if config.oracle_samples:
        log(f"   몬테카를로 검증: 격자점당 {config.oracle_samples:,}샘플 × 2")

    if config.workers > 1:
        chunksize = max(1, total // (config.workers * 4))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_evaluate_task, tasks, chunksize=chunksize))
    else:
        records = []
        for i, task in enumerate(tasks):
            records.append(_evaluate_task(task))
            if (i + 1) % 500 == 0:
                log(f"   {i + 1}/{total} 완료...")

    flagged = sum(1 for record in records if record.warnings)
    log(f"✅ 계산 완료: {total}개 격자점, 경고 {flagged}개")
    return records


def plateau_by_density(records, t_range=PLATEAU_T_RANGE):
    """
    밀도별 임계온도 위 평탄 구간 통계

    Returns:
        dict: {n: {'mean': float, 'min': float, 'max': float, 'variation': float}}
    """
    groups = {}
    for record in records:
        if t_range[0] <= record.t <= t_range[1]:
            groups.setdefault(record.n, []).append(record.weighted_entanglement)

    result = {}
    for n, values in groups.items():
        low, high = min(values), max(values)
        mean = math.fsum(values) / len(values)
        result[n] = {
            'mean': mean,
            'min': low,
            'max': high,
            'variation': (high - low) / mean if mean > 0 else 0.0,
        }
    return result


def condensation_signal_grid(records, t_range=PLATEAU_T_RANGE):
    """격자점별 E - (같은 밀도의 평탄 구간 평균)"""
    plateau = plateau_by_density(records, t_range)
    return [
        probe_state.condensation_signal(r.weighted_entanglement, plateau[r.n]['mean'])
        if r.n in plateau else None
        for r in records
    ]


if __name__ == '__main__':
    import sweep_config

    print("=== sweep_calculator 테스트 ===")
    config = sweep_config.load_config()
    record = evaluate_point(config, 1.5, 1e14)
    for column, value in record.as_row().items():
        print(f"  {column:<24} {value}")
    print("=== 테스트 완료 ===")

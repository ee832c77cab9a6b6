#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
sweep_config.py
스윕 설정 파일 파싱/검증 모듈

설정 파일 문법 (docs/CONFIG_FORMAT.md):
    # 주석
    key = value

- 알 수 없는 키, 중복 키는 오류 (strict)
- 범위 오류는 첫 번째만이 아니라 전부 모아서 ConfigError로 보고
- CLI 플래그 값이 파일 값보다 우선
"""

import math
import re
from dataclasses import dataclass

import numpy as np

import paths
from overlap_integrals import INFINITE, MC_MIN_SAMPLES, RegionSpec
from probe_state import ProbeConfig


# 기본값 정의 (가중 얽힘 표면 격자)
DEFAULT_SETTINGS = {
    't_min': 0.2,                                   # 환산 온도 하한
    't_max': 2.0,                                   # 환산 온도 상한
    't_steps': 61,                                  # 온도 격자 점 수 (≥ 2)
    'densities': 'linspace(1e13, 2e14, 41)',        # 밀도 목록 [cm⁻³]
    'L_AB': 'inf',                                  # 영역 간 거리 [cm] 또는 inf
    'oracle_samples': 0,                            # 0이면 몬테카를로 검증 생략
    'seed': 0,
    'paper_constants': True,                        # ζ(3/2) = 2.612
    'workers': 1,
    'csv': 'results/sweep.csv',
    'svg': '',
    'html': '',
    'xlsx': '',
}

# 기본값 없는 필수 키
REQUIRED_SETTINGS = ('gamma', 'R', 'N_total')

SETTING_KINDS = {
    'gamma': 'float',
    'R': 'float',
    'N_total': 'count',
    't_min': 'float',
    't_max': 'float',
    't_steps': 'count',
    'densities': 'densities',
    'L_AB': 'length',
    'oracle_samples': 'count',
    'seed': 'count',
    'paper_constants': 'bool',
    'workers': 'count',
    'csv': 'path',
    'svg': 'path',
    'html': 'path',
    'xlsx': 'path',
}

_TRUE = ('true', 'yes', 'on', '1')
_FALSE = ('false', 'no', 'off', '0')
_LINSPACE = re.compile(r'^linspace\(\s*([^,]+?)\s*,\s*([^,]+?)\s*,\s*([^)]+?)\s*\)$')
_KEY = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


class ConfigError(ValueError):
    """설정 오류 (모든 문제를 errors 리스트로 보관)"""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = '\n'.join(f"  - {e}" for e in self.errors)
        super().__init__(f"설정 오류 {len(self.errors)}건:\n{lines}")


@dataclass(frozen=True)
class SweepConfig:
    """검증된 스윕 설정"""
    gamma: float
    R: float
    N_total: int
    t_min: float = 0.2
    t_max: float = 2.0
    t_steps: int = 61
    densities: tuple = tuple(np.linspace(1e13, 2e14, 41).tolist())
    L_AB: float = INFINITE
    oracle_samples: int = 0
    seed: int = 0
    paper_constants: bool = True
    workers: int = 1
    csv: str = 'results/sweep.csv'
    svg: str | None = None
    html: str | None = None
    xlsx: str | None = None

    def temperatures(self):
        """온도 격자 (linspace, 양 끝 포함)"""
        return np.linspace(self.t_min, self.t_max, self.t_steps).tolist()

    def grid(self):
        """(t, n) 격자점 목록 (t 우선 순서)"""
        return [(t, n) for t in self.temperatures() for n in self.densities]

    def region(self):
        return RegionSpec(R=self.R, L_AB=self.L_AB)

    def probe(self):
        """영역과 Γ를 묶은 ProbeConfig"""
        return ProbeConfig(region=self.region(), gamma=self.gamma)


def _parse_float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"유한한 숫자가 아닙니다: {text!r}")
    return value


def _parse_count(text):
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not math.isfinite(value) or not value.is_integer():
            raise ValueError(f"정수가 아닙니다: {text!r}")
        return int(value)


def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"불리언이 아닙니다: {text!r} (true/false)")


def _parse_length(text):
    if text.strip().lower() in ('inf', 'infinite', 'infinity'):
        return INFINITE
    return _parse_float(text)


def _parse_densities(text):
    match = _LINSPACE.match(text.strip())
    if match:
        start, stop = _parse_float(match.group(1)), _parse_float(match.group(2))
        count = _parse_count(match.group(3))
        if count < 1:
            raise ValueError(f"linspace 점 수는 1 이상이어야 합니다: {count}")
        return tuple(np.linspace(start, stop, count).tolist())
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise ValueError("밀도 목록이 비어 있습니다.")
    return tuple(_parse_float(item) for item in items)


_PARSERS = {
    'float': _parse_float,
    'count': _parse_count,
    'bool': _parse_bool,
    'length': _parse_length,
    'densities': _parse_densities,
    'path': lambda text: text.strip() or None,
}


def parse_config_text(raw_text):
    """
    key = value 줄 파싱

    Returns:
        tuple: ({key: (value_text, 위치 설명)}, [오류 메시지])
    """
    entries = {}
    errors = []
    for line_no, line in enumerate(raw_text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        if '=' not in content:
            errors.append(f"line {line_no}: 'key = value' 형식이 아닙니다: {content!r}")
            continue
        key, value = (part.strip() for part in content.split('=', 1))
        if not _KEY.match(key):
            errors.append(f"line {line_no}: 잘못된 키 이름: {key!r}")
        elif key not in SETTING_KINDS:
            errors.append(f"line {line_no}: 알 수 없는 키 '{key}'")
        elif key in entries:
            errors.append(f"line {line_no}: 중복 키 '{key}' ({entries[key][1]}에서 이미 지정)")
        elif not value:
            errors.append(f"line {line_no}: '{key}' 값이 비어 있습니다.")
        else:
            entries[key] = (value, f"line {line_no}")
    return entries, errors


def _range_errors(s):
    """범위 검사 (모든 위반을 반환)"""
    errors = []
    if 'gamma' in s and not s['gamma'] > 0:
        errors.append(f"gamma: 양수여야 합니다 (현재 {s['gamma']})")
    if 'R' in s and not s['R'] > 0:
        errors.append(f"R: 양수여야 합니다 (현재 {s['R']})")
    if 'N_total' in s and not s['N_total'] >= 1:
        errors.append(f"N_total: 1 이상이어야 합니다 (현재 {s['N_total']})")
    if 't_min' in s and not s['t_min'] > 0:
        errors.append(f"t_min: 양수여야 합니다 (현재 {s['t_min']})")
    if 't_min' in s and 't_max' in s and not s['t_min'] < s['t_max']:
        errors.append(f"t_min < t_max 이어야 합니다 (현재 {s['t_min']} ≥ {s['t_max']})")
    if 't_steps' in s and not s['t_steps'] >= 2:
        errors.append(f"t_steps: 2 이상이어야 합니다 (현재 {s['t_steps']})")
    if 'densities' in s:
        bad = [n for n in s['densities'] if not n > 0]
        if bad:
            errors.append(f"densities: 모든 밀도는 양수여야 합니다 (위반 {bad})")
    if 'L_AB' in s and 'R' in s and math.isfinite(s['L_AB']) and not s['L_AB'] > 2.0 * s['R']:
        errors.append(f"L_AB: 유한 거리는 2R({2.0 * s['R']})보다 커야 합니다 (현재 {s['L_AB']})")
    if 'oracle_samples' in s and s['oracle_samples'] != 0 and not s['oracle_samples'] >= MC_MIN_SAMPLES:
        errors.append(
            f"oracle_samples: 0(비활성) 또는 {MC_MIN_SAMPLES} 이상이어야 합니다 (현재 {s['oracle_samples']})"
        )
    if 'seed' in s and not s['seed'] >= 0:
        errors.append(f"seed: 0 이상이어야 합니다 (현재 {s['seed']})")
    if 'workers' in s and not s['workers'] >= 1:
        errors.append(f"workers: 1 이상이어야 합니다 (현재 {s['workers']})")
    return errors


def validate_config(raw_text, overrides=None):
    """
    설정 텍스트 → SweepConfig

    Args:
        raw_text (str): 설정 파일 내용
        overrides (dict): CLI 플래그 값 {key: value} (None 값은 무시)

    Returns:
        SweepConfig

    Raises:
        ConfigError: 파싱/필수 키/범위 오류 전체 목록
    """
    entries, errors = parse_config_text(raw_text)

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in SETTING_KINDS:
            errors.append(f"--{key}: 알 수 없는 설정")
            continue
        entries[key] = (str(value), f"--{key.replace('_', '-')}")

    settings = {}
    for key in list(REQUIRED_SETTINGS) + list(DEFAULT_SETTINGS):
        if key in entries:
            text, where = entries[key]
        elif key in DEFAULT_SETTINGS:
            text, where = str(DEFAULT_SETTINGS[key]), '기본값'
        else:
            errors.append(f"{key}: 필수 키가 없습니다.")
            continue
        try:
            settings[key] = _PARSERS[SETTING_KINDS[key]](text)
        except ValueError as e:
            errors.append(f"{key} ({where}): {e}")

    errors.extend(_range_errors(settings))
    if errors:
        raise ConfigError(errors)

    return SweepConfig(**settings)


def load_config(path=None, overrides=None):
    """
    설정 파일 읽기 + 검증 (path가 None이면 configs/bec_surface.conf)

    Raises:
        OSError: 파일 읽기 실패
        ConfigError: 검증 실패
    """
    path = path or paths.DEFAULT_CONFIG_PATH
    with open(path, 'r', encoding='utf-8') as f:
        raw_text = f.read()
    return validate_config(raw_text, overrides)


def describe(config):
    """설정 요약 문자열 (CLI 출력용)"""
    densities = config.densities
    span = f"{densities[0]:.3g} … {densities[-1]:.3g} ({len(densities)}개)" if len(densities) > 1 else f"{densities[0]:.3g}"
    l_ab = 'INFINITE' if math.isinf(config.L_AB) else f"{config.L_AB:.4g} cm"
    return (
        f"Γ={config.gamma:g}, R={config.R:g} cm, N={config.N_total}, L_AB={l_ab}\n"
        f"t: {config.t_min:g} … {config.t_max:g} ({config.t_steps}개), n: {span}\n"
        f"ζ(3/2): {'2.612 (반올림)' if config.paper_constants else '전체 정밀도'}, "
        f"oracle_samples={config.oracle_samples}, seed={config.seed}, workers={config.workers}"
    )


if __name__ == '__main__':
    print("=== sweep_config 테스트 ===")
    config = load_config()
    print(describe(config))
    try:
        validate_config("t_min = 1.0\nt_max = 1.0\nbogus = 3\n")
    except ConfigError as e:
        print(e)
    print("=== 테스트 완료 ===")

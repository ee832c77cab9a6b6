#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
BEC 공간 얽힘 스윕 명령줄 도구

서브커맨드:
    sweep     (t, n) 격자 전체 계산 → CSV (+ SVG/HTML/XLSX)
    point     단일 (t, n) 격자점 계산 결과 출력
    validate  폐형식 ↔ 몬테카를로/모드 합 검증
    baseline  거짓 얽힘 기준선 E_F(ε) 표

사용법:
    python sweep_cli.py sweep --config configs/bec_surface.conf --svg results/bec_surface.svg
    python sweep_cli.py point --t 1.5 --n 1e14
    python sweep_cli.py validate --oracle-samples 1000000
    python sweep_cli.py baseline --eps 0.01 0.5

종료 코드: 0 성공, 1 설정 오류, 2 수치 오류 (검증 실패 포함), 3 입출력 오류
"""

import argparse
import math
import sys

import probe_state
import results_io
import sweep_calculator
import sweep_config
import validation_suite
from generate_heatmap_report import render_heatmap, render_heatmap_html
from overlap_integrals import RegionSpec


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

VALIDATION_DEFAULT_SAMPLES = 1_000_000
BASELINE_EPSILONS = (0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5)
REFERENCE_DENSITY = 1e14


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH', help='설정 파일 (기본: configs/bec_surface.conf)')
    common.add_argument('--seed', type=int, help='난수 시드')
    common.add_argument('--oracle-samples', type=int, help='몬테카를로 샘플 수 (0이면 생략)')
    common.add_argument('--workers', type=int, help='병렬 작업자 수')
    common.add_argument('--paper-constants', metavar='BOOL', help='ζ(3/2) = 2.612 사용 여부 (true/false)')
    common.add_argument('--quiet', action='store_true', help='진행 상황 출력 생략')
    return common


def build_parser():
    parser = argparse.ArgumentParser(
        prog='sweep_cli.py',
        description='이상 Bose 기체에서 두 탐침이 추출하는 공간 얽힘 계산',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    common = _common_options()

    sweep = subparsers.add_parser('sweep', parents=[common], help='(t, n) 격자 스윕')
    sweep.add_argument('--out', metavar='PATH', help='CSV 출력 경로')
    sweep.add_argument('--svg', metavar='PATH', help='SVG 히트맵 경로')
    sweep.add_argument('--html', metavar='PATH', help='plotly HTML 보고서 경로')
    sweep.add_argument('--xlsx', metavar='PATH', help='엑셀 출력 경로')

    point = subparsers.add_parser('point', parents=[common], help='단일 격자점 계산')
    point.add_argument('--t', type=float, required=True, help='환산 온도 T/T_C')
    point.add_argument('--n', type=float, required=True, help='밀도 [cm⁻³]')

    validate = subparsers.add_parser('validate', parents=[common], help='오라클 검증')
    validate.add_argument('--out', metavar='PATH', help='검증 보고서 CSV 경로')

    baseline = subparsers.add_parser('baseline', parents=[common], help='E_F(ε) 표 출력')
    baseline.add_argument('--eps', type=float, nargs='+', metavar='EPS', help='ε 값 목록 (0 ≤ ε < 1)')

    return parser


def _overrides(args):
    """CLI 플래그 → 설정 키 (None은 validate_config에서 무시)"""
    overrides = {
        'seed': args.seed,
        'oracle_samples': args.oracle_samples,
        'workers': args.workers,
        'paper_constants': args.paper_constants,
    }
    if args.command == 'sweep':
        overrides.update({'csv': args.out, 'svg': args.svg, 'html': args.html, 'xlsx': args.xlsx})
    return overrides


def cmd_sweep(args, config):
    records = sweep_calculator.run_sweep(config, show_progress=not args.quiet)

    results_io.write_csv(records, config.csv)
    print(f"✅ CSV 저장: {config.csv}")
    if config.svg:
        render_heatmap(records, config.svg)
        print(f"✅ SVG 저장: {config.svg}")
    if config.html:
        render_heatmap_html(records, config.html)
        print(f"✅ HTML 저장: {config.html}")
    if config.xlsx:
        results_io.write_xlsx(records, config.xlsx)
        print(f"✅ 엑셀 저장: {config.xlsx}")

    plateau = sweep_calculator.plateau_by_density(records)
    if plateau:
        n_ref = min(plateau, key=lambda n: abs(math.log(n / REFERENCE_DENSITY)))
        stats = plateau[n_ref]
        print(f"📊 평탄 구간 (n={n_ref:.3e}): E={stats['mean']:.4e}, 상대 변동 {stats['variation']:.1e}")
    return EXIT_OK


def cmd_point(args, config):
    record = sweep_calculator.evaluate_point(config, args.t, args.n)
    for column, value in record.as_row().items():
        print(f"{column:<24} {'' if value is None else value}")
    return EXIT_OK


def cmd_validate(args, config):
    samples = config.oracle_samples or VALIDATION_DEFAULT_SAMPLES
    result = validation_suite.run_validation_suite(
        config, samples=samples, seed=config.seed, workers=config.workers, show_progress=not args.quiet,
    )
    if args.out:
        validation_suite.write_validation_report(result, args.out)
        print(f"✅ 검증 보고서 저장: {args.out}")

    if args.quiet:
        for check in result['checks']:
            print(f"{'✅' if check['passed'] else '❌'} {check['name']}: {check['detail']}")
    return EXIT_OK if result['success'] else EXIT_NUMERICAL


def cmd_baseline(args, config):
    epsilons = args.eps or BASELINE_EPSILONS
    print(f"{'ε':>10}  {'E_F(ε)':>22}")
    for epsilon in epsilons:
        print(f"{epsilon:>10g}  {probe_state.false_entanglement(epsilon):>22.15e}")

    region = RegionSpec(R=config.R, L_AB=config.L_AB)
    for n in (config.densities[0], config.densities[-1]):
        epsilon = config.gamma * n * region.Omega
        print(f"📊 설정 기준 ε = Γ·n·Ω (n={n:.3e}): {epsilon:.6g}")
    return EXIT_OK


COMMANDS = {
    'sweep': cmd_sweep,
    'point': cmd_point,
    'validate': cmd_validate,
    'baseline': cmd_baseline,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = sweep_config.load_config(args.config, _overrides(args))
        if not args.quiet and args.command != 'baseline':
            print(sweep_config.describe(config))
        return COMMANDS[args.command](args, config)
    except sweep_config.ConfigError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"❌ 입출력 오류: {e}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, RuntimeError) as e:
        print(f"❌ 수치 오류: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        print("\n\n⚠️  사용자에 의해 프로그램이 중단되었습니다.")
        return EXIT_OK
    except Exception as e:
        print(f"\n❌ 오류가 발생했습니다: {e}")
        import traceback
        traceback.print_exc()
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

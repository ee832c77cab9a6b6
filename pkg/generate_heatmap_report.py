#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
generate_heatmap_report.py
가중 얽힘 표면 E(t, n) 히트맵 생성 모듈

- render_heatmap: 외부 리소스 없는 단독 SVG (같은 입력 → 같은 바이트)
- render_heatmap_html: plotly HTML 보고서 (E와 응축 신호 E - 배경값)

색상 척도: viridis 9개 기준색 사이 선형 보간. 값이 클수록 밝아지는 단조 척도이며
최솟값/최댓값은 격자 전체의 E 범위로 정한다.
"""

import math

import plotly.graph_objects as go
from plotly.subplots import make_subplots

import paths
import sweep_calculator


# viridis 기준색 (0 → 1)
VIRIDIS_ANCHORS = (
    (68, 1, 84),
    (71, 44, 123),
    (59, 82, 139),
    (44, 114, 142),
    (33, 145, 140),
    (40, 174, 128),
    (94, 201, 98),
    (173, 220, 48),
    (253, 231, 37),
)

WIDTH = 760
HEIGHT = 520
MARGIN_LEFT = 96
MARGIN_RIGHT = 150
MARGIN_TOP = 44
MARGIN_BOTTOM = 64
LEGEND_STEPS = 48
MAX_TICKS = 6


class HeatmapGridError(ValueError):
    """결과가 완전한 직사각형 (t, n) 격자가 아님"""


def color_for(fraction):
    """
    [0, 1] 값 → '#rrggbb'

    Examples:
        >>> color_for(0.0)
        '#440154'
        >>> color_for(1.0)
        '#fde725'
    """
    fraction = min(max(fraction, 0.0), 1.0)
    position = fraction * (len(VIRIDIS_ANCHORS) - 1)
    i = min(int(math.floor(position)), len(VIRIDIS_ANCHORS) - 2)
    w = position - i
    low, high = VIRIDIS_ANCHORS[i], VIRIDIS_ANCHORS[i + 1]
    rgb = [int(round(a + (b - a) * w)) for a, b in zip(low, high)]
    return '#{:02x}{:02x}{:02x}'.format(*rgb)


def grid_axes(records):
    """
    직사각형 격자 검사 후 축 값과 값 행렬 반환

    Returns:
        tuple: (t 목록, n 목록, values[n_index][t_index])

    Raises:
        HeatmapGridError: 비어 있거나, 중복되거나, 빠진 격자점이 있을 때
    """
    if not records:
        raise HeatmapGridError("결과가 비어 있습니다.")

    ts = sorted({record.t for record in records})
    ns = sorted({record.n for record in records})
    cells = {}
    for record in records:
        key = (record.t, record.n)
        if key in cells:
            raise HeatmapGridError(f"중복 격자점: t={record.t}, n={record.n}")
        cells[key] = record.weighted_entanglement

    if len(cells) != len(ts) * len(ns):
        raise HeatmapGridError(
            f"직사각형 격자가 아닙니다: {len(cells)}개 점, t {len(ts)}개 × n {len(ns)}개 필요"
        )
    values = [[cells[(t, n)] for t in ts] for n in ns]
    return ts, ns, values


def _tick_indices(count):
    if count <= MAX_TICKS:
        return list(range(count))
    step = (count - 1) / (MAX_TICKS - 1)
    return sorted({int(round(k * step)) for k in range(MAX_TICKS)})


def build_heatmap_svg(records, title='Weighted entanglement E(t, n)'):
    """
    SVG 문자열 생성 (좌표는 소수 둘째 자리 고정)

    x축: 환산 온도 t, y축: 밀도 n (아래 → 위 증가)
    """
    ts, ns, values = grid_axes(records)
    flat = [v for row in values for v in row]
    lo, hi = min(flat), max(flat)
    span = hi - lo

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    cell_w = plot_w / len(ts)
    cell_h = plot_h / len(ns)

    def fraction(value):
        return 0.5 if span == 0 else (value - lo) / span

    def x_of(i):
        return MARGIN_LEFT + i * cell_w

    def y_of(j):
        """밀도 인덱스 j의 셀 위쪽 y (위아래 반전)"""
        return MARGIN_TOP + plot_h - (j + 1) * cell_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-size="14">{title}</text>',
    ]

    # 셀 (가장자리 틈 방지를 위해 0.5px 겹침)
    for j, row in enumerate(values):
        for i, value in enumerate(row):
            parts.append(
                f'<rect x="{x_of(i):.2f}" y="{y_of(j):.2f}" width="{cell_w + 0.5:.2f}" '
                f'height="{cell_h + 0.5:.2f}" fill="{color_for(fraction(value))}"/>'
            )

    # 임계온도 표시
    if ts[0] < 1.0 < ts[-1]:
        k = next(i for i, t in enumerate(ts) if t > 1.0)
        w = (1.0 - ts[k - 1]) / (ts[k] - ts[k - 1])
        x_tc = x_of(k - 1 + w) + 0.5 * cell_w
        parts.append(
            f'<line x1="{x_tc:.2f}" y1="{MARGIN_TOP:.2f}" x2="{x_tc:.2f}" y2="{MARGIN_TOP + plot_h:.2f}" '
            f'stroke="#ffffff" stroke-width="1" stroke-dasharray="4,3"/>'
        )
        parts.append(f'<text x="{x_tc:.2f}" y="{MARGIN_TOP - 4:.2f}" text-anchor="middle">T_C</text>')

    # 축
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w:.2f}" height="{plot_h:.2f}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    for i in _tick_indices(len(ts)):
        x = x_of(i) + 0.5 * cell_w
        y = MARGIN_TOP + plot_h
        parts.append(f'<line x1="{x:.2f}" y1="{y:.2f}" x2="{x:.2f}" y2="{y + 4:.2f}" stroke="#333333"/>')
        parts.append(f'<text x="{x:.2f}" y="{y + 16:.2f}" text-anchor="middle">{ts[i]:.3g}</text>')
    for j in _tick_indices(len(ns)):
        y = y_of(j) + 0.5 * cell_h
        parts.append(
            f'<line x1="{MARGIN_LEFT - 4}" y1="{y:.2f}" x2="{MARGIN_LEFT}" y2="{y:.2f}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 6}" y="{y + 4:.2f}" text-anchor="end">{ns[j]:.3e}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{HEIGHT - 18}" text-anchor="middle">'
        f'reduced temperature T/T_C</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.2f})">density n [cm^-3]</text>'
    )

    # 범례 (아래 → 위: lo → hi)
    legend_x = WIDTH - MARGIN_RIGHT + 28
    step_h = plot_h / LEGEND_STEPS
    for s in range(LEGEND_STEPS):
        y = MARGIN_TOP + plot_h - (s + 1) * step_h
        parts.append(
            f'<rect x="{legend_x}" y="{y:.2f}" width="18" height="{step_h + 0.5:.2f}" '
            f'fill="{color_for((s + 0.5) / LEGEND_STEPS)}"/>'
        )
    parts.append(
        f'<rect x="{legend_x}" y="{MARGIN_TOP}" width="18" height="{plot_h:.2f}" '
        f'fill="none" stroke="#333333"/>'
    )
    if span == 0:
        labels = [(0.5, lo)]
    else:
        labels = [(0.0, lo), (0.5, lo + 0.5 * span), (1.0, hi)]
    for frac, value in labels:
        y = MARGIN_TOP + plot_h - frac * plot_h
        parts.append(f'<text x="{legend_x + 24}" y="{y + 4:.2f}">{value:.4e}</text>')
    parts.append(f'<text x="{legend_x}" y="{MARGIN_TOP - 8}">E</text>')

    parts.append('</svg>')
    return '\n'.join(parts) + '\n'


def render_heatmap(records, path):
    """
    SVG 히트맵 저장

    Args:
        records (list[ResultRecord]): 직사각형 격자 결과
        path (str): 저장 경로

    Raises:
        HeatmapGridError: 격자 오류
        OSError: 쓰기 실패
    """
    svg = build_heatmap_svg(records)
    paths.ensure_parent_dir(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(svg)
    return path


def render_heatmap_html(records, path):
    """
    plotly HTML 보고서 저장 (E 표면 + 응축 신호)

    plotly.js는 CDN에서 불러온다.
    """
    ts, ns, values = grid_axes(records)
    signal = dict(zip(
        ((r.t, r.n) for r in records),
        sweep_calculator.condensation_signal_grid(records),
    ))
    signal_values = [[signal[(t, n)] for t in ts] for n in ns]

    fig = make_subplots(
        rows=1, cols=2,
        subplot_titles=('가중 얽힘 E', '응축 신호 E - 배경값'),
        horizontal_spacing=0.12,
    )
    fig.add_trace(
        go.Heatmap(x=ts, y=ns, z=values, colorscale='Viridis',
                   colorbar=dict(title='E', x=0.45),
                   hovertemplate='t=%{x:.3f}<br>n=%{y:.3e}<br>E=%{z:.6e}<extra></extra>'),
        row=1, col=1,
    )
    fig.add_trace(
        go.Heatmap(x=ts, y=ns, z=signal_values, colorscale='Viridis',
                   colorbar=dict(title='ΔE', x=1.02),
                   hovertemplate='t=%{x:.3f}<br>n=%{y:.3e}<br>ΔE=%{z:.6e}<extra></extra>'),
        row=1, col=2,
    )
    for col in (1, 2):
        fig.add_vline(x=1.0, line_dash='dash', line_color='white', row=1, col=col)
        fig.update_xaxes(title_text='T/T_C', row=1, col=col)
        fig.update_yaxes(title_text='n [cm⁻³]', row=1, col=col)
    fig.update_layout(title='BEC 공간 얽힘 스윕', width=1200, height=520)

    paths.ensure_parent_dir(path)
    fig.write_html(path, include_plotlyjs='cdn')
    return path


if __name__ == '__main__':
    import sweep_config

    print("=== generate_heatmap_report 테스트 ===")
    config = sweep_config.load_config()
    records = sweep_calculator.run_sweep(config)
    print(f"✅ SVG: {render_heatmap(records, paths.get_results_path('bec_surface.svg'))}")
    print(f"✅ HTML: {render_heatmap_html(records, paths.get_results_path('bec_surface.html'))}")

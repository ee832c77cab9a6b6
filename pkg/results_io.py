#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
results_io.py
스윕 결과 파일 입출력 모듈

- write_csv: ResultRecord 목록 → CSV (UTF-8, LF, 17자리 유효숫자)
- read_csv_records: CSV → ResultRecord 목록 (비트 단위 왕복)
- write_xlsx: 엑셀 내보내기 (openpyxl)
"""

import math

import pandas as pd

import paths
from sweep_calculator import RESULT_COLUMNS, ResultRecord


FLOAT_FORMAT = '%.17g'

# 문자열/선택 열
_OPTIONAL_COLUMNS = ('e_false_baseline', 'oracle_i_aa', 'oracle_i_aa_stderr', 'oracle_i_ab', 'oracle_i_ab_stderr')


class ResultsIOError(OSError):
    """결과 파일 입출력 실패 (경로 포함)"""


def records_to_dataframe(records):
    """ResultRecord 목록 → DataFrame (열 순서 = RESULT_COLUMNS)"""
    df = pd.DataFrame([record.as_row() for record in records], columns=list(RESULT_COLUMNS))
    # None이 섞인 열도 float로 맞춰야 float_format이 적용된다
    for column in _OPTIONAL_COLUMNS:
        df[column] = df[column].astype(float)
    df['warnings'] = df['warnings'].astype(str)
    return df


def write_csv(records, path):
    """
    CSV 저장

    빈 목록이면 헤더만 쓴다. 검증 열이 None이면 빈 칸.

    Args:
        records (list[ResultRecord]): 결과
        path (str): 저장 경로

    Raises:
        ResultsIOError: 쓰기 실패
    """
    df = records_to_dataframe(records)
    try:
        paths.ensure_parent_dir(path)
        df.to_csv(
            path,
            index=False,
            float_format=FLOAT_FORMAT,
            na_rep='',
            encoding='utf-8',
            lineterminator='\n',
        )
    except OSError as e:
        raise ResultsIOError(f"CSV 저장 실패: {path}: {e}") from e
    return path


def _optional_float(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return float(value)


def read_csv_records(path):
    """
    CSV → ResultRecord 목록

    float_precision='round_trip'으로 읽어서 쓴 값과 비트 단위로 같다.
    """
    try:
        df = pd.read_csv(
            path,
            encoding='utf-8',
            dtype={'warnings': str},
            keep_default_na=False,
            na_values={column: [''] for column in _OPTIONAL_COLUMNS},
            float_precision='round_trip',
        )
    except OSError as e:
        raise ResultsIOError(f"CSV 읽기 실패: {path}: {e}") from e

    missing = [column for column in RESULT_COLUMNS if column not in df.columns]
    if missing:
        raise ResultsIOError(f"CSV 열 누락: {path}: {missing}")

    records = []
    for row in df.to_dict(orient='records'):
        values = {}
        for column in RESULT_COLUMNS:
            if column == 'warnings':
                values[column] = row[column] or ''
            elif column in _OPTIONAL_COLUMNS:
                values[column] = _optional_float(row[column])
            else:
                values[column] = float(row[column])
        records.append(ResultRecord.from_row(values))
    return records


def write_xlsx(records, path):
    """엑셀(.xlsx) 저장"""
    df = records_to_dataframe(records)
    try:
        paths.ensure_parent_dir(path)
        df.to_excel(path, index=False, engine='openpyxl', sheet_name='sweep')
    except OSError as e:
        raise ResultsIOError(f"엑셀 저장 실패: {path}: {e}") from e
    return path

"""
경로 관리 모듈

설정 파일(configs/)과 결과물(results/) 위치를 한 곳에서 관리합니다.

사용법:
    from paths import get_config_path, get_results_path

    # 기본 설정 파일 (가중 얽힘 표면)
    config_path = get_config_path('bec_surface.conf')

    # 결과 파일 경로 (폴더가 없으면 생성)
    csv_path = get_results_path('sweep.csv')
"""

import os


def get_base_path():
    """
    기본 경로 반환 (이 파일이 있는 저장소 루트)

    Returns:
        str: 기본 경로
    """
    return os.path.dirname(os.path.abspath(__file__))


def get_config_path(config_filename=''):
    """
    설정 파일 경로 반환

    Args:
        config_filename: 설정 파일명 (예: 'bec_surface.conf')

    Returns:
        str: configs 폴더 또는 그 안의 파일 경로
    """
    base = os.path.join(get_base_path(), 'configs')
    if config_filename:
        return os.path.join(base, config_filename)
    return base


def get_results_path(filename=''):
    """
    결과 저장 폴더 경로 반환 (없으면 생성)

    Args:
        filename: 결과 파일명 (예: 'sweep.csv')

    Returns:
        str: results 폴더 또는 그 안의 파일 경로
    """
    base = os.path.join(get_base_path(), 'results')
    os.makedirs(base, exist_ok=True)
    if filename:
        return os.path.join(base, filename)
    return base


def ensure_parent_dir(path):
    """출력 파일의 상위 폴더 생성"""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    return path


# 편의를 위한 상수들 (모듈 로드 시 한 번만 계산)
BASE_PATH = get_base_path()
DEFAULT_CONFIG_PATH = get_config_path('bec_surface.conf')


# 디버깅용: 현재 경로 정보 출력
if __name__ == '__main__':
    print("=" * 50)
    print("경로 정보")
    print("=" * 50)
    print(f"BASE_PATH: {BASE_PATH}")
    print(f"DEFAULT_CONFIG_PATH: {DEFAULT_CONFIG_PATH}")
    print(f"결과 폴더: {get_results_path()}")
    print("=" * 50)

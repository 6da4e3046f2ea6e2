import json
from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.models.enums import CorrelationMode
from app.models.geometry import PointPattern, SegmentSet, Window
from app.schemas.experiment import ExperimentConfig
from app.schemas.scenario import (
    BooleanShadow,
    ClusterShadow,
    GridShadow,
    MaternDeployment,
    PPPDeployment,
    Scenario,
)


# Фикстура для генератора случайных чисел с фиксированным зерном
@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def window() -> Window:
    return Window(10.0)


# Фабрика сценариев с сеточным затенением
@pytest.fixture
def grid_scenario() -> Callable[..., Scenario]:
    def _make(delta: float = 5.0, mode: CorrelationMode = CorrelationMode.CORRELATED, **overrides) -> Scenario:
        shadow = GridShadow(
            lambda_b=overrides.pop("lambda_b", 1.0), K=overrides.pop("K", 0.1), delta=delta,
        )
        params = {
            "deployment": PPPDeployment(intensity=overrides.pop("intensity", 1.0)),
            "shadow": shadow,
            "mode": mode,
            "exclusion_radius": 0.25,
            "r_max": 8.0,
        }
        params.update(overrides)
        return Scenario(**params)

    return _make


# Фабрика сценариев кластерного процесса (λ_m·λ_d = 1 по умолчанию)
@pytest.fixture
def cluster_scenario() -> Callable[..., Scenario]:
    def _make(lambda_d: float = 5.0, mode: CorrelationMode = CorrelationMode.CORRELATED, **overrides) -> Scenario:
        params = {
            "deployment": MaternDeployment(
                lambda_m=overrides.pop("lambda_m", 1.0 / lambda_d), lambda_d=lambda_d, r_d=1.0,
            ),
            "shadow": ClusterShadow(lambda_b=1.0, K=0.1),
            "mode": mode,
            "exclusion_radius": 0.25,
            "r_max": 8.0,
        }
        params.update(overrides)
        return Scenario(**params)

    return _make


@pytest.fixture
def boolean_scenario() -> Callable[..., Scenario]:
    def _make(lambda_b: float = 0.5, length: float = 5.0, mode=CorrelationMode.CORRELATED, **overrides) -> Scenario:
        params = {
            "deployment": PPPDeployment(intensity=1.0),
            "shadow": BooleanShadow(lambda_b=lambda_b, K=0.01, length=length),
            "mode": mode,
            "exclusion_radius": 0.25,
            "r_max": 8.0,
        }
        params.update(overrides)
        return Scenario(**params)

    return _make


@pytest.fixture
def pattern_factory(window) -> Callable[..., PointPattern]:
    def _make(points, **kwargs) -> PointPattern:
        return PointPattern(points=np.asarray(points, dtype=float), window=kwargs.pop("window", window), **kwargs)

    return _make


@pytest.fixture
def single_segment() -> SegmentSet:
    """Вертикальный отрезок длины 2 с центром (1, 0)."""
    return SegmentSet(centers=[[1.0, 0.0]], length=2.0, angles=[np.pi / 2], center_intensity=0.0)


# Минимальная валидная конфигурация эксперимента (как словарь)
@pytest.fixture
def config_data() -> Dict[str, Any]:
    return {
        "name": "small_grid",
        "metric": "coverage",
        "scenario": {
            "deployment": {"kind": "ppp", "intensity": 1.0},
            "shadow": {"kind": "grid", "lambda_b": 1.0, "K": 0.1, "delta": 5.0},
            "exclusion_radius": 0.25,
            "r_max": 5.0,
        },
        "theta_db": [-10, 0, 10],
        "reps": 60,
        "seed": 7,
    }


@pytest.fixture
def make_config(config_data) -> Callable[..., ExperimentConfig]:
    def _make(**overrides) -> ExperimentConfig:
        data = json.loads(json.dumps(config_data))
        data.update(overrides)
        return ExperimentConfig.model_validate(data)

    return _make


# Запись конфигурации во временный файл
@pytest.fixture
def write_config(tmp_path) -> Callable[..., Path]:
    def _write(data: Dict[str, Any] | str, name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data, indent=2), encoding="utf-8")
        return path

    return _write


# Фикстура для тестового клиента
@pytest.fixture(scope="module")
def test_client():
    """Фикстура для тестового клиента FastAPI"""
    with TestClient(app) as client:
        yield client

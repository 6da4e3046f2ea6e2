"""
Тесты HTTP API
"""

import io

import pandas as pd
from fastapi import status

from app.models.enums import VerifySuite
from app.schemas.verification import PropertyResult
from app.services.verification import SUITES
from app.utils.export import RESULT_COLUMNS


class TestServiceEndpoints:
    """Корневые эндпоинты"""

    def test_root(self, test_client):
        response = test_client.get("/")
        assert response.status_code == status.HTTP_200_OK
        assert response.json()["status"] == "operational"

    def test_health(self, test_client):
        assert test_client.get("/health").json() == {"status": "healthy", "service": "shadowsim-api"}


class TestExperimentEndpoints:
    """Запуск экспериментов через API"""

    def test_run_returns_csv(self, test_client, config_data):
        response = test_client.post("/experiments/run", json=config_data, params={"reps": 10})
        assert response.status_code == status.HTTP_200_OK
        assert response.headers["content-type"].startswith("text/csv")
        assert "small_grid.csv" in response.headers["content-disposition"]
        frame = pd.read_csv(io.StringIO(response.text))
        assert list(frame.columns) == RESULT_COLUMNS
        assert len(frame) == 6

    def test_run_xlsx(self, test_client, config_data):
        response = test_client.post("/experiments/run", json=config_data, params={"reps": 5, "format": "xlsx"})
        assert response.status_code == status.HTTP_200_OK
        assert "small_grid.xlsx" in response.headers["content-disposition"]

    def test_invalid_body(self, test_client, config_data):
        config_data["scenario"]["alpha"] = 2.0
        response = test_client.post("/experiments/run", json=config_data)
        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY

    def test_parameter_error_is_bad_request(self, test_client, config_data):
        # эмпирическому преобразованию Лапласа нужно не меньше 1000 реплик
        config_data["metric"] = "laplace"
        response = test_client.post("/experiments/run", json=config_data, params={"reps": 10})
        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert "1000" in response.json()["detail"]

    def test_bundled_list(self, test_client):
        response = test_client.get("/experiments/bundled")
        assert response.status_code == status.HTTP_200_OK
        assert "coverage_grid" in response.json()

    def test_bundled_unknown(self, test_client):
        response = test_client.post("/experiments/bundled/nope")
        assert response.status_code == status.HTTP_404_NOT_FOUND


class TestVerifyEndpoints:
    """Отчёты verify"""

    def test_unknown_suite(self, test_client):
        response = test_client.get("/verify/everything")
        assert response.status_code == status.HTTP_404_NOT_FOUND

    def test_failed_report_still_returned(self, test_client, monkeypatch):
        monkeypatch.setitem(
            SUITES, VerifySuite.MOMENTS,
            lambda reps, seed, threads=None: [PropertyResult(name="p", passed=False, margin=-1.0)],
        )
        response = test_client.get("/verify/moments", params={"reps": 5, "seed": 2})
        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["passed"] is False
        assert data["seed"] == 2
        assert data["properties"][0]["name"] == "p"

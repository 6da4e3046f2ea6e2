from typing import List, Optional

from fastapi import APIRouter, HTTPException, Query, status

from app.api.errors import to_http_error
from app.schemas.experiment import ExperimentConfig
from app.services.experiment import list_bundled, load_configs, run_configs, run_experiment
from app.utils.export import ExportFormat, get_exporter

experiment_router = APIRouter(prefix="/experiments", tags=["experiments"])


@experiment_router.post("/run")
def run(
    config: ExperimentConfig,
    format: ExportFormat = Query(ExportFormat.CSV),
    seed: Optional[int] = Query(None, ge=0),
    reps: Optional[int] = Query(None, ge=1),
):
    """Запустить эксперимент из тела запроса и вернуть строки результата файлом"""
    try:
        rows = run_experiment(config, seed=seed, reps=reps)
        return get_exporter(format.value).export(rows, filename=config.name)
    except Exception as e:
        raise to_http_error(e)


@experiment_router.get("/bundled", response_model=List[str])
def bundled():
    return list_bundled()


@experiment_router.post("/bundled/{name}")
def run_bundled(
    name: str,
    format: ExportFormat = Query(ExportFormat.CSV),
    seed: Optional[int] = Query(None, ge=0),
    reps: Optional[int] = Query(None, ge=1),
):
    if name not in list_bundled():
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"Bundled config '{name}' not found")
    try:
        rows = run_configs(load_configs(name), seed=seed, reps=reps)
        return get_exporter(format.value).export(rows, filename=name)
    except Exception as e:
        raise to_http_error(e)

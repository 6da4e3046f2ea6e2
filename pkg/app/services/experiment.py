"""Запуск экспериментов: загрузка конфигураций, развёртка параметра и сборка строк результата.

Оба режима затенения считаются с одним и тем же seed, поэтому на каждой реплике они
видят одни и те же точки, препятствия и замирания.
"""

import json
import logging
import re
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.config import CONFIG_DIR, DEFAULT_SEED
from app.exceptions import ConfigError
from app.models.enums import CorrelationMode, FadingKind, LaplaceKind, MetricKind, ShadowKind, SweepVariable
from app.schemas.experiment import CompositeConfig, ExperimentConfig, ResultRow, SweepSpec
from app.schemas.scenario import Scenario
from app.services.analytic import analytic_curve, analytic_laplace
from app.services.metrics import (
    coverage_from_samples,
    coverage_rayleigh,
    coverage_rician,
    db_to_linear,
    local_delay_tail,
    shannon_throughput,
    shannon_throughput_analytic,
)
from app.services.simulate import empirical_laplace, sample_interference_values
from app.utils.export import RESULT_COLUMNS, summary_frame

logger = logging.getLogger(__name__)

SweepValue = Optional[Union[float, List[float]]]


# ========== ЗАГРУЗКА КОНФИГУРАЦИЙ ==========

def _key_line(text: str, loc: Sequence[Union[str, int]]) -> Optional[int]:
    """Номер строки, где в JSON-тексте встречается ключ по пути ``loc``."""
    position, line = 0, None
    for part in loc:
        if not isinstance(part, str):
            continue
        match = re.compile(rf'"{re.escape(part)}"\s*:').search(text, position)
        if match is None:
            continue
        position = match.end()
        line = text.count("\n", 0, match.start()) + 1
    return line


def _diagnostics(text: str, error: ValidationError) -> List[str]:
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        line = _key_line(text, item["loc"])
        where = f"line {line}" if line is not None else "line ?"
        lines.append(f"{where}: {path}: {item['msg']}")
    return lines


def parse_config(text: str, source: str = "<config>") -> Union[ExperimentConfig, CompositeConfig]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}: invalid JSON", [f"line {e.lineno}: {e.msg}"])
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")

    model = CompositeConfig if "include" in data else ExperimentConfig
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{source}: invalid experiment config", _diagnostics(text, e))


def list_bundled() -> List[str]:
    directory = Path(CONFIG_DIR)
    if not directory.is_dir():
        return []
    return sorted(path.stem for path in directory.glob("*.json"))


def resolve_config_path(name: Union[str, Path], base_dir: Optional[Path] = None) -> Path:
    """Путь к файлу конфигурации; короткое имя ищется среди встроенных конфигураций."""
    candidate = Path(name)
    if base_dir is not None and not candidate.is_absolute():
        candidate = base_dir / candidate
    if candidate.is_file():
        return candidate
    for bundled in (Path(CONFIG_DIR) / str(name), Path(CONFIG_DIR) / f"{name}.json"):
        if bundled.is_file():
            return bundled
    raise ConfigError(f"config not found: {name}")


def load_configs(name: Union[str, Path], _stack: tuple = ()) -> List[ExperimentConfig]:
    """Reads a config and expands ``include`` lists depth-first, in order."""
    path = resolve_config_path(name, Path(_stack[-1]).parent if _stack else None).resolve()
    if str(path) in _stack:
        raise ConfigError(f"include cycle through {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}")

    config = parse_config(text, str(path))
    if isinstance(config, ExperimentConfig):
        return [config]
    configs = []
    for child in config.include:
        configs.extend(load_configs(child, _stack + (str(path),)))
    return configs


# ========== РАЗВЁРТКА ==========

def apply_sweep(scenario: Scenario, sweep: SweepSpec, value: SweepValue) -> Scenario:
    variable = sweep.variable
    if variable == SweepVariable.NONE or value is None:
        return scenario
    if variable == SweepVariable.DELTA:
        return scenario.model_copy(update={"shadow": scenario.shadow.model_copy(update={"delta": float(value)})})
    if variable == SweepVariable.LAMBDA_D:
        deployment = scenario.deployment
        update = {"lambda_d": float(value)}
        if sweep.hold_density:
            update["lambda_m"] = deployment.density / float(value)
        return scenario.model_copy(update={"deployment": deployment.model_copy(update=update)})
    if variable == SweepVariable.LAMBDA_B_L:
        lambda_b, length = value
        shadow = scenario.shadow.model_copy(update={"lambda_b": float(lambda_b), "length": float(length)})
        return scenario.model_copy(update={"shadow": shadow})
    link = scenario.link.model_copy(update={"kappa": float(value), "fading": FadingKind.RICIAN})
    return scenario.model_copy(update={"link": link})


def sweep_label(variable: SweepVariable, value: SweepValue) -> str:
    if variable == SweepVariable.NONE or value is None:
        return ""
    if variable == SweepVariable.LAMBDA_B_L:
        return f"lambda_b={value[0]:g}/l={value[1]:g}"
    return f"{variable.value}={value:g}"


# ========== ВЫЧИСЛЕНИЕ МЕТРИК ==========

class _Panel:
    """Строки одной комбинации (режим, значение развёртки)."""

    def __init__(self, config: ExperimentConfig, scenario: Scenario, sweep: str, seed: int, reps: int, threads):
        self.config = config
        self.scenario = scenario
        self.sweep = sweep
        self.seed = seed
        self.reps = reps
        self.threads = threads

    def row(self, mode: str, x: float, estimate: float, error: float, reps: int) -> ResultRow:
        return ResultRow(
            scenario=self.config.name, mode=mode, sweep=self.sweep, x=float(x),
            estimate=float(estimate), error=float(error), reps=reps, seed=self.seed,
        )

    def rows(self, mode: str) -> List[ResultRow]:
        metric = self.config.metric
        if metric == MetricKind.LAPLACE:
            return self._laplace(mode)
        if metric == MetricKind.COVERAGE:
            return self._coverage(mode)
        if metric == MetricKind.THROUGHPUT:
            return self._throughput(mode)
        return self._delay(mode)

    @property
    def _analytic(self) -> bool:
        return self.config.laplace_kind == LaplaceKind.ANALYTIC

    def _interference(self) -> np.ndarray:
        return sample_interference_values(self.scenario, self.reps, self.seed, self.threads)

    def _laplace(self, mode: str) -> List[ResultRow]:
        sc = self.scenario
        s_grid = self.config.s_grid
        if s_grid is None:
            s_grid = (db_to_linear(self.config.thetas_db) * sc.link.d_link ** sc.alpha).tolist()
        if self._analytic:
            curve = analytic_curve(sc, s_grid, self.config.quad_tol)
        else:
            curve = empirical_laplace(sc, s_grid, self.reps, self.seed, self.threads)
        return [
            self.row(mode, s, value, err, curve.replications)
            for s, value, err in zip(curve.s_grid, curve.values, curve.errors)
        ]

    def _coverage(self, mode: str) -> List[ResultRow]:
        sc = self.scenario
        thetas_db = self.config.thetas_db
        thetas = db_to_linear(thetas_db)

        if sc.link.fading == FadingKind.RICIAN:
            interference = self._interference()
            direct, series = [], []
            for theta_db, theta in zip(thetas_db, thetas):
                result = coverage_rician(
                    interference, float(theta), sc.link, sc.noise, sc.alpha, self.config.n_max_series,
                )
                direct.append(self.row(mode, theta_db, result.direct.value, result.direct.stderr, self.reps))
                series.append(self.row(f"{mode}:series", theta_db, result.series.value, result.series.stderr, self.reps))
            return direct + series

        if self._analytic:
            s_values = thetas * sc.link.d_link ** sc.alpha
            curve = analytic_curve(sc, s_values, self.config.quad_tol)
            return [
                self.row(
                    mode, theta_db, coverage_rayleigh(curve, float(theta), sc.link, sc.noise, sc.alpha),
                    np.exp(-s * sc.noise) * err, 0,
                )
                for theta_db, theta, s, err in zip(thetas_db, thetas, s_values, curve.errors)
            ]

        estimates = coverage_from_samples(self._interference(), thetas, sc.link, sc.noise, sc.alpha)
        return [
            self.row(mode, theta_db, est.value, est.stderr, est.replications)
            for theta_db, est in zip(thetas_db, estimates)
        ]

    def _throughput(self, mode: str) -> List[ResultRow]:
        sc = self.scenario
        if self._analytic:
            tol = self.config.quad_tol
            value = shannon_throughput_analytic(
                lambda s: analytic_laplace(sc, s, tol), sc.link, sc.noise, sc.alpha,
            )
            return [self.row(mode, 0.0, value, tol, 0)]
        est = shannon_throughput(self._interference(), sc.link, sc.noise, sc.alpha)
        return [self.row(mode, 0.0, est.value, est.stderr, est.replications)]

    def _delay(self, mode: str) -> List[ResultRow]:
        theta = float(db_to_linear(self.config.delay_theta_db))
        tail = local_delay_tail(self.scenario, theta, self.config.n_max, self.reps, self.seed, self.threads)
        if tail.mean_delay_divergent:
            logger.info(f"{self.config.name} [{mode}{self._sweep_note}]: mean local delay is infinite")
        else:
            logger.info(
                f"{self.config.name} [{mode}{self._sweep_note}]: mean local delay "
                f"{tail.mean_delay.value:.4g} ± {tail.mean_delay.stderr:.2g}"
            )
        return [
            self.row(mode, n, value, err, tail.patterns)
            for n, value, err in zip(tail.n_grid, tail.tail, tail.stderr)
        ]

    @property
    def _sweep_note(self) -> str:
        return f", {self.sweep}" if self.sweep else ""


def run_experiment(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    reps: Optional[int] = None,
    threads: Optional[int] = None,
) -> List[ResultRow]:
    """All rows of one config: sweep values outermost, then modes, then the x-grid."""
    seed = seed if seed is not None else (config.seed if config.seed is not None else DEFAULT_SEED)
    if reps is None:
        reps = config.delay_patterns if config.metric == MetricKind.DELAY else config.reps

    logger.info(
        f"Running {config.name}: metric={config.metric.value}, sweep={config.sweep.variable.value}, "
        f"modes={[m.value for m in config.modes]}, reps={reps}, seed={seed}"
    )
    rows: List[ResultRow] = []
    for value in config.sweep.points():
        scenario = apply_sweep(config.scenario, config.sweep, value)
        label = sweep_label(config.sweep.variable, value)
        for mode in config.modes:
            panel = _Panel(config, scenario.with_mode(mode), label, seed, reps, threads)
            logger.info(f"{config.name}: mode={mode.value}, sweep={label or '-'}, reps={reps}")
            rows.extend(panel.rows(mode.value))

            if mode == CorrelationMode.INDEPENDENT and scenario.shadow.kind == ShadowKind.BOOLEAN:
                for rule in config.mean_rules:
                    if rule == scenario.shadow.independent_mean:
                        continue
                    shadow = scenario.shadow.model_copy(update={"independent_mean": rule})
                    variant = scenario.with_mode(mode).model_copy(update={"shadow": shadow})
                    panel = _Panel(config, variant, label, seed, reps, threads)
                    rows.extend(panel.rows(f"{mode.value}:{rule.value}"))

    logger.info(f"Finished {config.name}: {len(rows)} rows")
    return rows


def run_configs(
    configs: Sequence[ExperimentConfig],
    seed: Optional[int] = None,
    reps: Optional[int] = None,
    threads: Optional[int] = None,
) -> List[ResultRow]:
    rows: List[ResultRow] = []
    for config in configs:
        rows.extend(run_experiment(config, seed, reps, threads))
    return rows


def rows_to_frame(rows: Sequence[ResultRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=RESULT_COLUMNS)


def summarize(rows: Sequence[ResultRow]) -> pd.DataFrame:
    """Краткая сводка для стандартного вывода: число точек и диапазон оценок по панелям."""
    return summary_frame(rows_to_frame(rows))

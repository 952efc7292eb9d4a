"""Reader for custom Monte Carlo experiment files.

The format is flat ``key = value`` lines.  ``#`` starts a comment, blank
lines are ignored, keys are case-insensitive and ``cell`` may repeat::

    # GML grid with two cells
    distribution = gml          # ml | gml                    (required)
    replicates   = 2000         # positive integer            (default 10000)
    estimators   = log, frac    # subset of log, frac         (default both)
    psi_mode     = paper        # accurate | paper            (default accurate)
    ddof         = 1            # 0 or 1, log-variance divisor n - ddof (default 1)
    cell         = 0.5, 20, 25  # param1, param2, n           (at least one)
    cell         = 0.9, 1, 500

For ``distribution = ml`` the two parameters are ``alpha, delta``; for
``gml`` they are ``alpha, beta``.
"""

from __future__ import annotations

from pathlib import Path

from .errors import DomainError
from .harness import DEFAULT_REPLICATES, Cell, ExperimentConfig

__all__ = ["ConfigError", "parse_experiment_config", "load_experiment_config"]

_KEYS = {"distribution", "replicates", "estimators", "psi_mode", "ddof", "cell"}


class ConfigError(DomainError):
    pass


def parse_experiment_config(text: str, master_seed: int) -> ExperimentConfig:
    values: dict[str, str] = {}
    cells: list[Cell] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key == "cell":
            parts = [p.strip() for p in value.split(",")]
            if len(parts) != 3:
                raise ConfigError(f"line {lineno}: cell needs 'param1, param2, n'")
            try:
                cells.append(Cell(float(parts[0]), float(parts[1]), int(parts[2])))
            except ValueError:
                raise ConfigError(f"line {lineno}: cannot parse cell {value!r}") from None
        elif key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        else:
            values[key] = value

    if "distribution" not in values:
        raise ConfigError("missing required key 'distribution'")
    if not cells:
        raise ConfigError("at least one 'cell' line is required")
    try:
        replicates = int(values.get("replicates", DEFAULT_REPLICATES))
        ddof = int(values.get("ddof", 1))
    except ValueError as exc:
        raise ConfigError(f"invalid integer: {exc}") from None
    estimators = tuple(e.strip().lower() for e in values.get("estimators", "log, frac").split(","))
    try:
        return ExperimentConfig(
            distribution=values["distribution"].lower(),
            cells=tuple(cells),
            master_seed=master_seed,
            replicates=replicates,
            estimators=estimators,
            psi_mode=values.get("psi_mode", "accurate"),
            ddof=ddof,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_experiment_config(path: str | Path, master_seed: int) -> ExperimentConfig:
    return parse_experiment_config(Path(path).read_text(), master_seed)

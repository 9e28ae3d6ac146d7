"""Result writers: path CSVs, local-time tables, transform dumps and JSON reports."""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from ..simulation.walk import PathBatch, PathSample

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"  # round-trip precision so reruns diff cleanly

PATH_HEADERS = ["t", "X", "Y", "qv"]
LOCALTIME_HEADERS = ["level", "eps", "t", "Lp", "Lminus", "Lm_right", "Lm_left", "n_samples"]


def _prepare(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def path_frame(sample: PathSample) -> pd.DataFrame:
    """One row per grid time; qv is the variation accrued on [t_n, t_{n+1}), 0 in the last row."""
    qv = np.append(np.asarray(sample.qv, dtype=float), 0.0)
    return pd.DataFrame(
        {"t": sample.times, "X": sample.values, "Y": sample.Y, "qv": qv[: len(sample.times)]},
        columns=PATH_HEADERS,
    )


def write_path_csv(sample: PathSample, path: str | Path) -> Path:
    path = _prepare(path)
    path_frame(sample).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_path_dumps(batches, directory: str | Path, limit: int | None = None) -> list[Path]:
    """Write path_<index>.csv for every path of a stream of batches."""
    directory = Path(directory)
    written: list[Path] = []
    for batch in batches:
        if not isinstance(batch, PathBatch):
            raise TypeError(f"expected PathBatch, got {type(batch).__name__}")
        for sample in batch:
            if limit is not None and len(written) >= limit:
                return written
            written.append(write_path_csv(sample, directory / f"path_{sample.index:06d}.csv"))
    logger.info(f"wrote {len(written)} path files to {directory}")
    return written


def write_table_csv(columns: dict[str, Any], path: str | Path) -> Path:
    path = _prepare(path)
    pd.DataFrame(columns).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_localtime_csv(estimates, path: str | Path) -> Path:
    path = _prepare(path)
    frame = pd.DataFrame([e.to_dict() for e in estimates], columns=LOCALTIME_HEADERS)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def to_json(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_json(data: dict[str, Any], path: str | Path) -> Path:
    path = _prepare(path)
    path.write_text(to_json(data))
    return path

"""
File loader utility for run configurations and measured time series.

Responsibilities:
- Load and parse JSON run configurations from disk
- Load two-column (time, population) CSV files for the fitter
- Load (angle, light shift) CSV tables for Rabi calibration
- Raise informative errors (ConfigError family) with file and line context
- Return clean parsed objects (dict or numpy arrays)
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from scatterqubit.utils.exceptions import ConfigError
from scatterqubit.utils.logger import logger


class FileLoaderError(ConfigError):
    """Raised when a run configuration or data file fails to load or validate."""


def load_json_config(file_path: str | Path) -> Dict[str, Any]:
    """
    Loads a JSON run configuration and returns it as a dict.

    Args:
        file_path (str | Path): Path to the JSON document.

    Returns:
        Dict[str, Any]: Parsed configuration (not yet validated).

    Raises:
        FileLoaderError: If the file is missing, malformed or not a JSON object.
    """
    path = Path(file_path)
    if not path.exists():
        raise FileLoaderError(f"Run configuration not found: {file_path}")
    if path.suffix.lower() != ".json":
        raise FileLoaderError(f"Unsupported run configuration extension: {path.suffix}")

    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FileLoaderError(f"JSON parsing error in '{file_path}' (line {e.lineno}): {e.msg}")
    except OSError as e:
        raise FileLoaderError(f"Error reading run configuration '{file_path}': {e}")

    if not isinstance(data, dict):
        raise FileLoaderError("Run configuration must be a JSON object at the top level.")

    logger.debug(f"Loaded run configuration: {file_path}")
    return data


def _read_numeric_table(file_path: str | Path) -> np.ndarray:
    """
    Rows of a 2- or 3-column numeric CSV. A header row is optional; blank
    lines are ignored.

    Raises:
        FileLoaderError: If the file is missing, has the wrong column count,
            holds non-numeric cells or fewer than two data rows.
    """
    path = Path(file_path)
    if not path.exists():
        raise FileLoaderError(f"Data file not found: {file_path}")

    rows: list[list[float]] = []
    try:
        with path.open("r", encoding="utf-8", newline="") as f:
            for line_no, record in enumerate(csv.reader(f), start=1):
                if not record or all(not cell.strip() for cell in record):
                    continue
                try:
                    values = [float(cell) for cell in record]
                except ValueError:
                    if line_no == 1 and not rows:
                        continue  # header
                    raise FileLoaderError(f"Non-numeric value in '{file_path}' line {line_no}: {record}")
                if len(values) not in (2, 3):
                    raise FileLoaderError(
                        f"Expected 2 or 3 columns in '{file_path}' line {line_no}, got {len(values)}"
                    )
                if rows and len(values) != len(rows[0]):
                    raise FileLoaderError(f"Inconsistent column count in '{file_path}' line {line_no}")
                rows.append(values)
    except OSError as e:
        raise FileLoaderError(f"Error reading data file '{file_path}': {e}")

    if len(rows) < 2:
        raise FileLoaderError(f"Data file '{file_path}' needs at least two data rows, found {len(rows)}")
    logger.debug(f"Loaded {len(rows)} samples from {file_path}")
    return np.asarray(rows, dtype=float)


def load_timeseries_csv(
    file_path: str | Path,
) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
    """
    Loads a (time, population[, sigma]) CSV written by the sequence command
    or by hand.

    Returns:
        (times, populations, sigma or None)
    """
    table = _read_numeric_table(file_path)
    sigma = table[:, 2] if table.shape[1] == 3 else None
    return table[:, 0], table[:, 1], sigma


def load_stark_csv(
    file_path: str | Path,
) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
    """
    Loads measured light shifts as (angle_deg, shift_hz[, sigma_hz]), the
    layout the stark command writes.

    Returns:
        (angles in degrees, shifts in Hz, sigma or None)
    """
    table = _read_numeric_table(file_path)
    sigma = table[:, 2] if table.shape[1] == 3 else None
    if sigma is not None and np.any(sigma <= 0.0):
        raise FileLoaderError(f"Shift uncertainties in '{file_path}' must be positive")
    return table[:, 0], table[:, 1], sigma

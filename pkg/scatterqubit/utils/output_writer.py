"""
Output Writer Module

- Writes CSV / JSON / SVG results with LF line endings and UTF-8
- Hashes run configurations (canonical JSON + SHA-256) for provenance
- Adds a <name>.meta.json sidecar next to CSV outputs
- Multiprocessing-safe with file locks
"""

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

from filelock import FileLock, Timeout

from scatterqubit.utils.constants import CONFIG_HASH_LENGTH, CSV_FLOAT_FORMAT
from scatterqubit.utils.exceptions import OutputError
from scatterqubit.utils.logger import logger


def compute_config_hash(document: Dict[str, Any]) -> str:
    """
    Returns the first 16 hex characters of SHA-256 over the canonical
    (sorted keys, compact separators) JSON form of `document`.
    """
    encoded = json.dumps(document, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(encoded).hexdigest()[:CONFIG_HASH_LENGTH]


def format_cell(value: Any) -> str:
    """Locale-independent CSV cell: floats as .9g, NaN as empty, bools lower-case."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else format(value, CSV_FLOAT_FORMAT)
    return str(value)


class OutputWriter:
    """
    Writes text outputs under a lock file so that concurrent runs targeting
    the same path do not interleave.

    Every failure to create or write a file surfaces as OutputError. The
    `<name>.lock` files stay next to their targets.
    """

    def __init__(self, lock_timeout: float = 10.0):
        self.lock_timeout = lock_timeout

    def write_text(self, path: str | Path, text: str) -> Path:
        target = Path(path)
        lock_path = target.with_name(target.name + ".lock")
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            with FileLock(str(lock_path), timeout=self.lock_timeout):
                with target.open("w", encoding="utf-8", newline="\n") as f:
                    f.write(text)
        except Timeout as e:
            raise OutputError(f"Timed out waiting for lock on {target}: {e}")
        except OSError as e:
            raise OutputError(f"Cannot write {target}: {e}")
        logger.debug(f"Wrote {target}")
        return target

    def write_json(self, path: str | Path, payload: Dict[str, Any]) -> Path:
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
        return self.write_text(path, text)

    def write_csv(
        self,
        path: str | Path,
        header: Sequence[str],
        rows: Iterable[Sequence[Any]],
        meta: Optional[Dict[str, Any]] = None,
    ) -> Path:
        """
        Writes a header plus formatted rows. When `meta` is given it goes to
        the `<name>.meta.json` sidecar, keeping the CSV header exact.
        """
        lines = [",".join(header)]
        for row in rows:
            if len(row) != len(header):
                raise OutputError(f"Row has {len(row)} cells, header has {len(header)}")
            lines.append(",".join(format_cell(v) for v in row))
        target = self.write_text(path, "\n".join(lines) + "\n")
        if meta is not None:
            self.write_json(self.meta_path(target), meta)
        return target

    @staticmethod
    def meta_path(path: str | Path) -> Path:
        target = Path(path)
        return target.with_name(target.name + ".meta.json")

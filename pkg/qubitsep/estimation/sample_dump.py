"""Per-sample CSV dumps of volume runs."""

from pathlib import Path
from typing import IO, Optional

import numpy as np

from qubitsep.exceptions import ConfigurationError
from qubitsep.types import FloatArray

COLUMNS: tuple[str, ...] = (
    ("index",)
    + tuple(f"u{j}" for j in range(1, 13))
    + tuple(f"v{j}" for j in range(1, 4))
    + tuple(f"lambda{j}" for j in range(1, 5))
    + ("weight", "separable", "negativity", "concurrence")
)

_FORMATS = ["%d"] + ["%.17g"] * 20 + ["%d", "%.17g", "%.17g"]


class SampleDump:
    """CSV sink opened before sampling starts, so a bad path fails early."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        try:
            self._handle: Optional[IO[str]] = self.path.open("w", encoding="utf-8", newline="\n")
        except OSError as exc:
            raise ConfigurationError(f"Cannot write sample dump {self.path}: {exc}") from exc
        self._handle.write(",".join(COLUMNS) + "\n")
        self.rows_written = 0

    def write_rows(self, rows: FloatArray) -> None:
        if self._handle is None:
            raise ConfigurationError(f"Sample dump {self.path} is closed")
        np.savetxt(self._handle, rows, fmt=_FORMATS, delimiter=",")
        self.rows_written += len(rows)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def __enter__(self) -> "SampleDump":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def read_dump(path: str | Path) -> FloatArray:
    """Rows of a dump as a float array (header skipped)."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)

"""Per-iteration solver records."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

TRACE_SCHEMA_VERSION = 1
TRACE_KEYS = ("t", "mu", "j_smoothed", "j_exact", "dz_inf", "dz_fro", "stationarity", "seconds")


@dataclass
class IterationRecord:
    t: int
    mu: float
    j_smoothed: float
    j_exact: float
    dz_inf: float
    dz_fro: float
    stationarity: float
    seconds: float


@dataclass
class SolveTrace:
    """History of one IRLS run.

    ``records[k]`` describes iterate ``Z_{k+1}``: ``mu`` is the smoothing
    level its weights were built at, ``j_smoothed`` the smoothed objective
    at that level and ``stationarity`` the first-order residual there.
    """

    records: list[IterationRecord] = field(default_factory=list)
    converged: bool = False
    epsilon: float = float("nan")

    def __len__(self):
        return len(self.records)

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def seconds(self) -> float:
        return self.records[-1].seconds if self.records else 0.0

    def column(self, key: str) -> np.ndarray:
        return np.array([getattr(r, key) for r in self.records])

    def log_residual_slope(self, key: str = "dz_fro", tail: int = 20) -> float:
        """Least-squares slope of ``log10(key)`` over the last ``tail`` records.

        A roughly constant negative slope indicates linear convergence.
        """
        y = self.column(key)[-tail:]
        y = y[y > 0]
        if y.size < 2:
            return float("nan")
        return float(np.polyfit(np.arange(y.size), np.log10(y), 1)[0])

    def to_jsonl(self) -> str:
        return "".join(json.dumps(asdict(r)) + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str) -> "SolveTrace":
        recs = [IterationRecord(**json.loads(line)) for line in text.splitlines() if line.strip()]
        return cls(records=recs)

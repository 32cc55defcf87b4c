"""Pearson, Spearman, and Kendall tau-b over per-system score vectors.

Undefined correlations (a constant side) raise instead of returning 0,
so a degenerate metric cannot silently corrupt a meta-evaluation table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation has no defined value (constant input)."""


@dataclass(frozen=True)
class ScoreVector:
    """Parallel per-system values and unique system labels."""

    values: tuple[float, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.values) != len(self.labels):
            raise ValueError("values and labels must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")

    def __len__(self) -> int:
        return len(self.values)


ArrayLike = "ScoreVector | Sequence[float] | np.ndarray"


def _paired(x, y) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(x, ScoreVector) and isinstance(y, ScoreVector):
        if x.labels != y.labels:
            raise ValueError("score vectors are not aligned by label")
    xv = np.asarray(x.values if isinstance(x, ScoreVector) else x, dtype=np.float64)
    yv = np.asarray(y.values if isinstance(y, ScoreVector) else y, dtype=np.float64)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise ValueError("inputs must be 1-d and of equal length")
    if len(xv) < 2:
        raise ValueError("correlation requires at least 2 points")
    return xv, yv


def _require_varying(v: np.ndarray, side: str) -> None:
    if np.all(v == v[0]):
        raise UndefinedCorrelationError(f"{side} input is constant; correlation is undefined")


def _clamp(value: float) -> float:
    """Keep rounding noise from pushing a coefficient past the [-1, 1] range."""
    return min(1.0, max(-1.0, value))


def pearson(x, y) -> float:
    """Product-moment correlation."""
    xv, yv = _paired(x, y)
    _require_varying(xv, "x")
    _require_varying(yv, "y")
    xc = xv - xv.mean()
    yc = yv - yv.mean()
    return _clamp(float(xc.dot(yc) / np.sqrt(xc.dot(xc) * yc.dot(yc))))


def spearman(x, y) -> float:
    """Pearson correlation of average-rank-transformed values."""
    xv, yv = _paired(x, y)
    _require_varying(xv, "x")
    _require_varying(yv, "y")
    return pearson(rankdata(xv), rankdata(yv))


def kendall(x, y) -> float:
    """Tau-b: (concordant - discordant) / sqrt((n0 - n1) (n0 - n2)).

    n1 and n2 count tied pairs on each side; a side where every pair is
    tied leaves the coefficient undefined.
    """
    xv, yv = _paired(x, y)
    _require_varying(xv, "x")
    _require_varying(yv, "y")
    iu = np.triu_indices(len(xv), k=1)
    sx = np.sign(xv[:, None] - xv[None, :])[iu]
    sy = np.sign(yv[:, None] - yv[None, :])[iu]
    con_minus_dis = int(np.sum(sx * sy))
    n0 = len(sx)
    n1 = int(np.sum(sx == 0))
    n2 = int(np.sum(sy == 0))
    return _clamp(con_minus_dis / np.sqrt((n0 - n1) * (n0 - n2)))


@dataclass(frozen=True)
class CorrelationTriple:
    pearson: float
    spearman: float
    kendall: float


def correlation_triple(x, y) -> CorrelationTriple:
    return CorrelationTriple(pearson(x, y), spearman(x, y), kendall(x, y))


def align_by_label(x: ScoreVector, y: ScoreVector) -> tuple[ScoreVector, ScoreVector]:
    """Restrict both vectors to their common labels, in sorted label order."""
    common = sorted(set(x.labels) & set(y.labels))
    xmap = dict(zip(x.labels, x.values))
    ymap = dict(zip(y.labels, y.values))
    return (
        ScoreVector(tuple(xmap[l] for l in common), tuple(common)),
        ScoreVector(tuple(ymap[l] for l in common), tuple(common)),
    )

"""Fusion of the pixel-domain score and the spectrum score.

Whichever detector is further from 0.5 (the more confident one) wins. An
exact tie in confidence returns the mean of the two scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# margins closer than this count as tied; (0.3, 0.7) differ by one ulp in binary
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ScorePair:
    r_i: float
    r_f: float

    def __post_init__(self):
        for name in ("r_i", "r_f"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name}={v} outside [0, 1]")


def combine(p: ScorePair) -> float:
    m_i = abs(p.r_i - 0.5)
    m_f = abs(p.r_f - 0.5)
    if abs(m_i - m_f) <= TIE_TOL:
        return (p.r_i + p.r_f) / 2
    return p.r_i if m_i > m_f else p.r_f


def combine_many(r_i, r_f) -> np.ndarray:
    """Vectorized :func:`combine` over paired score arrays."""
    r_i = np.asarray(r_i, dtype=np.float64)
    r_f = np.asarray(r_f, dtype=np.float64)
    if r_i.shape != r_f.shape:
        raise ValueError("score arrays differ in shape")
    for a in (r_i, r_f):
        if np.any((a < 0) | (a > 1)) or np.any(np.isnan(a)):
            raise DomainError("scores must lie in [0, 1]")
    m_i = np.abs(r_i - 0.5)
    m_f = np.abs(r_f - 0.5)
    tie = np.abs(m_i - m_f) <= TIE_TOL
    return np.where(tie, (r_i + r_f) / 2, np.where(m_i > m_f, r_i, r_f))

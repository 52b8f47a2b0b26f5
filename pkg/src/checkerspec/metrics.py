"""Threshold metrics (precision, recall, F-score) and average precision.

An item is predicted CNN-generated when its score is strictly greater than
the threshold. Labels: 1 = CNN-generated, 0 = camera/real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UndefinedMetricError

DEFAULT_THRESHOLD = 0.5


def _arrays(scores, labels):
    s = np.asarray(scores, dtype=np.float64).ravel()
    y = np.asarray(labels).ravel()
    if s.shape != y.shape:
        raise ValueError(f"{s.size} scores but {y.size} labels")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    return s, y.astype(bool)


def confusion_at(scores, labels, th: float = DEFAULT_THRESHOLD) -> tuple[int, int, int, int]:
    """Return ``(TP, FP, TN, FN)`` for the decision ``score > th``."""
    s, y = _arrays(scores, labels)
    pred = s > th
    tp = int(np.sum(pred & y))
    fp = int(np.sum(pred & ~y))
    tn = int(np.sum(~pred & ~y))
    fn = int(np.sum(~pred & y))
    return tp, fp, tn, fn


def f_from_pr(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * r * p / (r + p)


def f_score(scores, labels, th: float = DEFAULT_THRESHOLD) -> tuple[float, float, float]:
    """Precision, recall and F-score at ``th``.

    Precision is 0 when nothing is predicted positive. Raises
    :class:`UndefinedMetricError` when there are no positive labels.
    """
    tp, fp, _, fn = confusion_at(scores, labels, th)
    if tp + fn == 0:
        raise UndefinedMetricError("recall undefined: no positive labels")
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn)
    return p, r, f_from_pr(p, r)


def pr_curve(scores, labels) -> list[tuple[float, float]]:
    """``(recall, precision)`` after each distinct score, highest score first.

    All items sharing a score are consumed together, so the curve does not
    depend on input order among ties.
    """
    s, y = _arrays(scores, labels)
    n_pos = int(y.sum())
    if n_pos == 0:
        raise UndefinedMetricError("no positive labels")
    order = np.argsort(-s, kind="stable")
    s, y = s[order], y[order]
    tp = np.cumsum(y)
    # last index of each run of equal scores
    ends = np.flatnonzero(np.append(s[1:] != s[:-1], True))
    return [(float(tp[j] / n_pos), float(tp[j] / (j + 1))) for j in ends]


def average_precision(scores, labels) -> float:
    """Non-interpolated AP: sum of (R_j - R_{j-1}) * P_j, with R_0 = 0."""
    ap = 0.0
    prev_r = 0.0
    for r, p in pr_curve(scores, labels):
        ap += (r - prev_r) * p
        prev_r = r
    return float(ap)


@dataclass
class EvalReport:
    precision: float
    recall: float
    f_score: float
    ap: float
    threshold: float
    tp: int
    fp: int
    tn: int
    fn: int
    pr_points: list = field(default_factory=list, repr=False)

    @property
    def counts(self):
        return self.tp, self.fp, self.tn, self.fn

    def format_line(self) -> str:
        return (f"precision={self.precision:.6f} recall={self.recall:.6f} f={self.f_score:.6f} "
                f"ap={self.ap:.6f} th={self.threshold:g} tp={self.tp} fp={self.fp} "
                f"tn={self.tn} fn={self.fn}")

    def format_percent(self) -> str:
        return (f"precision={100 * self.precision:.2f}% recall={100 * self.recall:.2f}% "
                f"f={100 * self.f_score:.2f}% ap={100 * self.ap:.2f}%")

    def pr_csv(self) -> str:
        rows = ["recall,precision"] + [f"{r:.6f},{p:.6f}" for r, p in self.pr_points]
        return "\n".join(rows) + "\n"

    @classmethod
    def parse_line(cls, line: str) -> "EvalReport":
        kv = dict(tok.split("=", 1) for tok in line.split())
        return cls(float(kv["precision"]), float(kv["recall"]), float(kv["f"]), float(kv["ap"]),
                   float(kv["th"]), int(kv["tp"]), int(kv["fp"]), int(kv["tn"]), int(kv["fn"]))


def evaluate(scores, labels, th: float = DEFAULT_THRESHOLD) -> EvalReport:
    p, r, f = f_score(scores, labels, th)
    tp, fp, tn, fn = confusion_at(scores, labels, th)
    return EvalReport(p, r, f, average_precision(scores, labels), th, tp, fp, tn, fn,
                      pr_curve(scores, labels))

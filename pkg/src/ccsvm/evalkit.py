"""Fault-localization and CC-detection metrics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from scipy.stats import norm, rankdata

from .errors import DomainError, UndefinedTestError
from .sbfl import Ranking

EXACT_LIMIT = 20


@dataclass(frozen=True)
class ExamResult:
    exam_best: float
    exam_worst: float
    statements_examined_best: int
    statements_examined_worst: int


def exam(ranking: Ranking, faulty: Iterable[int], n_statements: int | None = None) -> ExamResult:
    """EXAM score: share of elements inspected until the first faulty one.

    ``n_statements`` defaults to the number of ranked predicates; pass a
    statement count to report at statement granularity instead.
    """
    faulty = set(faulty)
    if not faulty:
        raise DomainError("at least one faulty predicate is required")
    ranked = {e.predicate: e for e in ranking.entries}
    missing = sorted(faulty - ranked.keys())
    if missing:
        raise DomainError(f"faulty predicates not in ranking: {missing}")
    total = len(ranking) if n_statements is None else n_statements
    if total < 1:
        raise DomainError("n_statements must be positive")
    best = min(ranked[p].best_rank for p in faulty)
    worst = min(ranked[p].worst_rank for p in faulty)
    return ExamResult(100.0 * best / total, 100.0 * worst / total, best, worst)


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f_measure: float


def f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def prf(detected: Iterable[str], truth: Iterable[str]) -> PRF:
    """Precision/recall/F-measure of a detected CC set against ground truth.
    Empty denominators give 0."""
    detected, truth = set(detected), set(truth)
    hits = len(detected & truth)
    precision = hits / len(detected) if detected else 0.0
    recall = hits / len(truth) if truth else 0.0
    return PRF(precision, recall, f_measure(precision, recall))


@dataclass(frozen=True)
class SafetyPrecisionDelta:
    score_before: float
    score_after: float
    r_before: int
    r_after: int

    @property
    def safety_improved(self) -> bool:
        return self.score_after > self.score_before

    @property
    def precision_improved(self) -> bool:
        return self.r_after < self.r_before


def safety_precision(before: Ranking, after: Ranking, faulty: int) -> SafetyPrecisionDelta:
    try:
        b, a = before.entry(faulty), after.entry(faulty)
    except KeyError:
        raise DomainError(f"faulty predicate {faulty} is not ranked") from None
    # best_rank - 1 counts the strictly higher-scored elements
    return SafetyPrecisionDelta(b.score, a.score, b.best_rank - 1, a.best_rank - 1)


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # sum of ranks of positive (y - x) differences
    n: int  # pairs left after dropping zero differences
    p_value: float
    confidence: float
    p_exact: Fraction | None = None  # set when the exact null was used

    @property
    def method(self) -> str:
        return "exact" if self.p_exact is not None else "normal"


def _signed_rank_null(doubled_ranks: Sequence[int]) -> Counter:
    """Counts of each attainable doubled rank-sum over all sign assignments."""
    dist = Counter({0: 1})
    for r in doubled_ranks:
        step = Counter(dist)
        for total, ways in dist.items():
            step[total + r] += ways
        dist = step
    return dist


def wilcoxon_one_tailed(x: Sequence[float], y: Sequence[float]) -> WilcoxonResult:
    """One-tailed signed-rank test of "x needs fewer statements than y".

    Zero differences are dropped and tied magnitudes get midranks. Up to
    20 pairs the p-value comes from the exact permutation distribution;
    above that a normal approximation with tie and continuity correction.
    """
    if len(x) != len(y):
        raise ValueError("paired samples must have equal length")
    if len(x) == 0:
        raise ValueError("at least one pair is required")
    diffs = [b - a for a, b in zip(x, y) if b - a != 0]
    if not diffs:
        raise UndefinedTestError("all paired differences are zero")
    n = len(diffs)
    ranks = rankdata([abs(d) for d in diffs], method="average")
    w = float(sum(r for r, d in zip(ranks, diffs) if d > 0))

    if n <= EXACT_LIMIT:
        doubled = [int(round(2 * r)) for r in ranks]
        observed = int(round(2 * w))
        dist = _signed_rank_null(doubled)
        tail = sum(ways for total, ways in dist.items() if total >= observed)
        p_exact = Fraction(tail, 2**n)
        p = float(p_exact)
        return WilcoxonResult(w, n, p, 1.0 - p, p_exact)

    mean = n * (n + 1) / 4
    ties = Counter(ranks.tolist()).values()
    var = n * (n + 1) * (2 * n + 1) / 24 - sum(t**3 - t for t in ties) / 48
    z = (w - mean - 0.5) / math.sqrt(var)
    p = float(norm.sf(z))
    return WilcoxonResult(w, n, p, 1.0 - p)


def summarize(
    before: Ranking,
    after: Ranking,
    faulty: Iterable[int] | None = None,
    detected: Iterable[str] | None = None,
    truth: Iterable[str] | None = None,
    n_statements: int | None = None,
) -> dict[str, float | int | str]:
    """Flat metric table comparing rankings before and after CC handling.

    Safety and precision change are reported for the faulty predicate that
    ranks best before handling (single-fault reading of multi-fault suites).
    """
    out: dict[str, float | int | str] = {"formula": after.formula}
    if faulty:
        faulty = sorted(set(faulty))
        for tag, ranking in (("before", before), ("after", after)):
            res = exam(ranking, faulty, n_statements)
            out[f"exam_best_{tag}"] = res.exam_best
            out[f"exam_worst_{tag}"] = res.exam_worst
            out[f"examined_best_{tag}"] = res.statements_examined_best
            out[f"examined_worst_{tag}"] = res.statements_examined_worst
        target = min(faulty, key=lambda p: (before.entry(p).best_rank, p))
        delta = safety_precision(before, after, target)
        out["faulty_predicate"] = target
        out["score_before"] = delta.score_before
        out["score_after"] = delta.score_after
        out["r_before"] = delta.r_before
        out["r_after"] = delta.r_after
        out["safety_improved"] = int(delta.safety_improved)
        out["precision_improved"] = int(delta.precision_improved)
    if detected is not None:
        detected = set(detected)
        out["cc_detected"] = len(detected)
        if truth is not None:
            truth = set(truth)
            res = prf(detected, truth)
            out["cc_truth"] = len(truth)
            out["cc_precision"] = res.precision
            out["cc_recall"] = res.recall
            out["cc_f_measure"] = res.f_measure
    return out


def format_metrics(metrics: dict, style: str = "text") -> str:
    def fmt(value, digits):
        return f"{value:.{digits}g}" if isinstance(value, float) else str(value)

    if style == "csv":
        rows = ["metric,value"] + [f"{k},{fmt(v, 12)}" for k, v in metrics.items()]
    elif style == "text":
        width = max(map(len, metrics), default=0)
        rows = [f"{k:<{width}}  {fmt(v, 4)}" for k, v in metrics.items()]
    else:
        raise ValueError(f"unknown report style {style!r}")
    return "\n".join(rows) + "\n"

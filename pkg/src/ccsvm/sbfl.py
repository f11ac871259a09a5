"""Suspiciousness formulas and tie-aware rankings.

Ties are decided on exact rational keys: Tarantula is rational, Naish is an
integer, and Ochiai is compared through its square, which is rational and
order-preserving because Ochiai is never negative.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import ParseError, UndefinedFormulaError
from .traces import PredicateCounts, TestSuite, compute_spectrum

FORMULAS = ("tarantula", "ochiai", "naish")


def _tarantula_key(c: PredicateCounts, n_f: int, n_s: int) -> Fraction:
    if n_f < 1 or n_s < 1:
        raise UndefinedFormulaError(
            f"Tarantula needs at least one failing and one passing test (n_f={n_f}, n_s={n_s})"
        )
    if c.n_cf == 0 and c.n_cs == 0:
        return Fraction(0)
    fail_ratio = Fraction(c.n_cf, n_f)
    return fail_ratio / (Fraction(c.n_cs, n_s) + fail_ratio)


def _ochiai_key(c: PredicateCounts, n_f: int, n_s: int = 0) -> Fraction:
    """Square of the Ochiai score."""
    if n_f < 1:
        raise UndefinedFormulaError("Ochiai needs at least one failing test")
    if c.n_cf == 0:
        return Fraction(0)
    return Fraction(c.n_cf * c.n_cf, n_f * (c.n_cf + c.n_cs))


def _naish_key(c: PredicateCounts, n_f: int = 0, n_s: int = 0) -> int:
    return -1 if c.n_uf > 0 else c.n_us


def tarantula(counts: PredicateCounts, n_f: int, n_s: int) -> float:
    return float(_tarantula_key(counts, n_f, n_s))


def ochiai(counts: PredicateCounts, n_f: int) -> float:
    return math.sqrt(_ochiai_key(counts, n_f))


def naish(counts: PredicateCounts) -> int:
    return _naish_key(counts)


_KEYS: dict[str, Callable] = {
    "tarantula": _tarantula_key,
    "ochiai": _ochiai_key,
    "naish": _naish_key,
}


def _value(formula: str, key) -> float:
    if formula == "ochiai":
        return math.sqrt(key)
    return float(key) if formula == "tarantula" else key


@dataclass(frozen=True)
class RankEntry:
    predicate: int
    score: float
    best_rank: int
    worst_rank: int


@dataclass(frozen=True)
class Ranking:
    formula: str
    entries: tuple[RankEntry, ...]  # descending score, ties by predicate id

    def __len__(self):
        return len(self.entries)

    def entry(self, predicate: int) -> RankEntry:
        for e in self.entries:
            if e.predicate == predicate:
                return e
        raise KeyError(predicate)

    def score(self, predicate: int) -> float:
        return self.entry(predicate).score

    def scores(self) -> dict[int, float]:
        return {e.predicate: e.score for e in self.entries}

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["predicate", "score", "best_rank", "worst_rank"])
        for e in self.entries:
            score = e.score if isinstance(e.score, int) else f"{e.score:.15g}"
            writer.writerow([e.predicate, score, e.best_rank, e.worst_rank])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str, formula: str = "unknown") -> "Ranking":
        reader = csv.DictReader(io.StringIO(text))
        entries = []
        try:
            for row in reader:
                entries.append(
                    RankEntry(
                        predicate=int(row["predicate"]),
                        score=float(row["score"]),
                        best_rank=int(row["best_rank"]),
                        worst_rank=int(row["worst_rank"]),
                    )
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed ranking CSV: {exc}") from None
        return cls(formula, tuple(entries))


def rank_keys(formula: str, keys: dict[int, object]) -> Ranking:
    """Build a ranking from exact comparison keys, one per predicate."""
    order = sorted(keys, key=lambda p: (-keys[p], p))
    ascending = sorted(keys.values())
    n = len(ascending)
    entries = []
    for p in order:
        k = keys[p]
        best = n - bisect.bisect_right(ascending, k) + 1
        worst = n - bisect.bisect_left(ascending, k)
        entries.append(RankEntry(p, _value(formula, k), best, worst))
    return Ranking(formula, tuple(entries))


def rank(suite: TestSuite, formula: str) -> Ranking:
    if formula not in _KEYS:
        raise ValueError(f"unknown formula {formula!r}; choose from {', '.join(FORMULAS)}")
    spectrum = compute_spectrum(suite)
    key = _KEYS[formula]
    keys = {p: key(c, spectrum.n_f, spectrum.n_s) for p, c in enumerate(spectrum.counts)}
    return rank_keys(formula, keys)

"""Coincidental-correctness detection: train on every labeled trace, then
re-classify the passing ones. Passing traces that land on the failing side
of the hyperplane are reported as CC and flipped to Fail."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .sbfl import Ranking, rank
from .seqkernel import GramMatrix, build_gram
from .svm import SvmConfig, SvmModel, decision_values, train
from .traces import Outcome, TestSuite, flip_outcomes


class Verdict(str, enum.Enum):
    TRUE_PASS = "TruePass"
    CC = "CC"


@dataclass(frozen=True)
class CCEntry:
    test_id: str
    decision_value: float
    verdict: Verdict


@dataclass(frozen=True)
class CCReport:
    entries: tuple[CCEntry, ...]
    cc_ids: frozenset[str]
    flipped_suite: TestSuite
    model: SvmModel | None = None
    gram: GramMatrix | None = None

    @property
    def warnings(self) -> tuple[str, ...]:
        return self.model.warnings if self.model is not None else ()

    def to_text(self) -> str:
        lines = ["# test_id decision_value verdict"]
        lines += [f"# warning: {w}" for w in self.warnings]
        for e in self.entries:
            lines.append(f"{e.test_id} {e.decision_value:.6f} {e.verdict.value}")
        return "\n".join(lines) + "\n"


def parse_report(text: str) -> frozenset[str]:
    """CC test ids from a report written by :meth:`CCReport.to_text`."""
    ids = set()
    for line in text.splitlines():
        fields = line.split()
        if len(fields) == 3 and not line.startswith("#") and fields[2] == Verdict.CC.value:
            ids.add(fields[0])
    return frozenset(ids)


def detect_cc(suite: TestSuite, config: SvmConfig = SvmConfig()) -> CCReport:
    passing = [i for i, t in enumerate(suite.traces) if t.outcome is Outcome.PASS]
    if not passing:
        return CCReport((), frozenset(), suite)

    gram = build_gram(suite)
    model = train(gram, config)
    values = decision_values(model, gram.values[passing])

    entries = []
    for idx, value in zip(passing, values):
        verdict = Verdict.TRUE_PASS if value > 0 else Verdict.CC
        entries.append(CCEntry(suite.traces[idx].test_id, float(value), verdict))
    cc_ids = frozenset(e.test_id for e in entries if e.verdict is Verdict.CC)
    return CCReport(tuple(entries), cc_ids, flip_outcomes(suite, cc_ids), model, gram)


def localize_after_cc(
    suite: TestSuite, config: SvmConfig = SvmConfig(), formula: str = "ochiai"
) -> Ranking:
    return rank(detect_cc(suite, config).flipped_suite, formula)

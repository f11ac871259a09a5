"""Execution traces, test suites and coverage spectra.

Trace file format (UTF-8, line oriented)::

    predicates 5
    t1 F 0 1 4
    t7 P 1 3
    #cc t7
    #faulty 1

Records are ``<test_id> <P|F> <pid> <pid> ...`` in execution order. Lines
starting with ``#`` are comments, except the ``#cc`` and ``#faulty``
ground-truth sections.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, replace
from typing import Iterable, TextIO

from .errors import (
    DomainError,
    DuplicateError,
    InvalidFlipError,
    InvalidTraceError,
    NotFoundError,
    ParseError,
)


class Outcome(enum.IntEnum):
    PASS = 1
    FAIL = -1

    @property
    def code(self) -> str:
        return "P" if self is Outcome.PASS else "F"

    @classmethod
    def from_code(cls, code: str) -> "Outcome":
        if code == "P":
            return cls.PASS
        if code == "F":
            return cls.FAIL
        raise ValueError(f"outcome must be P or F, got {code!r}")


@dataclass(frozen=True)
class ExecutionTrace:
    test_id: str
    sequence: tuple[int, ...]
    outcome: Outcome

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(self.sequence))
        object.__setattr__(self, "outcome", Outcome(self.outcome))
        if not self.sequence:
            raise InvalidTraceError(f"trace {self.test_id!r} has an empty sequence")
        if any(p < 0 for p in self.sequence):
            raise DomainError(f"trace {self.test_id!r} has a negative predicate id")
        if not self.test_id or any(c.isspace() for c in self.test_id):
            raise InvalidTraceError(f"invalid test id {self.test_id!r}")

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(self.sequence)


@dataclass(frozen=True)
class TestSuite:
    predicate_count: int
    traces: tuple[ExecutionTrace, ...]
    ground_truth_cc: frozenset[str] | None = None
    faulty_predicates: frozenset[int] | None = None

    __test__ = False  # not a pytest class

    def __post_init__(self):
        object.__setattr__(self, "traces", tuple(self.traces))
        if self.ground_truth_cc is not None:
            object.__setattr__(self, "ground_truth_cc", frozenset(self.ground_truth_cc))
        if self.faulty_predicates is not None:
            object.__setattr__(self, "faulty_predicates", frozenset(self.faulty_predicates))
        n = self.predicate_count
        if n < 1:
            raise DomainError(f"predicate count must be positive, got {n}")
        seen = set()
        for trace in self.traces:
            if trace.test_id in seen:
                raise DuplicateError(f"duplicate test id {trace.test_id!r}")
            seen.add(trace.test_id)
            bad = [p for p in trace.sequence if p >= n]
            if bad:
                raise DomainError(
                    f"trace {trace.test_id!r}: predicate id {bad[0]} >= predicate count {n}"
                )
        if self.ground_truth_cc:
            unknown = sorted(self.ground_truth_cc - seen)
            if unknown:
                raise DomainError(f"#cc names unknown test ids {unknown}")
        if self.faulty_predicates:
            bad = sorted(p for p in self.faulty_predicates if not 0 <= p < n)
            if bad:
                raise DomainError(f"#faulty predicate ids out of range: {bad}")

    def __len__(self):
        return len(self.traces)

    @property
    def test_ids(self) -> list[str]:
        return [t.test_id for t in self.traces]

    @property
    def passing(self) -> list[ExecutionTrace]:
        return [t for t in self.traces if t.outcome is Outcome.PASS]

    @property
    def failing(self) -> list[ExecutionTrace]:
        return [t for t in self.traces if t.outcome is Outcome.FAIL]

    @property
    def n_fail(self) -> int:
        return sum(1 for t in self.traces if t.outcome is Outcome.FAIL)

    @property
    def n_pass(self) -> int:
        return len(self.traces) - self.n_fail

    def get(self, test_id: str) -> ExecutionTrace:
        for trace in self.traces:
            if trace.test_id == test_id:
                return trace
        raise NotFoundError(f"no test with id {test_id!r}")


@dataclass(frozen=True)
class PredicateCounts:
    n_cf: int
    n_uf: int
    n_cs: int
    n_us: int

    @property
    def n_f(self) -> int:
        return self.n_cf + self.n_uf

    @property
    def n_s(self) -> int:
        return self.n_cs + self.n_us


@dataclass(frozen=True)
class SpectrumCounts:
    counts: tuple[PredicateCounts, ...]
    n_f: int
    n_s: int

    def __getitem__(self, predicate: int) -> PredicateCounts:
        return self.counts[predicate]

    def __len__(self):
        return len(self.counts)


def compute_spectrum(suite: TestSuite) -> SpectrumCounts:
    """Per-predicate coverage counters. A predicate counts as executed by a
    trace when it occurs in the sequence at least once."""
    if not suite.traces:
        raise DomainError("cannot compute a spectrum over an empty suite")
    n = suite.predicate_count
    cf = [0] * n
    cs = [0] * n
    n_f = n_s = 0
    for trace in suite.traces:
        if trace.outcome is Outcome.FAIL:
            n_f += 1
            bucket = cf
        else:
            n_s += 1
            bucket = cs
        for p in trace.covered:
            bucket[p] += 1
    counts = tuple(
        PredicateCounts(n_cf=cf[p], n_uf=n_f - cf[p], n_cs=cs[p], n_us=n_s - cs[p])
        for p in range(n)
    )
    return SpectrumCounts(counts=counts, n_f=n_f, n_s=n_s)


def flip_outcomes(suite: TestSuite, cc_ids: Iterable[str]) -> TestSuite:
    """Return a copy of ``suite`` with the named passing tests relabeled Fail."""
    cc_ids = set(cc_ids)
    by_id = {t.test_id: t for t in suite.traces}
    for test_id in sorted(cc_ids):
        if test_id not in by_id:
            raise NotFoundError(f"cannot flip unknown test {test_id!r}")
        if by_id[test_id].outcome is Outcome.FAIL:
            raise InvalidFlipError(f"test {test_id!r} already fails")
    if not cc_ids:
        return suite
    traces = tuple(
        replace(t, outcome=Outcome.FAIL) if t.test_id in cc_ids else t for t in suite.traces
    )
    return replace(suite, traces=traces)


# -- trace format ------------------------------------------------------------


def parse_suite(source: str | bytes | TextIO) -> TestSuite:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)

    predicate_count = None
    traces: list[ExecutionTrace] = []
    cc: set[str] | None = None
    faulty: set[int] | None = None

    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = line.split()
            if fields[0] == "#cc":
                cc = (cc or set()) | set(fields[1:])
            elif fields[0] == "#faulty":
                faulty = faulty or set()
                for tok in fields[1:]:
                    faulty.add(_parse_int(tok, lineno))
            continue
        fields = line.split()
        if predicate_count is None:
            if len(fields) != 2 or fields[0] != "predicates":
                raise ParseError("expected header 'predicates <N>'", lineno)
            predicate_count = _parse_int(fields[1], lineno)
            if predicate_count < 1:
                raise ParseError("predicate count must be positive", lineno)
            continue
        if len(fields) < 3:
            raise ParseError("record needs '<test_id> <P|F> <pid>...'", lineno)
        test_id, code, *ids = fields
        try:
            outcome = Outcome.from_code(code)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        sequence = tuple(_parse_int(tok, lineno) for tok in ids)
        for p in sequence:
            if p >= predicate_count:
                raise DomainError(
                    f"line {lineno}: predicate id {p} >= predicate count {predicate_count}"
                )
        traces.append(ExecutionTrace(test_id, sequence, outcome))

    if predicate_count is None:
        raise ParseError("no header found; input is empty")
    if not traces:
        raise ParseError("suite contains no traces")
    return TestSuite(
        predicate_count=predicate_count,
        traces=tuple(traces),
        ground_truth_cc=frozenset(cc) if cc is not None else None,
        faulty_predicates=frozenset(faulty) if faulty is not None else None,
    )


def _parse_int(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected a non-negative integer, got {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"expected a non-negative integer, got {token!r}", lineno)
    return value


def serialize_suite(suite: TestSuite, comments: Iterable[str] = ()) -> str:
    lines = [f"predicates {suite.predicate_count}"]
    lines.extend(f"# {c}" for c in comments)
    for t in suite.traces:
        lines.append(" ".join([t.test_id, t.outcome.code, *map(str, t.sequence)]))
    if suite.ground_truth_cc is not None:
        order = [i for i in suite.test_ids if i in suite.ground_truth_cc]
        lines.append(" ".join(["#cc", *order]))
    if suite.faulty_predicates is not None:
        lines.append(" ".join(["#faulty", *map(str, sorted(suite.faulty_predicates))]))
    return "\n".join(lines) + "\n"

"""Maximal non-overlapping sequence-matching similarity and Gram matrices.

Two predicate sequences are compared through the diagonals of their match
matrix ``M[i, j] = (s[i] == t[j])``. Every maximal run of ones along a
diagonal is a candidate common sub-path. Runs are then selected greedily,
longest first, and every remaining run that shares a row or a column with a
selected run is cut down to the part that does not. The similarity is::

    sum(len(run) for run in selected) / (k * max(len(s), len(t)))

with ``k`` the number of selected runs, and 0 when nothing matches.
"""

from __future__ import annotations

import hashlib
import heapq
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidTraceError
from .traces import TestSuite


class DiagonalRun(NamedTuple):
    i: int  # start row, index into s
    j: int  # start column, index into t
    length: int

    @property
    def rows(self) -> range:
        return range(self.i, self.i + self.length)

    @property
    def cols(self) -> range:
        return range(self.j, self.j + self.length)

    def transposed(self) -> "DiagonalRun":
        return DiagonalRun(self.j, self.i, self.length)


@dataclass(frozen=True)
class MatchSelection:
    runs: tuple[DiagonalRun, ...]

    @property
    def k(self) -> int:
        return len(self.runs)

    @property
    def matched(self) -> int:
        return sum(r.length for r in self.runs)


def _check(s: Sequence, t: Sequence) -> None:
    if len(s) == 0 or len(t) == 0:
        raise InvalidTraceError("sequence matching needs two non-empty sequences")


def find_runs(s: Sequence, t: Sequence) -> list[DiagonalRun]:
    """All maximal diagonal runs of equal elements, ordered by (i - j, i).

    Runs are enumerated from the match positions directly, so the cost is
    proportional to the number of matching cells rather than ``|s| * |t|``.
    """
    _check(s, t)
    positions = defaultdict(list)
    for j, sym in enumerate(t):
        positions[sym].append(j)
    n, m = len(s), len(t)
    runs = []
    for i, sym in enumerate(s):
        for j in positions.get(sym, ()):
            # only start where the diagonal cannot be extended backwards
            if i > 0 and j > 0 and s[i - 1] == t[j - 1]:
                continue
            length = 1
            while i + length < n and j + length < m and s[i + length] == t[j + length]:
                length += 1
            runs.append(DiagonalRun(i, j, length))
    runs.sort(key=lambda r: (r.i - r.j, r.i))
    return runs


def select_nonoverlapping(runs) -> MatchSelection:
    """Greedy selection: longest run first, ties broken by smallest (i - j)
    and then smallest i. A run sharing rows or columns with an earlier pick
    is split into the pieces that remain free, and those pieces compete
    again.

    Trimming is lazy. A piece never ranks above the run it came from, so a
    popped run that is still free is the best of the fully trimmed set.
    """
    heap = [(-r.length, r.i - r.j, r.i, r.j) for r in runs]
    heapq.heapify(heap)
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    chosen = []
    while heap:
        neg_len, _, i, j = heapq.heappop(heap)
        length = -neg_len
        if all(i + q not in used_rows and j + q not in used_cols for q in range(length)):
            chosen.append(DiagonalRun(i, j, length))
            used_rows.update(range(i, i + length))
            used_cols.update(range(j, j + length))
            continue
        # re-queue each maximal stretch of free positions
        start = None
        for q in range(length + 1):
            ok = q < length and (i + q not in used_rows and j + q not in used_cols)
            if ok and start is None:
                start = q
            elif not ok and start is not None:
                heapq.heappush(heap, (start - q, i - j, i + start, j + start))
                start = None
    return MatchSelection(tuple(chosen))


def _ratio(selection: MatchSelection, longest: int) -> float:
    if selection.k == 0:
        return 0.0
    return selection.matched / (selection.k * longest)


def raw_similarity(s: Sequence, t: Sequence) -> float:
    """Greedy similarity in the (s, t) orientation, without symmetrization."""
    _check(s, t)
    return _ratio(select_nonoverlapping(find_runs(s, t)), max(len(s), len(t)))


def similarity(s: Sequence, t: Sequence) -> float:
    """Symmetrized similarity in [0, 1]; 1 for identical sequences."""
    _check(s, t)
    runs = find_runs(s, t)
    longest = max(len(s), len(t))
    forward = _ratio(select_nonoverlapping(runs), longest)
    backward = _ratio(select_nonoverlapping([r.transposed() for r in runs]), longest)
    if forward == backward:
        return forward
    return (forward + backward) / 2


@dataclass(frozen=True, eq=False)
class GramMatrix:
    values: np.ndarray
    labels: np.ndarray
    trace_ids: tuple[str, ...]
    kernel: str = "precomputed"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        labels = np.asarray(self.labels, dtype=int)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {values.shape}")
        if labels.shape != (values.shape[0],):
            raise ValueError("one label per Gram row is required")
        if not np.isin(labels, (-1, 1)).all():
            raise ValueError("labels must be +1 (pass) or -1 (fail)")
        if len(self.trace_ids) != values.shape[0]:
            raise ValueError("one trace id per Gram row is required")
        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "trace_ids", tuple(self.trace_ids))

    def __len__(self):
        return len(self.trace_ids)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.values).tobytes())
        h.update(np.ascontiguousarray(self.labels).tobytes())
        return h.hexdigest()[:16]

    def to_csv(self) -> str:
        lines = [",".join(["test_id", *self.trace_ids])]
        for tid, row in zip(self.trace_ids, self.values):
            lines.append(",".join([tid, *(f"{v:.15g}" for v in row)]))
        return "\n".join(lines) + "\n"


KERNEL_NAME = "seqmatch"


def build_gram(suite: TestSuite) -> GramMatrix:
    traces = suite.traces
    m = len(traces)
    if m < 2:
        raise ValueError("a Gram matrix needs at least two traces")
    values = np.eye(m)
    seqs = [t.sequence for t in traces]
    for a in range(m):
        for b in range(a + 1, m):
            values[a, b] = values[b, a] = similarity(seqs[a], seqs[b])
    labels = np.array([int(t.outcome) for t in traces])
    ids = tuple(t.test_id for t in traces)
    gram = GramMatrix(values, labels, ids)
    return GramMatrix(values, labels, ids, kernel=f"{KERNEL_NAME}/{gram.digest()}")

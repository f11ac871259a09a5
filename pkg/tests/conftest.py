from pathlib import Path

import numpy as np
import pytest

from ccsvm.seqkernel import DiagonalRun
from ccsvm.traces import parse_suite

DATA = Path(__file__).parent / "data"

# toy-suite predicates P1..P5 are ids 0..4
P1, P2, P3, P4, P5 = range(5)


@pytest.fixture
def toy_text():
    return (DATA / "toy.trace").read_text()


@pytest.fixture
def toy(toy_text):
    return parse_suite(toy_text)


def brute_force_runs(s, t):
    """Scan every diagonal of the explicit match matrix for maximal runs of 1s."""
    M = np.array([[int(a == b) for b in t] for a in s], dtype=int)
    n, m = M.shape
    runs = set()
    for offset in range(-(m - 1), n):  # offset = i - j
        cells = [(i, i - offset) for i in range(n) if 0 <= i - offset < m]
        length = 0
        for idx, (i, j) in enumerate(cells):
            if M[i, j]:
                length += 1
            if length and (not M[i, j] or idx == len(cells) - 1):
                end = idx if not M[i, j] else idx + 1
                si, sj = cells[end - length]
                runs.add(DiagonalRun(si, sj, length))
                length = 0
    return runs


def eager_selection(runs):
    """Reference greedy: after each pick, cut every remaining run against it
    by interval subtraction and keep all surviving pieces."""
    remaining = list(runs)
    chosen = []
    while remaining:
        best = min(remaining, key=lambda r: (-r.length, r.i - r.j, r.i))
        chosen.append(best)
        survivors = []
        for r in remaining:
            if r == best:
                continue
            keep = [
                q
                for q in range(r.length)
                if not (best.i <= r.i + q < best.i + best.length)
                and not (best.j <= r.j + q < best.j + best.length)
            ]
            # group consecutive offsets into pieces
            start = prev = None
            for q in keep + [None]:
                if q is not None and prev is not None and q == prev + 1:
                    prev = q
                    continue
                if start is not None:
                    survivors.append(DiagonalRun(r.i + start, r.j + start, prev - start + 1))
                start = prev = q
        remaining = survivors
    return chosen

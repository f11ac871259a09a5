"""Seeded synthetic suites with one planted faulty predicate and known CC tests.

Model: a handful of passing "paths" (random predicate sequences that avoid
the fault) and failing paths. A failing path is a passing path with one
stretch spliced out for a region that reaches the faulty predicate. Each
test follows one path, and every predicate except the faulty one is
independently replaced with probability ``noise``. Failing tests and CC tests
share the failing paths. CC tests are labeled Pass, and true passes follow
passing paths only.

Randomness comes only from uniform doubles of numpy's PCG64 bit generator
(``(next_uint64 >> 11) * 2**-53``). Integers are derived as
``floor(u * n)``, so another implementation seeded the same way can
reproduce a suite draw for draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .traces import ExecutionTrace, Outcome, TestSuite

RNG_NAME = "pcg64"


@dataclass(frozen=True)
class SynthConfig:
    n_predicates: int = 50
    n_tests: int = 200
    fail_rate: float = 0.15
    cc_rate: float = 0.2
    trace_len_range: tuple[int, int] = (10, 30)
    noise: float = 0.05
    seed: int = 42
    pass_paths: int = 6
    fail_paths: int = 3

    def __post_init__(self):
        lo, hi = self.trace_len_range
        checks = [
            (self.n_predicates >= 3, "n_predicates must be at least 3"),
            (self.n_tests >= 10, "n_tests must be at least 10"),
            (0 < self.fail_rate < 1, "fail_rate must lie in (0, 1)"),
            (0 <= self.cc_rate < 1, "cc_rate must lie in [0, 1)"),
            (0 <= self.noise < 0.5, "noise must lie in [0, 0.5)"),
            (2 <= lo <= hi, "trace_len_range needs 2 <= min <= max"),
            (self.pass_paths >= 1 and self.fail_paths >= 1, "need at least one path per kind"),
            (0 <= self.seed < 2**64, "seed must be a 64-bit unsigned integer"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)
        if self.n_fail < 1:
            raise ConfigError("n_tests * fail_rate must give at least one failing test")
        if self.cc_rate > 0 and self.n_tests - self.n_fail < 1:
            raise ConfigError("cc_rate > 0 but the suite has no passing tests")

    @property
    def n_fail(self) -> int:
        return int(round(self.n_tests * self.fail_rate))

    @property
    def n_cc(self) -> int:
        return int(round((self.n_tests - self.n_fail) * self.cc_rate))

    def describe(self) -> list[str]:
        lo, hi = self.trace_len_range
        return [
            f"synthetic suite rng={RNG_NAME} seed={self.seed}",
            f"n_predicates={self.n_predicates} n_tests={self.n_tests} "
            f"fail_rate={self.fail_rate} cc_rate={self.cc_rate} noise={self.noise} "
            f"trace_len={lo}..{hi} pass_paths={self.pass_paths} fail_paths={self.fail_paths}",
        ]


class _Draws:
    def __init__(self, seed: int):
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def uniform(self) -> float:
        return float(self._gen.random())

    def below(self, n: int) -> int:
        return min(int(self.uniform() * n), n - 1)

    def pick(self, items):
        return items[self.below(len(items))]


def generate(config: SynthConfig = SynthConfig()) -> TestSuite:
    rng = _Draws(config.seed)
    lo, hi = config.trace_len_range
    faulty = rng.below(config.n_predicates)
    others = [p for p in range(config.n_predicates) if p != faulty]

    def path(length):
        return [rng.pick(others) for _ in range(length)]

    pass_paths = [path(lo + rng.below(hi - lo + 1)) for _ in range(config.pass_paths)]
    fail_paths = []
    for _ in range(config.fail_paths):
        base = list(rng.pick(pass_paths))
        width = max(1, len(base) // 3)
        start = rng.below(len(base) - width + 1)
        region = path(width)
        region[rng.below(width)] = faulty
        fail_paths.append(base[:start] + region + base[start + width :])

    def realize(template):
        # substitute every non-faulty position with probability `noise`
        out = []
        for p in template:
            if p != faulty and rng.uniform() < config.noise:
                p = rng.pick(others)
            out.append(p)
        return tuple(out)

    n_fail, n_cc = config.n_fail, config.n_cc
    n_true = config.n_tests - n_fail - n_cc
    kinds = ["fail"] * n_fail + ["cc"] * n_cc + ["pass"] * n_true
    for i in range(len(kinds) - 1, 0, -1):  # Fisher-Yates
        j = rng.below(i + 1)
        kinds[i], kinds[j] = kinds[j], kinds[i]

    width = len(str(config.n_tests))
    traces = []
    cc_ids = set()
    for idx, kind in enumerate(kinds, start=1):
        test_id = f"t{idx:0{width}d}"
        if kind == "pass":
            seq, outcome = realize(rng.pick(pass_paths)), Outcome.PASS
        else:
            seq = realize(rng.pick(fail_paths))
            outcome = Outcome.FAIL if kind == "fail" else Outcome.PASS
            if kind == "cc":
                cc_ids.add(test_id)
        traces.append(ExecutionTrace(test_id, seq, outcome))

    return TestSuite(
        predicate_count=config.n_predicates,
        traces=tuple(traces),
        ground_truth_cc=frozenset(cc_ids),
        faulty_predicates=frozenset({faulty}),
    )

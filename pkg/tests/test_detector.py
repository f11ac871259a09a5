import pytest

from ccsvm.detector import Verdict, detect_cc, localize_after_cc, parse_report
from ccsvm.errors import TrainingError
from ccsvm.sbfl import rank
from ccsvm.svm import SvmConfig
from ccsvm.synth import SynthConfig, generate
from ccsvm.traces import flip_outcomes, parse_suite

from conftest import P2

IDENTICAL = """\
predicates 16
f1 F 0 1 2 3
f2 F 1 2 3 4
f3 F 2 3 4 0
c1 P 0 1 2 3
c2 P 1 2 3 4
c3 P 2 3 4 0
p1 P 10 11 12
p2 P 11 12 13
p3 P 12 13 14
p4 P 13 14 15
p5 P 14 15 10
p6 P 15 10 11
#cc c1 c2 c3
"""


def test_identical_traces_are_cc():
    suite = parse_suite(IDENTICAL)
    for c in (0.1, 1.0):
        report = detect_cc(suite, SvmConfig(c=c))
        assert report.cc_ids == {"c1", "c2", "c3"}
        for e in report.entries:
            assert (e.verdict is Verdict.CC) == (e.decision_value <= 0)


def test_no_passing_traces():
    suite = parse_suite("predicates 2\na F 0\nb F 1\n")
    report = detect_cc(suite)
    assert report.entries == () and report.cc_ids == frozenset()
    assert report.flipped_suite is suite


def test_no_failing_traces():
    with pytest.raises(TrainingError):
        detect_cc(parse_suite("predicates 2\na P 0\nb P 1\n"))


def test_table1_soft_target(toy):
    # recovering all of {t7, t8, t10} on six-trace evidence is not guaranteed
    report = detect_cc(toy)
    found = report.cc_ids & toy.ground_truth_cc
    print(f"toy detected={sorted(report.cc_ids)} true positives={sorted(found)}")
    assert report.cc_ids <= {t.test_id for t in toy.passing}


def test_report_invariants(toy):
    report = detect_cc(toy)
    assert [e.test_id for e in report.entries] == [t.test_id for t in toy.passing]
    assert report.flipped_suite == flip_outcomes(toy, report.cc_ids)
    for before, after in zip(toy.traces, report.flipped_suite.traces):
        if not before.passed:
            assert after == before
    assert parse_report(report.to_text()) == report.cc_ids


def test_deterministic():
    suite = generate(SynthConfig(seed=4))
    a, b = detect_cc(suite), detect_cc(suite)
    assert a.to_text() == b.to_text()
    assert a.model.to_text() == b.model.to_text()


@pytest.mark.parametrize("formula", ["tarantula", "ochiai", "naish"])
def test_composition_law(toy, formula):
    expected = rank(flip_outcomes(toy, detect_cc(toy).cc_ids), formula)
    assert localize_after_cc(toy, formula=formula) == expected


def test_forced_flip_toy(toy):
    r = rank(flip_outcomes(toy, {"t7", "t8", "t10"}), "tarantula")
    assert r.entry(P2).score == 1.0 and r.entry(P2).best_rank == 1


def test_empty_flip_is_plain_ranking(toy):
    assert rank(flip_outcomes(toy, set()), "ochiai") == rank(toy, "ochiai")


def test_synthetic_rank_does_not_worsen():
    suite = generate(SynthConfig(seed=42))
    (f,) = suite.faulty_predicates
    before = rank(suite, "ochiai").entry(f).best_rank
    after = localize_after_cc(suite).entry(f).best_rank
    assert after <= before

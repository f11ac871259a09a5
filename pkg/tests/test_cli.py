import pytest

from ccsvm.cli import main
from ccsvm.sbfl import Ranking
from ccsvm.traces import parse_suite

from conftest import DATA, P2

TOY = str(DATA / "toy.trace")


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gram(capsys):
    code, out, _ = run(["gram", "--in", TOY], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("test_id,t1,t2")
    assert len(lines) == 13


def test_rank_to_file(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["rank", "--in", TOY, "--formula", "tarantula", "--out", str(out)]) == 0
    r = Ranking.from_csv(out.read_text(), "tarantula")
    assert r.entry(P2).best_rank == 2 and r.entry(P2).worst_rank == 3


def test_unknown_formula(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rank", "--in", TOY, "--formula", "dstar"])
    assert exc.value.code == 2


def test_missing_file(tmp_path, capsys):
    code, _, err = run(["rank", "--in", str(tmp_path / "nope.trace")], capsys)
    assert code == 14 and "error" in err


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.trace"
    bad.write_text("predicates 3\nt1 X 0\n")
    code, _, err = run(["rank", "--in", str(bad)], capsys)
    assert code == 3 and "line 2" in err


def test_domain_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.trace"
    bad.write_text("predicates 3\nt1 F 7\n")
    assert run(["rank", "--in", str(bad)], capsys)[0] == 4


def test_duplicate_exit_code(tmp_path, capsys):
    bad = tmp_path / "dup.trace"
    bad.write_text("predicates 3\nt1 F 0\nt1 P 1\n")
    assert run(["rank", "--in", str(bad)], capsys)[0] == 5


def test_training_error_exit_code(tmp_path, capsys):
    path = tmp_path / "pass.trace"
    path.write_text("predicates 3\nt1 P 0\nt2 P 1\n")
    assert run(["detect-cc", "--in", str(path)], capsys)[0] == 9


def test_detect_cc(tmp_path, capsys):
    flipped = tmp_path / "flipped.trace"
    model = tmp_path / "model.txt"
    code, out, _ = run(
        ["detect-cc", "--in", TOY, "--flipped", str(flipped), "--model", str(model)],
        capsys,
    )
    assert code == 0
    assert out.startswith("# test_id decision_value verdict\n")
    assert len([l for l in out.splitlines() if not l.startswith("#")]) == 6
    assert parse_suite(flipped.read_text()).n_fail >= 6
    assert model.read_text().startswith("svm-model 1\n")


def test_eval(tmp_path, capsys):
    before, after, report = (tmp_path / n for n in ("b.csv", "a.csv", "cc.txt"))
    main(["rank", "--in", TOY, "--formula", "tarantula", "--out", str(before)])
    main(["detect-cc", "--in", TOY, "--flipped", str(tmp_path / "f.trace"), "--out", str(report)])
    main(["rank", "--in", str(tmp_path / "f.trace"), "--formula", "tarantula", "--out", str(after)])
    capsys.readouterr()
    code, out, _ = run(
        ["eval", "--in", TOY, "--formula", "tarantula", "--before", str(before),
         "--after", str(after), "--detected", str(report), "--report", "csv"],
        capsys,
    )
    assert code == 0
    rows = dict(line.split(",") for line in out.splitlines()[1:])
    assert rows["faulty_predicate"] == "1"
    assert rows["cc_truth"] == "3"


def test_synth_stdout_deterministic(capsys):
    argv = ["synth", "--n-tests", "40", "--seed", "7"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    suite = parse_suite(a)
    assert len(suite) == 40 and suite.ground_truth_cc is not None


def test_synth_bad_config(capsys):
    assert run(["synth", "--noise", "0.9"], capsys)[0] == 13


def test_pipeline_oracle_toy(tmp_path, capsys):
    out = tmp_path / "run"
    code, stdout, _ = run(
        ["pipeline", "--in", TOY, "--out", str(out), "--formula", "tarantula",
         "--oracle-cc", "--report", "csv"],
        capsys,
    )
    assert code == 0
    after = Ranking.from_csv((out / "ranking_after.csv").read_text(), "tarantula")
    assert after.entry(P2).score == 1.0 and after.entry(P2).best_rank == 1
    assert "flip_source,oracle" in stdout
    assert "score_after,1\n" in stdout


def test_pipeline_oracle_needs_truth(tmp_path, capsys):
    path = tmp_path / "plain.trace"
    path.write_text("predicates 2\na F 0\nb P 1\n")
    code, _, _ = run(["pipeline", "--in", str(path), "--out", str(tmp_path / "o"), "--oracle-cc"], capsys)
    assert code == 13


ARTIFACTS = [
    "cc_report.txt", "gram.csv", "model.txt", "flipped.trace",
    "ranking_before.csv", "ranking_after.csv", "metrics.txt", "metrics.csv",
]


def test_synth_pipeline_byte_identical(tmp_path, capsys):
    trace = tmp_path / "s.trace"
    assert main(["synth", "--n-tests", "60", "--seed", "3", "--out", str(trace)]) == 0
    original = trace.read_bytes()
    for name in ("a", "b"):
        assert main(["pipeline", "--in", str(trace), "--out", str(tmp_path / name)]) == 0
    capsys.readouterr()
    for artifact in ARTIFACTS:
        assert (tmp_path / "a" / artifact).read_bytes() == (tmp_path / "b" / artifact).read_bytes()
    assert trace.read_bytes() == original


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "ccsvm" in capsys.readouterr().out

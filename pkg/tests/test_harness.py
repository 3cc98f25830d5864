import pytest

from splcover.cli import main
from splcover.data import benchmark_names, benchmark_pair
from splcover.errors import ModelFormatError, SplcoverError
from splcover.harness import (
    AggregateRow,
    AlgoOptions,
    RunRecord,
    aggregate,
    emit_aggregate_csv,
    emit_runs_csv,
    emit_suites,
    load_inputs,
    run_experiment,
)
from splcover.pairs import WEIGHT_TOL, coverage, is_covering_array


def _record(run, algorithm, count100, counts=None):
    counts = counts or {50: 1, 100: count100}
    return RunRecord(run, algorithm, run, count100, 12, counts, [])


def test_aggregate_mean_and_std_zero():
    rows = aggregate([_record(i, "cmsa", 6) for i in range(3)])
    row = next(r for r in rows if r.level == 100)
    assert row == AggregateRow("cmsa", 100, 6.0, 0.0)


def test_aggregate_population_std():
    rows = aggregate([_record(0, "cmsa", 6), _record(1, "cmsa", 8)])
    row = next(r for r in rows if r.level == 100)
    assert row.mean == pytest.approx(7.0)
    assert row.std == pytest.approx(1.0)


def test_benchmark_fixtures_present():
    names = benchmark_names()
    assert names[0] == "gpl"
    assert len(names) == 11
    for name in names:
        fm_path, pp_path = benchmark_pair(name)
        assert fm_path.exists() and pp_path.exists()


def test_run_experiment_greedy_is_replication_invariant():
    fm_path, pp_path = benchmark_pair("synth01")
    one = run_experiment(fm_path, pp_path, "greedy", 1, 0)
    three = run_experiment(fm_path, pp_path, "greedy", 3, 0)
    assert three[0].suite == one[0].suite
    assert [r.suite for r in three] == [three[0].suite] * 3
    for rec in three:
        levels = sorted(rec.counts)
        assert all(
            rec.counts[lo] <= rec.counts[hi] for lo, hi in zip(levels, levels[1:])
        )


def test_run_experiment_seed_isolation():
    fm_path, pp_path = benchmark_pair("synth02")
    opts = AlgoOptions(pool_size=10)
    solo = run_experiment(fm_path, pp_path, "sampled", 1, 5, opts)
    pair = run_experiment(fm_path, pp_path, "sampled", 2, 4, opts)
    assert pair[1].suite == solo[0].suite
    assert pair[1].counts == solo[0].counts


def test_run_invariants_on_sampled_run():
    fm_path, pp_path = benchmark_pair("synth03")
    fm, cs = load_inputs(fm_path, pp_path)
    records = run_experiment(fm_path, pp_path, "sampled", 2, 1, AlgoOptions(pool_size=15))
    for rec in records:
        assert is_covering_array(rec.suite, cs)
        prev = -1.0
        for k in range(1, len(rec.suite) + 1):
            cov = coverage(rec.suite[:k], cs)
            assert cov >= prev - WEIGHT_TOL
            prev = cov


def test_apache_shaped_gap():
    # bundled fixture where the exact greedy needs 7 products and CMSA finds 6
    fm_path, pp_path = benchmark_pair("synth00")
    greedy = run_experiment(fm_path, pp_path, "greedy", 1, 0)
    cmsa = run_experiment(fm_path, pp_path, "cmsa", 1, 0, AlgoOptions(iterations=6))
    assert greedy[0].counts[100] == 7
    assert cmsa[0].counts[100] == 6


def test_load_inputs_reports_file(tmp_path):
    bad = tmp_path / "bad.fm"
    bad.write_text("root A\nroot B\n")
    pp = tmp_path / "x.pp"
    pp.write_text("weight,features\n")
    with pytest.raises(ModelFormatError) as exc:
        load_inputs(bad, pp)
    assert "bad.fm" in str(exc.value)


def test_load_inputs_requires_positive_weight(tmp_path):
    fm = tmp_path / "m.fm"
    fm.write_text("root A\noptional A B\n")
    pp = tmp_path / "m.pp"
    pp.write_text("weight,features\n0,A\n")
    with pytest.raises(SplcoverError) as exc:
        load_inputs(fm, pp)
    assert "weight-positive" in str(exc.value)


def test_emit_runs_csv_roundtrip(tmp_path):
    levels = (50, 100)
    records = [
        _record(1, "greedy", 7, {50: 2, 100: 7}),
        _record(0, "cmsa", 6, {50: 1, 100: 6}),
    ]
    out = tmp_path / "runs.csv"
    emit_runs_csv(records, out, levels)
    lines = out.read_text().splitlines()
    assert lines[0] == "run,algorithm,seed,suite_size,time_ms,p50,p100"
    assert lines[1] == "0,cmsa,0,6,12,1,6"
    assert lines[2] == "1,greedy,1,7,12,2,7"
    # atomic overwrite
    emit_runs_csv(records[:1], out, levels)
    assert len(out.read_text().splitlines()) == 2


def test_emit_runs_csv_empty(tmp_path):
    out = tmp_path / "runs.csv"
    emit_runs_csv([], out, (50, 100))
    assert out.read_text() == "run,algorithm,seed,suite_size,time_ms,p50,p100\n"


def test_emit_aggregate_formatting(tmp_path):
    out = tmp_path / "aggregate.csv"
    emit_aggregate_csv([AggregateRow("cmsa", 100, 7.0, 1.0)], out)
    assert out.read_text() == "algorithm,level,mean,std\ncmsa,100,7.00,1.00\n"


def test_emit_suites(tmp_path, gpl):
    suite = [frozenset({"GPL", "Driver"}), frozenset({"GPL", "Benchmark"})]
    rec = RunRecord(0, "greedy", 0, 2, 1, {100: 2}, suite)
    emit_suites([rec], gpl, tmp_path)
    text = (tmp_path / "suites" / "greedy-0.txt").read_text()
    assert text == "GPL;Driver\nGPL;Benchmark\n"


def test_cli_end_to_end(tmp_path, capsys):
    fm_path, pp_path = benchmark_pair("synth04")
    out = tmp_path / "out"
    code = main(
        [
            "run", "--model", str(fm_path), "--products", str(pp_path),
            "--algo", "greedy", "--runs", "2", "--seed", "3", "--out", str(out),
        ]
    )
    assert code == 0
    runs = (out / "runs.csv").read_text().splitlines()
    assert runs[0].startswith("run,algorithm,seed,suite_size,time_ms,p50,")
    assert len(runs) == 3
    assert (out / "aggregate.csv").exists()
    assert (out / "suites" / "greedy-0.txt").exists()
    assert "2 runs" in capsys.readouterr().out


def test_cli_missing_model(tmp_path, capsys):
    fm_path, pp_path = benchmark_pair("synth04")
    code = main(
        [
            "run", "--model", str(tmp_path / "nope.fm"), "--products", str(pp_path),
            "--algo", "greedy", "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 2
    assert "input error" in capsys.readouterr().err


def test_cli_malformed_model(tmp_path, capsys):
    bad = tmp_path / "bad.fm"
    bad.write_text("root A\nfrob A B\n")
    _, pp_path = benchmark_pair("synth04")
    code = main(
        [
            "run", "--model", str(bad), "--products", str(pp_path),
            "--algo", "greedy", "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 2


def test_cli_bad_levels(tmp_path, capsys):
    fm_path, pp_path = benchmark_pair("synth04")
    code = main(
        [
            "run", "--model", str(fm_path), "--products", str(pp_path),
            "--algo", "greedy", "--levels", "0,101", "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 2

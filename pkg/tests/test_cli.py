import json

import pytest

from src.benchmarks.explicit_format import emit_explicit
from src.cli.main import EXIT_NOT_WINNING, EXIT_OK, EXIT_USAGE, main
from src.winning.region_io import dump_region, read_region


@pytest.fixture
def cheese_file(tmp_path, cheese):
    path = tmp_path / "cheese.pomdp"
    path.write_text(emit_explicit(*cheese), encoding="utf-8")
    return path


@pytest.fixture
def oracle_region(tmp_path, cheese, cheese_oracle):
    path = tmp_path / "oracle.win"
    path.write_text(dump_region(cheese_oracle, cheese[0]), encoding="utf-8")
    return path


def test_gen_to_file(tmp_path, cheese):
    path = tmp_path / "generated.pomdp"
    assert main(["gen", "--family", "cheese", "-o", str(path)]) == EXIT_OK
    assert path.read_text(encoding="utf-8") == emit_explicit(*cheese)


def test_gen_to_stdout(capsys, cheese):
    assert main(["gen", "--family", "cheese"]) == EXIT_OK
    assert capsys.readouterr().out == emit_explicit(*cheese)


def test_solve_writes_region_and_logs(tmp_path, capsys, cheese, cheese_oracle, cheese_file):
    region = tmp_path / "cheese.win"
    progress = tmp_path / "progress.jsonl"
    report = tmp_path / "report.xlsx"
    code = main(
        ["solve", str(cheese_file), "-o", str(region), "--progress", str(progress), "--report", str(report)]
    )
    assert code == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "winning"
    assert read_region(region, cheese[0]).same_region(cheese_oracle)
    assert progress.read_text(encoding="utf-8").strip()
    assert report.exists()


def test_solve_goal_initial(capsys):
    assert main(["solve", "--family", "cheese", "--goal", "initial"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "winning"


def test_solve_with_model_validation(capsys, cheese_file):
    assert main(["solve", str(cheese_file), "--validate-models", "--budget", "60"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "winning"


def test_oneshot_without_memory(capsys, cheese_file):
    assert main(["solve", str(cheese_file), "--mode", "oneshot", "-k", "11", "-m", "1"]) == EXIT_NOT_WINNING
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "not winning"
    assert "not winning with these parameters" in lines


def test_oneshot_with_memory(capsys, cheese_file):
    assert main(["solve", str(cheese_file), "--mode", "oneshot", "-m", "2"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "winning"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve", "--mode", "bogus", "--family", "cheese"],
        ["solve"],
        ["solve", "--family", "cheese", "--memory", "0"],
        ["solve", "--family", "obstacle"],
        ["gen", "--family", "maze"],
        ["oracle", "missing.pomdp"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_model_and_family_are_exclusive(cheese_file):
    assert main(["solve", str(cheese_file), "--family", "cheese"]) == EXIT_USAGE


def test_check_region(capsys, cheese_file, oracle_region):
    assert main(["check-region", str(cheese_file), "--region", str(oracle_region)]) == EXIT_OK
    output = capsys.readouterr().out.splitlines()
    assert "sound: yes" in output
    assert "maximal: yes" in output


def test_check_region_rejects_stuck_regions(tmp_path, cheese_file):
    region = tmp_path / "stuck.win"
    region.write_text("win es 0\nwin ew 1\nwin cheese 9\n", encoding="utf-8")
    assert main(["check-region", str(cheese_file), "--region", str(region)]) == EXIT_NOT_WINNING


def test_check_region_with_malformed_file(tmp_path, cheese_file):
    region = tmp_path / "broken.win"
    region.write_text("win nowhere 0\n", encoding="utf-8")
    assert main(["check-region", str(cheese_file), "--region", str(region)]) == EXIT_USAGE


def test_export_jani(tmp_path, cheese_file):
    path = tmp_path / "cheese.jani"
    assert main(["export-jani", str(cheese_file), "--pin-p", "-o", str(path)]) == EXIT_OK
    model = json.loads(path.read_text(encoding="utf-8"))
    assert model["constants"][0]["value"] == {"op": "/", "left": 1, "right": 7}


def test_oracle(capsys, cheese_file):
    assert main(["oracle", str(cheese_file)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "winning"
    assert "win ns 5 6 7" in lines


def test_oracle_node_cap(cheese_file):
    assert main(["oracle", str(cheese_file), "--cap", "3"]) == 3


def test_shield_simulate(tmp_path, capsys, cheese_file, oracle_region):
    traces = tmp_path / "traces.jsonl"
    code = main(
        [
            "shield-simulate",
            str(cheese_file),
            "--region",
            str(oracle_region),
            "--runs",
            "20",
            "--traces",
            str(traces),
        ]
    )
    assert code == EXIT_OK
    output = capsys.readouterr().out
    assert "reach_rate" in output
    assert len(traces.read_text(encoding="utf-8").splitlines()) == 20


def test_shield_simulate_computes_the_region(capsys):
    assert main(["shield-simulate", "--family", "cheese", "--runs", "5", "--ascii"]) == EXIT_OK
    assert "violations" in capsys.readouterr().out


def test_unshielded_simulation(cheese_file):
    argv = ["shield-simulate", str(cheese_file), "--no-shield", "--runs", "10", "--initial-state", "6"]
    assert main(argv) == EXIT_OK


def test_shield_simulate_needs_a_productive_region(tmp_path, cheese_file):
    region = tmp_path / "stuck.win"
    region.write_text("win es 0\nwin ew 1\nwin cheese 9\n", encoding="utf-8")
    argv = ["shield-simulate", str(cheese_file), "--region", str(region), "--runs", "1"]
    assert main(argv) == EXIT_USAGE


def test_safety_only_still_needs_a_deadlock_free_region(tmp_path, cheese_file, monkeypatch):
    region = tmp_path / "deadlock.win"
    region.write_text("win ns 5 7\n", encoding="utf-8")

    def never_called(*args, **kwargs):
        raise AssertionError("simulation started on a region with deadlocks")

    monkeypatch.setattr("src.cli.main.simulate_many", never_called)
    argv = ["shield-simulate", str(cheese_file), "--region", str(region), "--safety-only", "--runs", "1"]
    assert main(argv) == EXIT_USAGE

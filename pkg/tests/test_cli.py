"""Command-line interface: exit codes, canonical reports, golden bytes."""

import json

import pytest

from sealedbid.cli import (
    EXIT_BUDGET,
    EXIT_FAIL,
    EXIT_INVALID,
    EXIT_PASS,
    dispatch,
    load_instance,
)
from sealedbid.core import InvalidInstanceError
from sealedbid.reporting import canonical_json


def write_doc(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.fixture
def instance_path(tmp_path):
    return write_doc(tmp_path, "instance.json", {"valuations": [3, 6, 4], "bids": [3, 5, 4]})


@pytest.fixture
def config_path(tmp_path):
    return write_doc(tmp_path, "config.json", {
        "n_bidders": 3, "n_rounds": 50, "value_low": 0, "value_high": 9, "seed": 7,
    })


class TestLoadInstance:
    def test_well_formed(self, instance_path):
        instance = load_instance(instance_path)
        assert instance.n_bidders == 3

    def test_single_bidder(self, tmp_path):
        path = write_doc(tmp_path, "one.json", {"valuations": [3], "bids": [3]})
        with pytest.raises(InvalidInstanceError) as info:
            load_instance(path)
        assert any("N >= 2 required" in v for v in info.value.violations)

    def test_negative_tick(self, tmp_path):
        path = write_doc(tmp_path, "neg.json", {"valuations": [3, 6], "bids": [-1, 2]})
        with pytest.raises(InvalidInstanceError) as info:
            load_instance(path)
        assert any("negative tick" in v for v in info.value.violations)

    def test_unparseable_file(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(InvalidInstanceError) as info:
            load_instance(str(path))
        assert any("parse failure" in v for v in info.value.violations)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidInstanceError):
            load_instance(str(tmp_path / "absent.json"))


class TestExitCodes:
    def test_dominance_second_price_passes(self, capsys):
        code = dispatch(["dominance", "--n", "2", "--ticks", "4", "--format=json"])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_PASS
        assert report["verdict"] == "pass"
        assert report["vacuous"] is False

    def test_dominance_first_price_fails_with_counterexample(self, capsys):
        code = dispatch([
            "dominance", "--n", "2", "--ticks", "4",
            "--rule", "first-price", "--format=json",
        ])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_FAIL
        assert report["verdict"] == "fail"
        assert report["counterexample"]["deviation_utility"] > report["counterexample"]["truthful_utility"]

    def test_validate_length_mismatch(self, tmp_path, capsys):
        path = write_doc(tmp_path, "bad.json", {"valuations": [3, 6], "bids": [3]})
        code = dispatch(["validate", path, "--format=json"])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_INVALID
        assert report["valid"] is False
        assert any("length mismatch" in v for v in report["violations"])

    def test_validate_good_instance(self, instance_path, capsys):
        code = dispatch(["validate", instance_path, "--format=json"])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_PASS
        assert report == {"valid": True, "violations": []}

    def test_unknown_flag(self, capsys):
        code = dispatch(["dominance", "--frobnicate"])
        captured = capsys.readouterr()
        assert code == EXIT_INVALID
        assert captured.out == ""
        assert "usage" in captured.err.lower()

    def test_unknown_subcommand(self):
        assert dispatch(["conquer"]) == EXIT_INVALID

    def test_no_subcommand(self):
        assert dispatch([]) == EXIT_INVALID

    def test_budget_exceeded(self, capsys):
        code = dispatch(["dominance", "--n", "3", "--ticks", "4", "--budget", "100"])
        captured = capsys.readouterr()
        assert code == EXIT_BUDGET
        assert captured.out == ""
        assert "budget" in captured.err

    def test_unknown_policy_name(self, instance_path, capsys):
        code = dispatch(["check", instance_path, "--policies", "coin-flip"])
        assert code == EXIT_INVALID
        assert "unknown policy" in capsys.readouterr().err


class TestCheck:
    def test_truthful_instance_passes(self, instance_path, capsys):
        code = dispatch(["check", instance_path, "--format=json"])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_PASS
        assert report["verdict"] == "pass"

    def test_winning_only_grid_is_vacuous(self, tmp_path, capsys):
        # deviations above every opposing bid starve the losing cases
        path = write_doc(tmp_path, "two.json", {"valuations": [1, 0], "bids": [1, 0]})
        code = dispatch([
            "check", path, "--deviations=grid",
            "--grid-min", "2", "--grid-max", "4", "--format=json",
        ])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_FAIL
        assert report["verdict"] == "pass"
        assert report["vacuous"] is True
        assert report["case_counts"]["win-lose"] == 0
        assert report["case_counts"]["lose-lose"] == 0

    def test_full_grid_is_not_vacuous(self, tmp_path, capsys):
        path = write_doc(tmp_path, "two.json", {"valuations": [1, 0], "bids": [1, 0]})
        code = dispatch(["check", path, "--deviations=grid", "--format=json"])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_PASS
        assert report["vacuous"] is False

    def test_empty_grid_rejected(self, instance_path, capsys):
        code = dispatch([
            "check", instance_path, "--deviations=grid",
            "--grid-min", "9", "--grid-max", "4",
        ])
        assert code == EXIT_INVALID


class TestClassify:
    def test_reports_case_and_utilities(self, instance_path, capsys):
        code = dispatch([
            "classify", instance_path, "--bidder", "1",
            "--deviation", "2", "--format=json",
        ])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_PASS
        assert report["case"] == "win-lose"
        assert report["winner_original"] == 1
        assert report["winner_deviation"] == 2
        assert report["utility_original"] == 2
        assert report["utility_deviation"] == 0

    def test_bidder_out_of_range(self, instance_path, capsys):
        code = dispatch(["classify", instance_path, "--bidder", "7", "--deviation", "2"])
        assert code == EXIT_INVALID


class TestSimulate:
    def test_report_and_csv(self, config_path, tmp_path, capsys):
        csv_path = tmp_path / "rounds.csv"
        code = dispatch(["simulate", config_path, "--csv", str(csv_path), "--format=json"])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_PASS
        assert report["rounds"] == 50
        assert report["efficiency_rate"] == "1/1"
        lines = csv_path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "round,valuations,bids,winner,price"
        assert len(lines) == 51

    def test_seed_flag_overrides_config(self, config_path, capsys):
        dispatch(["simulate", config_path, "--seed", "99", "--format=json"])
        report = json.loads(capsys.readouterr().out)
        assert report["seed"] == 99

    def test_invalid_config(self, tmp_path, capsys):
        path = write_doc(tmp_path, "bad.json", {"n_bidders": 1, "n_rounds": 5,
                                                "value_low": 0, "value_high": 4})
        code = dispatch(["simulate", path])
        assert code == EXIT_INVALID


class TestReportFormat:
    def test_json_round_trip_is_byte_identical(self, capsys):
        dispatch(["dominance", "--n", "2", "--ticks", "3", "--format=json"])
        text = capsys.readouterr().out
        assert canonical_json(json.loads(text)) == text

    def test_same_argv_same_bytes(self, capsys):
        argv = ["dominance", "--n", "2", "--ticks", "3", "--format=json"]
        dispatch(argv)
        first = capsys.readouterr().out
        dispatch(argv)
        second = capsys.readouterr().out
        assert first == second

    def test_golden_dominance_report(self, capsys):
        dispatch(["dominance", "--n", "2", "--ticks", "2", "--format=json"])
        assert capsys.readouterr().out == (
            '{"case_counts":{"lose-lose":98,"lose-win":37,"win-lose":37,'
            '"win-win":98},"evaluated_count":270,"vacuous":false,"verdict":"pass"}\n'
        )

    def test_golden_falsify_report(self, capsys):
        dispatch([
            "falsify", "--rule", "first-price", "--n-max", "2",
            "--ticks", "4", "--format=json",
        ])
        assert capsys.readouterr().out == (
            '{"counterexample":{"bidder":0,"bids":[1,0],"deviation_bid":0,'
            '"deviation_utility":1,"policy":"first-index","truthful_utility":0,'
            '"valuations":[1,0]},"found":true}\n'
        )

    def test_table_format(self, capsys):
        code = dispatch(["dominance", "--n", "2", "--ticks", "2"])
        out = capsys.readouterr().out
        assert code == EXIT_PASS
        assert "verdict" in out
        assert "case_counts.win-win" in out
        assert "{" not in out

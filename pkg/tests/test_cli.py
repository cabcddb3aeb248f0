"""Command-line interface: parsing, exit codes, output files."""

import shutil
import subprocess

import pytest

from fogbid.cli import load_config, main
from fogbid.domain import UniformParam
from fogbid.engine import OUTCOME_HEADER, ConfigInvalid

SMALL_CONFIG = """\
# short, lightly loaded run
duration_ms = 2000
requests_per_second_per_edge = 10
seed = 11
"""

FULL_CONFIG = """\
seed = 9
duration_ms = 3000
tick_ms = 1
requests_per_second_per_edge = 20
executable_count = 7
processing_latency = 30,15          # mean,half_width in ms
edge_to_intermediary_latency = 20,10
intermediary_to_cloud_latency = 40,20
storage_bid = 100,50
processing_bid = 100,50
executable_size = 10,5
payment_rule = second
eviction_policy = per-size
edge_count = 2
edge_storage_capacity = 100
edge_processing_capacity = 5
intermediary_storage_capacity = 500
intermediary_processing_capacity = 20
"""


def write_config(tmp_path, text, name="sim.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestLoadConfig:
    def test_full_config_round_trips(self, tmp_path):
        cfg = load_config(write_config(tmp_path, FULL_CONFIG))
        assert cfg.seed == 9
        assert cfg.executable_count == 7
        assert cfg.payment_rule.value == "second"
        assert cfg.eviction_policy.value == "per-size"
        assert cfg.processing_latency == UniformParam(30, 15)
        assert len(cfg.topology.nodes) == 4  # two edges, intermediary, cloud
        assert cfg.topology.node(0).storage_capacity == 100

    def test_empty_file_means_defaults(self, tmp_path):
        cfg = load_config(write_config(tmp_path, "\n# only a comment\n"))
        assert cfg.seed == 42 and cfg.duration_ms == 120_000

    def test_unknown_key_reports_line_number(self, tmp_path):
        path = write_config(tmp_path, "duration_ms = 1000\nrequest_rate = 5\n")
        with pytest.raises(ValueError, match="line 2.*request_rate"):
            load_config(path)

    def test_syntax_error_reports_line_number(self, tmp_path):
        path = write_config(tmp_path, "just some words\n")
        with pytest.raises(ValueError, match="line 1"):
            load_config(path)

    def test_duplicate_key_rejected(self, tmp_path):
        path = write_config(tmp_path, "seed = 1\nseed = 2\n")
        with pytest.raises(ValueError, match="line 2.*duplicate"):
            load_config(path)

    def test_range_violations_surface_as_config_errors(self, tmp_path):
        path = write_config(tmp_path, "storage_bid = 10,20\n")  # low end below zero
        with pytest.raises(ConfigInvalid, match="line 1"):
            load_config(path)

    def test_negative_latency_range_rejected(self, tmp_path):
        path = write_config(tmp_path, "processing_latency = 30,45\n")
        with pytest.raises(ConfigInvalid, match="line 1"):
            load_config(path)


class TestExitCodes:
    def test_validate_defaults(self, capsys):
        assert main(["validate"]) == 0
        assert "ok" in capsys.readouterr().out

    def test_validate_config_file(self, tmp_path, capsys):
        assert main(["validate", "--config", write_config(tmp_path, SMALL_CONFIG)]) == 0

    def test_usage_error_is_2(self):
        assert main([]) == 2
        assert main(["run", "--no-such-flag"]) == 2

    def test_help_is_0(self):
        assert main(["--help"]) == 0

    def test_missing_config_file_is_3(self, capsys):
        assert main(["validate", "--config", "/nonexistent/sim.cfg"]) == 3
        assert "error" in capsys.readouterr().err

    def test_bad_config_line_is_3(self, tmp_path, capsys):
        path = write_config(tmp_path, "duration_ms = soon\n")
        assert main(["validate", "--config", path]) == 3
        assert "line 1" in capsys.readouterr().err

    def test_invalid_domain_value_is_3(self, tmp_path, capsys):
        path = write_config(tmp_path, "tick_ms = 7\n")  # 120000 % 7 != 0
        assert main(["validate", "--config", path]) == 3

    def test_bad_enum_choice_is_2(self):
        assert main(["run", "--payment-rule", "third"]) == 2

    def test_bad_repetitions_is_3(self, tmp_path, capsys):
        # repetitions below 1 is rejected before any simulation runs
        assert main(["exp1", "--repetitions", "0", "--out", str(tmp_path)]) == 3

    def test_unwritable_output_directory_is_4(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        config = write_config(tmp_path, SMALL_CONFIG)
        code = main(["run", "--config", config, "--out", str(blocker / "out")])
        assert code == 4
        assert "error" in capsys.readouterr().err


class TestRunCommand:
    def test_writes_records_and_summary(self, tmp_path, capsys):
        config = write_config(tmp_path, SMALL_CONFIG)
        out = tmp_path / "results"
        assert main(["run", "--config", config, "--out", str(out)]) == 0
        records = (out / "run-11.records").read_text().splitlines()
        summary = (out / "run-11.summary").read_text()
        assert records[0] == OUTCOME_HEADER
        assert len(records) == 1 + 20  # 10 req/s for 2 s
        assert "requests = 20" in summary
        assert capsys.readouterr().out == summary

    def test_seed_override_renames_outputs(self, tmp_path, capsys):
        config = write_config(tmp_path, SMALL_CONFIG)
        out = tmp_path / "results"
        assert main(["run", "--config", config, "--seed", "7", "--out", str(out)]) == 0
        assert (out / "run-7.records").exists()

    def test_runs_are_reproducible(self, tmp_path, capsys):
        config = write_config(tmp_path, SMALL_CONFIG)
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--config", config, "--out", str(a)]) == 0
        assert main(["run", "--config", config, "--out", str(b)]) == 0
        assert (a / "run-11.records").read_bytes() == (b / "run-11.records").read_bytes()
        assert (a / "run-11.summary").read_bytes() == (b / "run-11.summary").read_bytes()

    def test_payment_rule_override_changes_prices(self, tmp_path, capsys):
        config = write_config(tmp_path, SMALL_CONFIG)
        out = tmp_path / "results"
        assert main(["run", "--config", config, "--out", str(out)]) == 0
        first = (out / "run-11.records").read_text()
        assert (
            main(["run", "--config", config, "--payment-rule", "second", "--out", str(out)])
            == 0
        )
        second = (out / "run-11.records").read_text()
        assert first != second


class TestExperimentCommands:
    def test_exp1_writes_the_sweep_csv(self, tmp_path, capsys):
        assert main(["exp1", "--repetitions", "1", "--out", str(tmp_path)]) == 0
        csv_file = tmp_path / "exp1-42.csv"
        assert csv_file.exists()
        lines = csv_file.read_text().splitlines()
        assert len(lines) == 21  # header + 100..2000 step 100
        assert lines[0].startswith("value,edge_avg_exec_price")
        assert lines[1].startswith("100,") and lines[-1].startswith("2000,")
        assert f"wrote {csv_file}" in capsys.readouterr().out

    def test_exp2_writes_the_sweep_csv(self, tmp_path, capsys):
        assert main(["exp2", "--seed", "42", "--repetitions", "1", "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "exp2-42.csv").read_text().splitlines()
        assert len(lines) == 21  # header + 5..100 step 5
        assert lines[1].startswith("5,") and lines[-1].startswith("100,")


@pytest.mark.skipif(shutil.which("fogbid") is None, reason="entry point not installed")
def test_installed_entry_point():
    proc = subprocess.run(
        ["fogbid", "validate"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert "ok" in proc.stdout

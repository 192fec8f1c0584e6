from __future__ import annotations

from pathlib import Path

import pytest

from equinet.cli import main
from equinet.errors import ConfigInvalid, StageError
from equinet.pipeline import run, validate_config

GOLDEN = Path(__file__).resolve().parent / "golden"


def run_config(fixtures_dir, out_dir, monkeypatch, resume=False):
    monkeypatch.setenv("EQUINET_OUTPUT_DIR", str(out_dir))
    config = validate_config(fixtures_dir / "run.cfg")
    return run(config, resume=resume)


def bundle_files(root: Path):
    return sorted(
        p.relative_to(root).as_posix()
        for p in root.rglob("*")
        if p.is_file() and ".cache" not in p.parts
    )


class TestValidateConfig:
    def write(self, tmp_path, text):
        path = tmp_path / "run.cfg"
        path.write_text(text, encoding="utf-8")
        return path

    def minimal(self, fixtures_dir, tmp_path, extra=""):
        return (
            f"shareholders = {fixtures_dir}/shareholders.csv\n"
            f"legal_reps = {fixtures_dir}/legal_reps.csv\n"
            f"market = {fixtures_dir}/market.csv\n"
            f"financials = {fixtures_dir}/financials.csv\n"
            f"output_dir = {tmp_path}/out\n"
            f"window = G1:2015-03-01:2015-05-31\n"
            f"model_spec = {fixtures_dir}/models/eq2.model\n"
            + extra
        )

    def test_minimal_valid(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        path = self.write(tmp_path, self.minimal(fixtures_dir, tmp_path))
        config = validate_config(path)
        assert len(config.windows) == 1
        assert config.model_specs[0][0] == "eq2"

    def test_zero_windows_invalid(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        text = self.minimal(fixtures_dir, tmp_path).replace(
            "window = G1:2015-03-01:2015-05-31\n", ""
        )
        with pytest.raises(ConfigInvalid, match="at least one window"):
            validate_config(self.write(tmp_path, text))

    def test_overlapping_windows_name_both(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        text = self.minimal(
            fixtures_dir, tmp_path, extra="window = G1b:2015-04-01:2015-06-30\n"
        )
        with pytest.raises(ConfigInvalid) as err:
            validate_config(self.write(tmp_path, text))
        assert any("G1" in p and "G1b" in p and "overlap" in p for p in err.value.problems)

    def test_missing_input_file_reports_path(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        text = self.minimal(fixtures_dir, tmp_path).replace(
            f"market = {fixtures_dir}/market.csv", "market = nowhere/market.csv"
        )
        with pytest.raises(ConfigInvalid) as err:
            validate_config(self.write(tmp_path, text))
        assert any("market.csv" in p and "not found" in p for p in err.value.problems)

    def test_all_problems_collected(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        text = (
            "market = nowhere/market.csv\n"
            "louvain_seed = abc\n"
            "mystery_key = 1\n"
        )
        with pytest.raises(ConfigInvalid) as err:
            validate_config(self.write(tmp_path, text))
        problems = "\n".join(err.value.problems)
        assert "shareholders" in problems      # missing required key
        assert "louvain_seed" in problems      # bad integer
        assert "mystery_key" in problems       # unknown key
        assert "not found" in problems         # missing file
        assert len(err.value.problems) >= 5

    def test_cli_input_overrides(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        path = self.write(tmp_path, self.minimal(fixtures_dir, tmp_path))
        config = validate_config(
            path,
            overrides={
                "market": str(fixtures_dir / "market.csv"),
                "windows": ["W:2015-06-01:2015-08-31"],
            },
        )
        assert config.windows[0].label == "W"
        assert config.market.name == "market.csv"

    def test_bad_override_window_collected(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        path = self.write(tmp_path, self.minimal(fixtures_dir, tmp_path))
        with pytest.raises(ConfigInvalid, match="--windows"):
            validate_config(path, overrides={"windows": ["nonsense"]})

    def test_inline_model_section(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        text = self.minimal(fixtures_dir, tmp_path).replace(
            f"model_spec = {fixtures_dir}/models/eq2.model\n",
            "[model tiny]\n@dependent y\nlog_v\ndegree\n",
        )
        config = validate_config(self.write(tmp_path, text))
        assert config.model_specs[0][0] == "tiny"
        assert config.model_specs[0][1].regressors == ("log_v", "degree")

    def test_unknown_regressor_caught_at_validate_time(self, fixtures_dir, tmp_path, monkeypatch):
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        text = self.minimal(fixtures_dir, tmp_path).replace(
            f"model_spec = {fixtures_dir}/models/eq2.model\n",
            "[model bad]\n@dependent y\nlog_v\nnot_a_field\n",
        )
        with pytest.raises(ConfigInvalid, match="not_a_field"):
            validate_config(self.write(tmp_path, text))


class TestRunBundle:
    def test_matches_committed_golden_byte_for_byte(
        self, fixtures_dir, tmp_path, monkeypatch
    ):
        out = tmp_path / "out"
        run_config(fixtures_dir, out, monkeypatch)
        expected = bundle_files(GOLDEN)
        actual = bundle_files(out)
        assert actual == expected
        for rel in expected:
            assert (out / rel).read_bytes() == (GOLDEN / rel).read_bytes(), rel

    def test_two_runs_byte_identical(self, fixtures_dir, tmp_path, monkeypatch):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        run_config(fixtures_dir, out1, monkeypatch)
        run_config(fixtures_dir, out2, monkeypatch)
        files = bundle_files(out1)
        assert files == bundle_files(out2)
        for rel in files:
            assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes(), rel

    def test_resume_skips_unchanged_stages(self, fixtures_dir, tmp_path, monkeypatch):
        out = tmp_path / "out"
        run_config(fixtures_dir, out, monkeypatch, resume=True)
        untouched = out / "G1" / "edges.csv"
        stamp = untouched.stat().st_mtime_ns
        regress = out / "G1" / "regress_eq2.txt"
        regress_bytes = regress.read_bytes()
        regress.unlink()

        run_config(fixtures_dir, out, monkeypatch, resume=True)
        assert untouched.stat().st_mtime_ns == stamp  # graph stage not re-run
        assert regress.read_bytes() == regress_bytes  # econometrics re-ran

    def test_without_resume_everything_rewritten(self, fixtures_dir, tmp_path, monkeypatch):
        out = tmp_path / "out"
        run_config(fixtures_dir, out, monkeypatch)
        stamp = (out / "G1" / "edges.csv").stat().st_mtime_ns
        run_config(fixtures_dir, out, monkeypatch)
        assert (out / "G1" / "edges.csv").stat().st_mtime_ns != stamp

    def test_stage_failure_removes_partial_outputs(self, fixtures_dir, tmp_path, monkeypatch):
        # duplicate regressors make the design rank deficient at estimation
        # time, well after graph/metrics files have been written
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            f"shareholders = {fixtures_dir}/shareholders.csv\n"
            f"legal_reps = {fixtures_dir}/legal_reps.csv\n"
            f"market = {fixtures_dir}/market.csv\n"
            f"financials = {fixtures_dir}/financials.csv\n"
            f"output_dir = {tmp_path}/out\n"
            f"window = G1:2015-03-01:2015-05-31\n"
            "[model collinear]\n@dependent y\ndegree\ndegree\n",
            encoding="utf-8",
        )
        monkeypatch.delenv("EQUINET_OUTPUT_DIR", raising=False)
        config = validate_config(cfg)
        with pytest.raises(StageError) as err:
            run(config)
        assert err.value.stage == "econometrics"
        leftovers = [p for p in (tmp_path / "out").rglob("*") if p.is_file()]
        assert leftovers == []


class TestCLI:
    def test_run_exit_zero(self, fixtures_dir, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("EQUINET_OUTPUT_DIR", str(tmp_path / "out"))
        assert main(["run", "--config", str(fixtures_dir / "run.cfg")]) == 0
        assert "wrote" in capsys.readouterr().out

    def test_validate_ok(self, fixtures_dir, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("EQUINET_OUTPUT_DIR", str(tmp_path / "out"))
        assert main(["validate", "--config", str(fixtures_dir / "run.cfg")]) == 0
        assert "config ok" in capsys.readouterr().out

    def test_config_error_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense\n", encoding="utf-8")
        assert main(["validate", "--config", str(bad)]) == 1
        assert "invalid" in capsys.readouterr().err

    def test_stage_failure_exits_two(self, fixtures_dir, tmp_path, monkeypatch, capsys):
        # corrupt market file parses but the quarterly averages lose a firm;
        # simpler: point market at a file with a bad row to fail ingest
        broken = tmp_path / "market.csv"
        broken.write_text(
            "firm_id,month,monthly_return,market_value,trading_amount\n"
            "600001,2015-03,0.05,-5,1\n",
            encoding="utf-8",
        )
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            (fixtures_dir / "run.cfg")
            .read_text()
            .replace("market = market.csv", f"market = {broken}")
            .replace("shareholders = ", f"shareholders = {fixtures_dir}/")
            .replace("legal_reps = ", f"legal_reps = {fixtures_dir}/")
            .replace("financials = ", f"financials = {fixtures_dir}/")
            .replace("aliases = ", f"aliases = {fixtures_dir}/")
            .replace("model_spec = ", f"model_spec = {fixtures_dir}/"),
            encoding="utf-8",
        )
        monkeypatch.setenv("EQUINET_OUTPUT_DIR", str(tmp_path / "out"))
        assert main(["run", "--config", str(cfg)]) == 2
        assert "ingest" in capsys.readouterr().err

    def test_stage_subcommands_chain(self, fixtures_dir, tmp_path, capsys):
        out = tmp_path / "stages"
        rc = main([
            "graph",
            "--shareholders", str(fixtures_dir / "shareholders.csv"),
            "--legal-reps", str(fixtures_dir / "legal_reps.csv"),
            "--aliases", str(fixtures_dir / "aliases.csv"),
            "--windows", "G1:2015-03-01:2015-05-31",
            "--output-dir", str(out),
        ])
        assert rc == 0
        edges = out / "G1" / "edges.csv"
        nodes = out / "G1" / "nodes.txt"
        assert edges.exists() and nodes.exists()

        rc = main([
            "metrics", "--edges", str(edges), "--nodes", str(nodes),
            "--window", "G1", "--output-dir", str(out / "m"),
        ])
        assert rc == 0
        assert (out / "m" / "node_metrics.csv").exists()
        assert (out / "m" / "degree_hist_total.csv").exists()

        rc = main([
            "communities", "--edges", str(edges), "--nodes", str(nodes),
            "--window", "G1", "--seed", "7", "--output-dir", str(out / "c"),
        ])
        assert rc == 0
        assert (out / "c" / "partition.csv").exists()

        rc = main([
            "layout", "--edges", str(edges), "--nodes", str(nodes),
            "--window", "G1",
            "--partition", str(out / "c" / "partition.csv"),
            "--node-metrics", str(out / "m" / "node_metrics.csv"),
            "--layout-iters", "30", "--layout-seed", "11",
            "--output-dir", str(out / "l"),
        ])
        assert rc == 0
        assert (out / "l" / "network.gexf").exists()
        assert (out / "l" / "positions.csv").exists()

    def test_regress_subcommand_uses_prior_outputs(self, tmp_path, capsys):
        rc = main([
            "regress",
            "--observations", str(GOLDEN / "G1" / "observations.csv"),
            "--model-spec", str(Path(__file__).resolve().parent.parent / "fixtures" / "models" / "eq2.model"),
            "--output-dir", str(tmp_path),
        ])
        assert rc == 0
        assert (tmp_path / "regress_eq2.txt").exists()
        assert (tmp_path / "diagnostics_eq2.txt").exists()
        table = (tmp_path / "regress_eq2.txt").read_text()
        golden_table = (GOLDEN / "G1" / "regress_eq2.txt").read_text()
        assert table == golden_table

    def test_unknown_argument_exits_one(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["run", "--bogus"])
        assert err.value.code == 1

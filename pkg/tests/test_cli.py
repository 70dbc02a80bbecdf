"""Tests for the binbench command line: subcommands, option priority and error exits."""

import json

import pytest

from binbench.cli import apply_config, build_parser, main
from binbench.distributions import UnknownSize
from binbench.harness import cell_seed, read_csv
from binbench.model import Instance, write_instance
from binbench.policies import _REGISTRY, StepPolicy, register_policy


@pytest.fixture
def trap_file(tmp_path):
    path = tmp_path / "trap.txt"
    write_instance(Instance(10, (5, 5, 4, 4, 3, 3, 3, 3)), path)
    return path


def _run(capsys, *argv):
    main(list(argv))
    return capsys.readouterr()


def _fields(text):
    """``key value`` lines as a dict of the first word to the rest."""
    out = {}
    for line in text.splitlines():
        key, _, rest = line.partition(" ")
        out.setdefault(key, rest)
    return out


# ── Option resolution ───────────────────────────────────────────────────────


class TestOptions:
    def test_defaults(self):
        args = apply_config(build_parser().parse_args(["ce"]))
        assert args.seed == 20240101
        assert args.oracle == "exact"
        assert "seed" not in args.explicit

    def test_config_fills_unset_flags(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 11, "budget-ms": 50}))
        args = apply_config(build_parser().parse_args(["--config", str(cfg), "ce"]))
        assert args.seed == 11
        assert args.budget_ms == 50
        assert "seed" in args.explicit

    def test_flag_beats_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 11}))
        args = apply_config(build_parser().parse_args(["--seed", "3", "--config", str(cfg), "ce"]))
        assert args.seed == 3

    def test_bad_config_exits(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{oops")
        with pytest.raises(SystemExit) as exc:
            main(["--config", str(cfg), "ce"])
        assert exc.value.code == 1
        assert "Error: config" in capsys.readouterr().err


# ── oracle ──────────────────────────────────────────────────────────────────


class TestOracle:
    def test_exact(self, capsys, trap_file):
        fields = _fields(_run(capsys, "oracle", "--instance", str(trap_file)).out)
        assert fields["objective"] == "3"
        assert fields["optimal"] == "true"

    def test_ffd(self, capsys, trap_file):
        assert _fields(_run(capsys, "oracle", "--instance", str(trap_file), "--mode", "ffd").out)["objective"] == "4"

    def test_exact_plan(self, capsys, trap_file):
        out = _run(capsys, "oracle", "--instance", str(trap_file), "--plan").out
        assert sum(1 for line in out.splitlines() if " -> " in line) == 8

    def test_fractional_with_lp_dump(self, capsys, trap_file, tmp_path):
        dump = tmp_path / "lp.txt"
        out = _run(capsys, "oracle", "--instance", str(trap_file), "--mode", "fractional",
                   "--plan", "--lp-dump", str(dump)).out
        fields = _fields(out)
        assert float(fields["opt_f"]) == pytest.approx(3.0)
        assert fields["certified"] == "true"
        assert any(" x " in line for line in out.splitlines())
        assert dump.read_text().startswith("# vars:")

    def test_missing_file(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["oracle", "--instance", str(tmp_path / "nope.txt")])
        assert exc.value.code == 1
        assert capsys.readouterr().err.startswith("Error:")


# ── run ─────────────────────────────────────────────────────────────────────


class TestRun:
    def test_overflow_on_a_ground_set(self, capsys):
        out = _run(capsys, "run", "--policy", "overflow", "--ground-set", "two-atom", "--T", "16", "--regret").out
        fields = _fields(out)
        assert fields["policy"] == "overflow"
        assert fields["placed"] == "16"
        assert "phase start end plan_bins method opened overflow queue identity" in out
        assert "BROKEN" not in out
        assert fields["reference"].startswith("exact ")
        assert int(fields["regret"]) >= 0

    def test_lp_adaptive_trace(self, capsys):
        out = _run(capsys, "run", "--policy", "lp-adaptive", "--dist", "bounded-waste", "--T", "10", "--trace").out
        lines = out.splitlines()
        header = lines.index("t objective level probability")
        assert len(lines) - header - 1 == 10

    def test_instance_file_in_order(self, capsys, trap_file):
        fields = _fields(_run(capsys, "run", "--policy", "first-fit", "--instance", str(trap_file)).out)
        assert fields["T"] == "8"
        assert fields["bins"] == "4"

    def test_matches_bench_trial_zero(self, capsys):
        run = _fields(_run(capsys, "--seed", "3", "run", "--policy", "best-fit", "--dist", "bounded-waste",
                           "--T", "12").out)
        bench = _run(capsys, "--seed", "3", "bench", "--policy", "best-fit", "--dist", "bounded-waste",
                     "--T", "12").out
        row = bench.splitlines()[1].split(",")
        assert row[5] == run["bins"]
        assert int(row[4]) == cell_seed(3, 12, 0)

    @pytest.mark.parametrize("argv, message", [
        (["run", "--policy", "overflow", "--dist", "uniform"], "--T is required"),
        (["run", "--policy", "overflow", "--dist", "bounded-waste", "--T", "4", "--B", "10"], "--B 10"),
        (["run", "--policy", "sum-of-squares", "--dist", "uniform", "--T", "4"], "integer sizes"),
        (["run", "--policy", "worst-fit", "--dist", "uniform", "--T", "4"], "worst-fit"),
        (["run", "--policy", "overflow", "--T", "4"], "--dist"),
    ])
    def test_errors(self, capsys, argv, message):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
        assert message in capsys.readouterr().err


# ── bench and runs ──────────────────────────────────────────────────────────


class TestBench:
    def test_csv_on_stdout(self, capsys):
        out = _run(capsys, "bench", "--policy", "best-fit", "--policy", "next-fit", "--dist", "bounded-waste",
                   "--T", "8", "16", "--trials", "2").out
        lines = out.splitlines()
        assert lines[0] == "policy,dist,T,trial,seed,bins,opt,opt_f,regret,runtime_ms"
        assert len(lines) == 1 + 2 * 2 * 2

    def test_output_files(self, capsys, tmp_path):
        csv_path = tmp_path / "bench.csv"
        plot = tmp_path / "plot.dat"
        report = tmp_path / "report.md"
        _run(capsys, "--out", str(csv_path), "--timing", "bench", "--policy", "first-fit", "--dist", "two-point",
             "--T", "8", "--trials", "3", "--plot-data", str(plot), "--report", str(report))
        records = read_csv(csv_path)
        assert len(records) == 3
        assert all(r.runtime_ms is not None for r in records)
        assert plot.read_text().startswith("# x=T\n")
        assert "## two-point" in report.read_text()

    def test_flags_override_the_grid_file(self, capsys, tmp_path):
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps({"policies": ["best-fit"], "dist": "bounded-waste", "T": [8], "base_seed": 1}))
        out = _run(capsys, "--seed", "2", "bench", "--grid", str(grid)).out
        assert int(out.splitlines()[1].split(",")[4]) == cell_seed(2, 8, 0)

    def test_grid_seed_kept_without_a_flag(self, capsys, tmp_path):
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps({"policies": ["best-fit"], "dist": "bounded-waste", "T": [8], "base_seed": 1}))
        out = _run(capsys, "bench", "--grid", str(grid)).out
        assert int(out.splitlines()[1].split(",")[4]) == cell_seed(1, 8, 0)

    def test_bad_grid(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bench", "--policy", "best-fit", "--dist", "bounded-waste", "--T", "16", "8"])
        assert exc.value.code == 1
        assert "ascending" in capsys.readouterr().err

    def test_cell_error_exits(self, capsys):
        def reject(state, x):
            raise UnknownSize(x, 0)

        register_policy(StepPolicy("no-support", reject))
        try:
            with pytest.raises(SystemExit) as exc:
                main(["bench", "--policy", "no-support", "--dist", "bounded-waste", "--T", "8"])
        finally:
            _REGISTRY.pop("no-support", None)
        assert exc.value.code == 1
        assert "Error: bounded-waste T=8 trial 0: UnknownSize" in capsys.readouterr().err

    def test_history(self, capsys):
        _run(capsys, "bench", "--policy", "best-fit", "--dist", "bounded-waste", "--T", "8", "--db",
             "--label", "smoke")
        listing = _run(capsys, "runs", "list").out
        assert "smoke" in listing
        assert "1 records" in listing
        shown = _run(capsys, "runs", "show", "1").out
        assert len(shown.splitlines()) == 2
        assert "Deleted bench run 1" in _run(capsys, "runs", "delete", "1").out
        assert "No saved bench runs." in _run(capsys, "runs", "list").out

    def test_unknown_run(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["runs", "delete", "42"])
        assert exc.value.code == 1
        assert "no bench run 42" in capsys.readouterr().err

    def test_run_id_required(self):
        with pytest.raises(SystemExit) as exc:
            main(["runs", "show"])
        assert exc.value.code == 2

    def test_data_dir_flag(self, capsys, tmp_path):
        data_dir = tmp_path / "elsewhere"
        _run(capsys, "--data-dir", str(data_dir), "bench", "--policy", "best-fit", "--dist", "bounded-waste",
             "--T", "8", "--db")
        assert (data_dir / "bench.db").exists()


# ── verify and ce ───────────────────────────────────────────────────────────


class TestVerify:
    def _report(self, capsys, *argv):
        return json.loads(_run(capsys, "verify", *argv).out.splitlines()[-1])

    def test_prop2(self, capsys):
        report = self._report(capsys, "--check", "prop2", "--N", "3", "--trials", "500")
        assert report["check"] == "prop2"
        assert report["verdict"] == "ok"
        assert "exact_mean" in report["details"]

    def test_queue(self, capsys):
        report = self._report(capsys, "--check", "queue", "--kind", "hypergeometric", "--size", "16",
                              "--trials", "300")
        assert report["check"] == "queue-hypergeometric"
        assert report["details"]["block"] == 2

    def test_ce_against_the_known_limit(self, capsys):
        report = self._report(capsys, "--check", "ce", "--T", "16", "64")
        assert report["verdict"] == "ok"
        assert report["details"]["limit"] == 0.5

    def test_lemma1(self, capsys):
        report = self._report(capsys, "--check", "lemma1", "--dist", "two-point", "--T", "1", "2", "3", "4")
        assert report["verdict"] == "ok"
        assert report["trials"] == 4

    def test_prop6(self, capsys):
        report = self._report(capsys, "--check", "prop6", "--T", "8", "--k", "1", "--trials", "4")
        assert report["details"]["tau"] == 4

    def test_ce_command(self, capsys):
        out = _run(capsys, "ce", "--dist", "two-point", "--T", "16", "64").out
        lines = out.splitlines()
        assert lines[0] == "T ratio"
        assert lines[1].startswith("16 0.5")
        assert lines[-1] == "limit 0.5"

"""End-to-end command-line checks: every subcommand, exit codes, and
manifest reproducibility."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from siren_harmonics.cli import main
from siren_harmonics.initialization import PeriodicInitSpec, periodic_init, siren_init
from siren_harmonics.model import load, save
from siren_harmonics.training import sample_set_to_csv, make_twelve_sines


@pytest.fixture
def periodic_net_file(tmp_path):
    net = periodic_init(PeriodicInitSpec(period=2.0, integer_multipliers=(1, 3)), seed=9)
    path = tmp_path / "net.json"
    save(net, path)
    return path


class TestSimpleCommands:
    def test_width(self, capsys):
        assert main(["width", "--K", "12", "--B", "2"]) == 0
        assert capsys.readouterr().out.strip() == "2"

    def test_bound(self, capsys):
        assert main(["bound", "--n", "32", "--k", "0,0,0"]) == 0
        assert float(capsys.readouterr().out.strip()) == pytest.approx(math.sqrt(192.0))

    def test_unknown_subcommand_exits_one(self, capsys):
        assert main(["frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_flag_exits_one(self):
        assert main(["width", "--K", "12", "--B", "2", "--bogus", "1"]) == 1

    def test_missing_file_exits_one(self, tmp_path):
        assert main(["expand", "--network", str(tmp_path / "nope.json"), "--box-bound", "3"]) == 1

    def test_enumeration_cap_exits_two(self, periodic_net_file):
        assert main([
            "expand", "--network", str(periodic_net_file), "--box-bound", "100000000",
        ]) == 2


class TestExpandAndVerify:
    def test_expand_writes_spectrum(self, periodic_net_file, tmp_path, capsys):
        csv_path = tmp_path / "spec.csv"
        json_path = tmp_path / "spec.json"
        code = main([
            "expand", "--network", str(periodic_net_file), "--box-bound", "8",
            "--canonical", "--out-csv", str(csv_path), "--out-json", str(json_path),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "tail_bound" in out
        header = csv_path.read_text().splitlines()[0]
        assert header == "k;frequency;alpha;A;B;c_re;c_im"
        payload = json.loads(json_path.read_text())
        assert payload["truncation"]["box_bound"] == 8

    def test_verify_self_consistency(self, periodic_net_file, tmp_path, capsys):
        out_csv = tmp_path / "empirical.csv"
        code = main([
            "verify", "--network", str(periodic_net_file), "--period", "2.0",
            "--box-bound", "12", "--out-csv", str(out_csv),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "spectrum check: ok" in out
        assert out_csv.read_text().startswith("frequency;magnitude;phase")


class TestInitFreq:
    def test_exact_target(self, tmp_path, capsys):
        target = [
            {"frequency": 5.0, "amplitude": 1.0},
            {"frequency": 3.0, "amplitude": 0.8},
            {"frequency": 6.0, "amplitude": 0.6},
            {"frequency": 2.0, "amplitude": 0.4},
        ]
        path = tmp_path / "target.json"
        path.write_text(json.dumps(target))
        code = main(["init-freq", "--target", str(path), "--n", "2", "--B", "2",
                     "--out", str(tmp_path / "fit.json")])
        assert code == 0
        out = capsys.readouterr().out
        assert "omega:" in out and "residual:" in out
        payload = json.loads((tmp_path / "fit.json").read_text())
        assert len(payload["omega"]) == 2


class TestTrain:
    def test_train_from_width_init(self, tmp_path, capsys):
        _, data = make_twelve_sines(1, grid_points=128)
        dataset = tmp_path / "data.csv"
        dataset.write_text(sample_set_to_csv(data))
        out_net = tmp_path / "trained.json"
        out_loss = tmp_path / "loss.csv"
        code = main([
            "train", "--dataset", str(dataset), "--init-width", "2",
            "--omega-range=-5,5", "--steps", "50", "--seed", "1",
            "--out-network", str(out_net), "--out-loss", str(out_loss),
        ])
        assert code == 0
        assert "final mse" in capsys.readouterr().out
        trained = load(out_net)
        assert trained.width == 2
        lines = out_loss.read_text().strip().splitlines()
        assert lines[0] == "step;mse;l2"
        assert len(lines) == 52

    def test_train_with_freeze(self, tmp_path):
        net = siren_init(2, seed=0, omega_range=(-5, 5))
        net_path = tmp_path / "init.json"
        save(net, net_path)
        _, data = make_twelve_sines(1, grid_points=128)
        dataset = tmp_path / "data.csv"
        dataset.write_text(sample_set_to_csv(data))
        out_net = tmp_path / "trained.json"
        code = main([
            "train", "--dataset", str(dataset), "--network", str(net_path),
            "--steps", "20", "--freeze", "omega,phi", "--out-network", str(out_net),
        ])
        assert code == 0
        trained = load(out_net)
        assert np.array_equal(trained.omega, net.omega)
        assert np.array_equal(trained.phi, net.phi)

    def test_bad_freeze_name_exits_one(self, tmp_path, capsys):
        _, data = make_twelve_sines(1, grid_points=64)
        dataset = tmp_path / "data.csv"
        dataset.write_text(sample_set_to_csv(data))
        code = main([
            "train", "--dataset", str(dataset), "--init-width", "2",
            "--steps", "1", "--freeze", "momentum",
        ])
        assert code == 1
        assert "momentum" in capsys.readouterr().err


class TestExperiments:
    def test_upper_bound_figure(self, tmp_path):
        outdir = tmp_path / "fig"
        assert main([
            "experiment", "--name", "upper-bound-figure", "--output-dir", str(outdir),
        ]) == 0
        rows = (outdir / "bounds.csv").read_text().strip().splitlines()[1:]
        values = [float(r.split(";")[1]) for r in rows]
        assert len(values) == 8
        assert all(x > y for x, y in zip(values, values[1:]))
        manifest = json.loads((outdir / "manifest.json").read_text())
        assert set(manifest["outputs"]) == {"bounds.csv", "bounds.dat"}

    def test_manifest_checksums_and_reproducibility(self, tmp_path):
        import hashlib

        first = tmp_path / "a"
        second = tmp_path / "b"
        for outdir in (first, second):
            assert main([
                "experiment", "--name", "twelve-sines", "--variant", "1",
                "--steps", "40", "--output-dir", str(outdir), "--seed", "5",
            ]) == 0
        m1 = json.loads((first / "manifest.json").read_text())
        m2 = json.loads((second / "manifest.json").read_text())
        assert m1["outputs"] == m2["outputs"]
        for name, digest in m1["outputs"].items():
            assert hashlib.sha256((first / name).read_bytes()).hexdigest() == digest
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_square_wave_smoke(self, tmp_path):
        outdir = tmp_path / "sq"
        assert main([
            "experiment", "--name", "square-wave", "--steps", "30",
            "--output-dir", str(outdir),
        ]) == 0
        metrics = json.loads((outdir / "metrics.json").read_text())
        assert {"final_mse", "network_overshoot", "fourier_overshoot"} <= set(metrics)
        assert (outdir / "curves.csv").exists()


class TestModuleEntryPoint:
    def test_python_dash_m(self):
        out = subprocess.run(
            [sys.executable, "-m", "siren_harmonics", "width", "--K", "12", "--B", "2"],
            capture_output=True,
            text=True,
        )
        assert out.returncode == 0
        assert out.stdout.strip() == "2"

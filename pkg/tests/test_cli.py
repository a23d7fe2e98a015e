import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from qrealism import cli, verify
from qrealism import interferometer as itf
from qrealism.pulse import reference_sequence_path
from qrealism.tomography import NoiseModel


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestFigure2:
    def test_ideal(self):
        table = rows(cli.figure2_csv(points=5))
        qdce = [r for r in table if r["kind"] == "qdce"]
        qcre = [r for r in table if r["kind"] == "qcre"]
        assert len(qdce) == len(qcre) == 5
        for r in qdce:
            assert float(r["wave_realism"]) == pytest.approx(1, abs=1e-9)
            assert float(r["particle_realism"]) == pytest.approx(0, abs=1e-9)
            assert r["wave_realism_std"] == ""
        top = max(qcre, key=lambda r: float(r["visibility"]))
        assert float(top["visibility"]) == pytest.approx(1, abs=1e-9)
        assert (float(top["wave_realism"]), float(top["particle_realism"])) == pytest.approx((1, 0), abs=1e-9)

    def test_noisy_columns(self):
        table = rows(cli.figure2_csv(points=2, noise=NoiseModel(0.01, 100, 0)))
        for r in table:
            assert float(r["wave_realism_std"]) > 0
            assert float(r["particle_realism_std"]) > 0


@pytest.fixture(scope="module")
def tables():
    return {k: rows(cli.figure3_csv(k, points=7)) for k in ("qdce", "qcre")}


class TestFigure3:
    def test_values(self, tables):
        t = tables["qdce"]
        p0 = {(float(r["alpha"]), float(r["theta"])): float(r["value"]) for r in t if r["table"] == "p0"}
        assert p0[(0.0, 0.0)] == pytest.approx(1, abs=1e-12)
        for (a, th), v in p0.items():
            if a == pytest.approx(np.pi):
                assert v == pytest.approx(0.5, abs=1e-12)
        vis = [r for r in t if r["table"] == "visibility"]
        assert len(vis) == 7

    def test_visibility_at_third_pi(self):
        t = rows(cli.figure3_csv("qcre", points=4))
        vis = [float(r["value"]) for r in t if r["table"] == "visibility"]
        assert vis[1] == pytest.approx(0.75, abs=1e-6)

    def test_surfaces_agree(self, tables):
        a = [float(r["value"]) for r in tables["qdce"] if r["table"] == "p0"]
        b = [float(r["value"]) for r in tables["qcre"] if r["table"] == "p0"]
        assert np.max(np.abs(np.subtract(a, b))) <= 1e-12


class TestMain:
    def test_figure_runs_are_byte_identical(self, tmp_path):
        for args in (["figure2", "--points", "3", "--noise", "0.01", "--samples", "5", "--seed", "4"],
                     ["figure3", "--kind", "qcre", "--points", "5"]):
            a, b = tmp_path / "a.csv", tmp_path / "b.csv"
            assert cli.main([*args, "--out", str(a)]) == 0
            assert cli.main([*args, "--out", str(b)]) == 0
            assert a.read_bytes() == b.read_bytes()

    def test_stdout(self, capsys):
        assert cli.main(["figure3", "--kind", "qdce", "--points", "2", "--out", "-"]) == 0
        assert capsys.readouterr().out.startswith("table,alpha,theta,value\n")

    def test_sweep(self, capsys):
        assert cli.main(["sweep", "--kind", "qcre", "--alpha", "0,90,180", "--theta", "0",
                         "--degrees", "--out", "-"]) == 0
        table = rows(capsys.readouterr().out)
        assert len(table) == 3
        mid = table[1]
        assert float(mid["visibility"]) == pytest.approx(0.5, abs=1e-6)
        assert float(mid["wave_realism"]) == pytest.approx(0.188722, abs=1e-6)
        assert float(mid["discord"]) >= 0

    def test_noisy_sweep_columns(self, capsys):
        assert cli.main(["sweep", "--kind", "qdce", "--alpha", "1.0", "--noise", "0.01",
                         "--samples", "3", "--out", "-"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "alpha,theta,quantity,mean,std,samples,seed"
        assert len(out) == 5

    @pytest.mark.parametrize("argv", [
        [],
        ["figure3", "--kind", "nope", "--out", "-"],
        ["figure3", "--kind", "qdce"],
        ["sweep", "--kind", "qdce", "--alpha", "4", "--out", "-"],
        ["sweep", "--kind", "qdce", "--alpha", "a:b:c", "--out", "-"],
        ["figure2", "--noise", "-1", "--points", "2", "--out", "-"],
        ["pulse", "compile", "--seq", "/does/not/exist.seq"],
    ])
    def test_usage_errors(self, argv, capsys):
        assert cli.main(argv) == 2

    def test_unwritable_output(self, tmp_path, capsys):
        out = tmp_path / "missing" / "dir" / "x.csv"
        assert cli.main(["figure3", "--kind", "qdce", "--points", "2", "--out", str(out)]) == 2
        assert "cannot write" in capsys.readouterr().err

    def test_config_defaults_and_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# defaults\nkind = qcre\npoints = 2\nout = -\n")
        assert cli.main(["--config", str(cfg), "figure3"]) == 0
        first = capsys.readouterr().out
        assert len(rows(first)) == 4 + 2
        assert cli.main(["--config", str(cfg), "figure3", "--points", "3"]) == 0
        assert len(rows(capsys.readouterr().out)) == 9 + 3

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("no equals sign\n")
        assert cli.main(["--config", str(cfg), "verify"]) == 2

    @pytest.mark.parametrize("kind", ["qdce", "qcre"])
    def test_pulse_compile_check(self, kind, capsys):
        code = cli.main(["pulse", "compile", "--seq", str(reference_sequence_path(kind)),
                         "--check-against", kind, "--alpha", "60", "--theta", "120", "--degrees"])
        out = capsys.readouterr().out
        assert code == 0
        assert f"equivalent to {kind}: True" in out

    def test_pulse_compile_mismatch(self, capsys):
        code = cli.main(["pulse", "compile", "--seq", str(reference_sequence_path("qdce")),
                         "--check-against", "qcre", "--alpha", "1", "--theta", "0.5"])
        assert code == 1

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "qrealism.cli", "figure3", "--kind", "qdce",
                               "--points", "2", "--out", "-"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.count("\n") == 7


class TestVerify:
    def test_small_run_passes(self):
        lines = []
        results = verify.run(n_states=12, echo=lines.append)
        assert all(r.passed for r in results), lines
        assert all(line.startswith("PASS") and "margin=" in line for line in lines)

    def test_bound_margins_nonnegative(self):
        assert verify.check_incompatible_bound(200) >= 0

    def test_fault_injection_fails(self):
        flipped = np.array([[1, 1], [-1, 1]]) / np.sqrt(2)
        assert verify.check_stage_oracles(flipped, n=5) < 0
        lines = []
        names = {"stage states match closed forms (17x17)"}
        results = [r for r in verify.run(n_states=3, beam_splitter=flipped, echo=lines.append)]
        failed = {r.name for r in results if not r.passed}
        assert names <= failed

    def test_cli_exit_code_on_failure(self, monkeypatch, capsys):
        monkeypatch.setattr(verify, "run", lambda n: [verify.CheckResult("x", -1.0, 0.0)])
        assert cli.main(["verify", "--states", "3"]) == 1
        monkeypatch.setattr(verify, "run", lambda n: [verify.CheckResult("x", 0.0, 0.0)])
        assert cli.main(["verify", "--states", "3"]) == 0

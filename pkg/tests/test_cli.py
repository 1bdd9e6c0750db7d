import csv
import json
import math

import pytest

from curvespec import cli


def run_cli(args, out_dir):
    return cli.main(args + ["--out", str(out_dir)])


def read_csv(path):
    with open(path) as handle:
        return list(csv.reader(handle))


def test_unknown_subcommand_is_usage_error(tmp_path, capsys):
    assert cli.main(["frobnicate"]) == 2
    assert "usage error" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    assert cli.main(["circle-spectrum", "--bogus", "1"]) == 2
    capsys.readouterr()


def test_bad_parameter_exits_2(tmp_path, capsys):
    assert run_cli(["circle-spectrum", "--N", "8"], tmp_path) == 2
    capsys.readouterr()


def test_bad_geometry_exits_4(tmp_path, capsys):
    rc = run_cli(["bound-check", "--domain", "circle", "--d", "1.5"], tmp_path)
    assert rc == 4
    capsys.readouterr()


def test_circle_spectrum_outputs(tmp_path):
    assert run_cli(["circle-spectrum", "--g", "0.5", "--N", "512", "--k", "3"],
                   tmp_path) == 0
    rows = read_csv(tmp_path / "circle_spectrum.csv")
    assert rows[0] == ["index", "lambda", "circle_analytic"]
    assert len(rows) == 4
    lam1 = float(rows[1][1])
    assert lam1 == pytest.approx(4 * math.pi**2 * 0.5, abs=1e-5)
    psi_rows = read_csv(tmp_path / "circle_ground_state.csv")
    assert psi_rows[0] == ["s", "psi"]
    assert len(psi_rows) == 513
    assert float(psi_rows[1][1]) == pytest.approx(1.0, abs=1e-9)
    record = json.loads((tmp_path / "circle_spectrum_run.json").read_text())
    assert record["command"] == "circle-spectrum"
    assert record["params"]["g"] == 0.5
    assert record["seed"] == 0
    assert record["version"]
    assert str(tmp_path / "circle_spectrum.csv") in record["outputs"]


def test_stadium_sweep_rows_respect_bound(tmp_path):
    assert run_cli(["stadium-sweep", "--g", "1.5", "--eps", "0.05", "0.1",
                    "--N", "2000"], tmp_path) == 0
    rows = read_csv(tmp_path / "stadium_sweep.csv")
    assert rows[0] == ["eps", "lambda1", "lambda1_mollified", "rayleigh_bound"]
    for row in rows[1:]:
        eps, lam, lam_smooth, bound = map(float, row)
        assert bound == pytest.approx((math.pi / (0.5 - eps)) ** 2, rel=1e-12)
        assert lam <= bound + 0.5
        assert abs(lam - lam_smooth) < 5.0  # mollified companion stays nearby


def test_functional_minimize_outputs(tmp_path):
    assert run_cli(["functional-minimize", "--g", "0.2", "--N", "64",
                    "--seeds", "2", "--tol", "1e-5"], tmp_path) == 0
    payload = json.loads((tmp_path / "functional_minimize.json").read_text())
    assert payload["best"]["energy"] == pytest.approx(4 * math.pi**2 * 0.2, abs=1e-4)
    assert len(payload["restart_energies"]) == 2
    trace = read_csv(tmp_path / "functional_trace.csv")
    assert trace[0] == ["iteration", "energy", "gradient_norm"]
    energies = [float(r[1]) for r in trace[1:]]
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))


def test_critical_g_outputs(tmp_path):
    assert run_cli(["critical-g", "--g", "0.2", "1.5", "--seeds", "2",
                    "--max-iter", "30", "--N", "256", "--modes", "4"],
                   tmp_path) == 0
    rows = read_csv(tmp_path / "critical_g.csv")
    assert rows[0] == ["g", "seed", "best_lambda1", "circle_value", "gap",
                       "circle_optimal"]
    assert len(rows) == 5  # 2 couplings x 2 seeds
    summary = json.loads((tmp_path / "critical_g.json").read_text())
    assert summary["g_star"] == 1.5
    # best profiles persisted in the curvature text format, one per coupling
    from curvespec import curves
    for tag in ("0.2", "1.5"):
        profile = curves.profile_from_text(
            (tmp_path / f"best_profile_g{tag}.txt").read_text())
        assert profile.n == 256
        assert profile.winding == pytest.approx(2 * math.pi, abs=1e-10)


def test_annulus_compare_outputs(tmp_path):
    assert run_cli(["annulus-compare", "--d", "0.3", "--Ns", "48", "--Nr", "64",
                    "--seeds", "2", "--modes", "3"], tmp_path) == 0
    rows = read_csv(tmp_path / "annulus_compare.csv")
    assert rows[0] == ["seed", "orientation", "sup_dev", "lambda1",
                       "lambda1_circle", "bound", "inf_q"]
    assert len(rows) == 1 + 2 * 2  # both orientations by default
    for row in rows[1:]:
        lam, lam_circle = float(row[3]), float(row[4])
        assert lam <= lam_circle + 1e-9


def test_shell_sweep_outputs(tmp_path):
    m0 = [8 * math.pi, 9 * math.pi]
    assert run_cli(["shell-sweep", "--M0", *[str(v) for v in m0],
                    "--Nr", "512"], tmp_path) == 0
    rows = read_csv(tmp_path / "shell_sweep.csv")
    assert rows[0] == ["M0", "d", "lambda1", "lambda1_sphere", "ratio_max"]
    sphere_row, other_row = rows[1], rows[2]
    assert float(sphere_row[2]) >= float(other_row[2])
    assert float(other_row[4]) < 1.0


def test_bound_check_circle(tmp_path):
    assert run_cli(["bound-check", "--domain", "circle", "--d", "0.5",
                    "--Ns", "48", "--Nr", "96"], tmp_path) == 0
    rows = read_csv(tmp_path / "bound_check.csv")
    header, row = rows
    data = dict(zip(header, row))
    assert float(data["bound"]) == pytest.approx(math.pi**2 / 0.25 - 0.25, abs=1e-9)
    assert data["satisfied"] == "true"


def test_bound_check_domain_file(tmp_path):
    from curvespec import annulus, curves
    domain = annulus.AnnularDomain(curves.make_circle(2 * math.pi, 48), 0.4, "outer")
    path = tmp_path / "domain.json"
    path.write_text(json.dumps(annulus.domain_to_dict(domain)))
    assert run_cli(["bound-check", "--domain", str(path), "--Ns", "48",
                    "--Nr", "64"], tmp_path) == 0
    rows = read_csv(tmp_path / "bound_check.csv")
    data = dict(zip(*rows))
    assert data["orientation"] == "outer"
    assert float(data["d"]) == 0.4


def test_config_file_precedence(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"g": 1.0, "k": 2}))
    # config overrides the built-in default g = 0.5; the flag overrides config
    out_a = tmp_path / "a"
    assert cli.main(["circle-spectrum", "--N", "256", "--config", str(config),
                     "--out", str(out_a)]) == 0
    record = json.loads((out_a / "circle_spectrum_run.json").read_text())
    assert record["params"]["g"] == 1.0
    assert record["params"]["k"] == 2

    out_b = tmp_path / "b"
    assert cli.main(["circle-spectrum", "--N", "256", "--g", "0.25",
                     "--config", str(config), "--out", str(out_b)]) == 0
    record = json.loads((out_b / "circle_spectrum_run.json").read_text())
    assert record["params"]["g"] == 0.25


def test_env_var_sets_default_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV_VAR, str(tmp_path / "from-env"))
    assert cli.main(["circle-spectrum", "--N", "128", "--k", "1"]) == 0
    assert (tmp_path / "from-env" / "circle_spectrum.csv").exists()


def test_repeat_runs_are_byte_identical(tmp_path):
    args = ["critical-g", "--g", "0.2", "--seeds", "2", "--max-iter", "15",
            "--N", "256", "--modes", "3"]
    assert run_cli(list(args), tmp_path / "r1") == 0
    assert run_cli(list(args), tmp_path / "r2") == 0
    a = (tmp_path / "r1" / "critical_g.csv").read_bytes()
    b = (tmp_path / "r2" / "critical_g.csv").read_bytes()
    assert a == b

import json
import math

import numpy as np
import pytest

from equilag.cli import (
    EXIT_CONFIG,
    EXIT_DEGENERATE,
    EXIT_OK,
    EXIT_VERIFY,
    main,
    parse_config,
    render_config,
)

TORUS_PSI = 1.0 / math.sqrt(3.0)

BASE_CONFIG = """
[surface]
a1 = 2.0
psi_re = 0.70710678118654746
psi_im = 0.70710678118654757

[lambda]
re = 1.0
im = 0.0

[grid]
x_min = 0.0
x_max = 2.0
y_min = 0.0
y_max = 1.75
nx = 6
ny = 5

[tolerances]
quadrature = 1e-11
phase = 1e-8
rational_tol = 1e-8
max_den = 64

[output]
format = csv
path = out.csv
"""


class TestConfig:
    def test_round_trip_idempotent(self):
        cfg = parse_config(BASE_CONFIG)
        echoed = render_config(cfg)
        cfg2 = parse_config(echoed)
        assert cfg == cfg2
        assert render_config(cfg2) == echoed

    def test_polar_psi(self):
        cfg = parse_config(
            "[surface]\na1 = 1.0\npsi_mod = 2.0\npsi_arg = 1.5707963267948966\n"
        )
        assert cfg.psi == pytest.approx(2j)

    def test_sweep_round_trip(self):
        text = "[surface]\na1 = 2.0\npsi_re = 1.0\n[lambda]\ncount = 12\narc_end = 3.0\n"
        cfg = parse_config(text)
        assert cfg.sweep_count == 12
        assert parse_config(render_config(cfg)) == cfg

    def test_invalid_configs(self):
        from equilag.cli import ConfigError

        with pytest.raises(ConfigError):
            parse_config("[surface]\na1 = 2.0\n")  # psi missing
        with pytest.raises(ConfigError):
            parse_config("not an ini at all [[[")
        with pytest.raises(ConfigError):
            parse_config(BASE_CONFIG.replace("nx = 6", "nx = 1"))
        with pytest.raises(ConfigError):
            parse_config(BASE_CONFIG.replace("format = csv", "format = stl"))
        with pytest.raises(ConfigError):
            parse_config(BASE_CONFIG.replace("quadrature = 1e-11", "quadrature = -1"))


class TestDerive:
    def test_table(self, capsys):
        rc = main(["derive", "--a1", "2", "--psi", "1,0", "--lambda", "1,0"])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert "beta  = 4.25" in out
        assert "T     = 0.8761289105102732" in out
        assert "d_2   = 0.5" in out

    def test_json(self, capsys):
        rc = main(["derive", "--a1", "2", "--psi", "1,0", "--json"])
        assert rc == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["constants"]["beta"] == 4.25
        assert payload["classification"] == "Generic"
        assert payload["config"]["a1"] == 2.0

    def test_exit_codes(self, capsys):
        assert main(["derive", "--a1", "2", "--psi", "0,0"]) == EXIT_DEGENERATE
        assert main(["derive", "--a1", "1", "--psi", "1,0"]) == EXIT_DEGENERATE
        # hyperplane-degenerate lambda: psi = 1, lambda = e^{i pi/6}
        lam = complex(np.exp(1j * np.pi / 6))
        rc = main(["derive", "--a1", "2", "--psi", "1,0", "--lambda", f"{lam.real},{lam.imag}"])
        assert rc == EXIT_DEGENERATE
        assert main(["derive"]) == EXIT_CONFIG


class TestSample:
    def test_csv_grid(self, tmp_path, capsys):
        cfg = BASE_CONFIG.replace("nx = 6", "nx = 2").replace("ny = 5", "ny = 2")
        path = tmp_path / "job.ini"
        out = tmp_path / "grid.csv"
        path.write_text(cfg)
        rc = main(["sample", "--config", str(path), "--out", str(out)])
        assert rc == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("x,y,re_F1")
        assert len(lines) == 1 + 4  # header + 2x2 grid
        assert all(len(line.split(",")) == 14 for line in lines[1:])

    def test_deterministic_reruns(self, tmp_path):
        path = tmp_path / "job.ini"
        path.write_text(BASE_CONFIG)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sample", "--config", str(path), "--out", str(out1)]) == EXIT_OK
        assert main(["sample", "--config", str(path), "--out", str(out2)]) == EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()

    def test_obj_export(self, tmp_path):
        cfg = BASE_CONFIG.replace("format = csv", "format = obj")
        path = tmp_path / "job.ini"
        out = tmp_path / "mesh.obj"
        path.write_text(cfg)
        assert main(["sample", "--config", str(path), "--out", str(out)]) == EXIT_OK
        text = out.read_text().splitlines()
        nv = sum(1 for line in text if line.startswith("v "))
        nf = sum(1 for line in text if line.startswith("f "))
        assert nv == 6 * 5
        assert nf <= 5 * 4
        assert nf > 0

    def test_json_export_echoes_config(self, tmp_path):
        cfg = BASE_CONFIG.replace("format = csv", "format = json")
        path = tmp_path / "job.ini"
        out = tmp_path / "grid.json"
        path.write_text(cfg)
        assert main(["sample", "--config", str(path), "--out", str(out)]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["config"]["a1"] == 2.0
        assert len(payload["F"]) == 5 and len(payload["F"][0]) == 6

    def test_missing_path(self, capsys):
        rc = main(["sample", "--a1", "2", "--psi", "1,0"])
        assert rc == EXIT_CONFIG

    def test_degenerate_surface(self, tmp_path):
        path = tmp_path / "job.ini"
        path.write_text(BASE_CONFIG.replace("psi_re = 0.70710678118654746", "psi_re = 0.0")
                        .replace("psi_im = 0.70710678118654757", "psi_im = 0.0"))
        assert main(["sample", "--config", str(path)]) == EXIT_DEGENERATE


class TestClassify:
    def test_torus_benchmark(self, capsys):
        rc = main(["classify", "--a1", "1", "--psi", f"{TORUS_PSI},0", "--json"])
        assert rc == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"]["tag"] == "Torus"
        assert payload["verdict"]["p_f"] == pytest.approx(2 * math.pi * math.sqrt(3), abs=1e-9)

    def test_no_period(self, capsys):
        rc = main(["classify", "--a1", "2", "--psi", "1,0"])
        assert rc == EXIT_OK
        assert "NoPeriodFound" in capsys.readouterr().out


class TestSweep:
    def test_catalog(self, tmp_path):
        cfg = """
[surface]
a1 = 2.0
psi_re = 1.0

[lambda]
count = 36

[output]
format = csv
path = catalog.csv
"""
        path = tmp_path / "job.ini"
        out = tmp_path / "catalog.csv"
        path.write_text(cfg)
        assert main(["sweep", "--config", str(path), "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert len(lines) == 37
        flagged = [line for line in lines[1:] if "HyperplaneDegenerateError" in line]
        assert len(flagged) == 6  # 36 samples hit all six degenerate angles

    def test_sweep_without_count(self, tmp_path, capsys):
        rc = main(["sweep", "--a1", "2", "--psi", "1,0", "--out", str(tmp_path / "x.csv")])
        assert rc == EXIT_CONFIG


class TestVerify:
    def test_subset_passes(self, capsys):
        rc = main([
            "verify", "--a1", "2", "--psi", "0.70710678118654746,0.70710678118654757",
            "--suites", "metric,potential",
        ])
        assert rc == EXIT_OK
        out = capsys.readouterr().out
        assert "[suite:metric] PASS" in out
        assert "[suite:potential] PASS" in out

    def test_corrupt_kappa_fails(self, capsys):
        rc = main([
            "verify", "--a1", "2", "--psi", "0.70710678118654746,0.70710678118654757",
            "--suites", "iwasawa", "--debug-corrupt-kappa",
        ])
        assert rc == EXIT_VERIFY
        assert "[suite:iwasawa] FAIL" in capsys.readouterr().out

    def test_unknown_suite(self, capsys):
        rc = main(["verify", "--a1", "2", "--psi", "1,1", "--suites", "nope"])
        assert rc == EXIT_CONFIG

    def test_verify_json(self, capsys):
        rc = main([
            "verify", "--a1", "2", "--psi", "0.70710678118654746,0.70710678118654757",
            "--suites", "elliptic", "--json",
        ])
        assert rc == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["passed"] is True
        assert payload["suites"][0]["name"] == "elliptic"

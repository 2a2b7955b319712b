import json
import re

import numpy as np
import pytest

from kerrcat import __version__
from kerrcat.cli import ConfigError, RunConfig, _grid, main

TWO_PI = 2.0 * np.pi

HEADER_RE = re.compile(rf"^# kerrcat {re.escape(__version__)} config=[0-9a-f]{{16}}$")


def write_config(tmp_path, **fields):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(fields))
    return str(path)


def read_csv(path):
    lines = path.read_text().splitlines()
    assert HEADER_RE.match(lines[0]), lines[0]
    columns = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return columns, rows


class TestRunConfig:
    def test_defaults_valid(self):
        cfg = RunConfig()
        assert cfg.params.alpha == pytest.approx(np.sqrt(15.5 / 6.7))

    def test_dict_round_trip(self):
        cfg = RunConfig(
            eps_MHz=0.74,
            delta_MHz=-0.1,
            dim=24,
            initial=("coherent",),
            eps_grid_MHz={"start": 0.0, "stop": 0.002, "num": 7},
            lep3_seed_MHz=(0.0015, 0.29),
        )
        direct = RunConfig.from_dict(cfg.to_dict())
        assert direct == cfg
        # lossless through the JSON text representation too
        assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError, match="unknown config fields"):
            RunConfig.from_dict({"frequency_MHz": 3.0})

    def test_invalid_values_rejected(self):
        with pytest.raises(ConfigError, match="dim"):
            RunConfig(dim=1)
        with pytest.raises(ConfigError, match="workers"):
            RunConfig(workers=0)
        with pytest.raises(ConfigError, match="kappa"):
            RunConfig(kappa=-0.1)
        with pytest.raises(ConfigError, match="initial"):
            RunConfig(initial=("fock",))
        with pytest.raises(ConfigError, match="wigner state"):
            RunConfig(state="bell")
        with pytest.raises(ConfigError, match="K_MHz"):
            RunConfig(K_MHz=0.0)

    def test_hash_ignores_execution_plumbing(self):
        a = RunConfig(dim=20)
        b = RunConfig(dim=20, workers=4, out_dir="/somewhere/else")
        c = RunConfig(dim=24)
        assert a.config_hash() == b.config_hash()
        assert a.config_hash() != c.config_hash()

    def test_unit_conversions(self):
        cfg = RunConfig(K_MHz=6.7, P_MHz=15.5, kappa=1 / 15.5, eps_MHz=0.74, delta_MHz=0.2)
        p = cfg.params
        assert p.kerr == pytest.approx(TWO_PI * 6.7)
        assert p.two_photon == pytest.approx(TWO_PI * 15.5)
        assert p.drive == pytest.approx(TWO_PI * 0.74)
        assert p.delta == pytest.approx(TWO_PI * 0.2)
        assert p.kappa == pytest.approx(1 / 15.5)
        angular = RunConfig(kappa=0.01, kappa_angular=True).params
        assert angular.kappa == pytest.approx(TWO_PI * 0.01)


class TestGrid:
    def test_linspace_spec(self):
        g = _grid({"start": 0.0, "stop": 1.0, "num": 5}, -1, 1, 3)
        np.testing.assert_allclose(g, np.linspace(0, 1, 5))

    def test_default_when_missing(self):
        np.testing.assert_allclose(_grid(None, -1.0, 1.0, 3), [-1.0, 0.0, 1.0])

    def test_explicit_values(self):
        np.testing.assert_allclose(_grid({"values": [3.0, 1.0]}, 0, 0, 1), [3.0, 1.0])

    def test_empty_and_malformed(self):
        with pytest.raises(ConfigError, match="empty grid"):
            _grid({"start": 0, "stop": 1, "num": 0}, 0, 1, 2)
        with pytest.raises(ConfigError, match="at least one"):
            _grid({"values": []}, 0, 1, 2)
        with pytest.raises(ConfigError, match="start/stop/num"):
            _grid({"lo": 0}, 0, 1, 2)
        with pytest.raises(ConfigError, match="finite"):
            _grid({"start": 0, "stop": float("inf"), "num": 2}, 0, 1, 2)


class TestSpectrumCommand:
    def test_writes_sorted_grid(self, tmp_path):
        cfg = write_config(
            tmp_path,
            eps_grid_MHz={"start": -0.002, "stop": 0.002, "num": 3},
            delta_grid_MHz={"start": -0.3, "stop": 0.3, "num": 4},
        )
        out = tmp_path / "run"
        assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
        columns, rows = read_csv(out / "spectrum.csv")
        assert columns == ["eps", "delta", "re_E2", "im_E2", "re_E3", "im_E3", "re_E4", "im_E4", "q", "m"]
        assert len(rows) == 12
        coords = [(float(r[0]), float(r[1])) for r in rows]
        assert coords == sorted(coords)
        summary = json.loads((out / "summary.json").read_text())
        assert summary["ok"] is True
        assert summary["command"] == "spectrum"
        assert summary["rows"] == 12

    def test_numeric_cross_check(self, tmp_path):
        cfg = write_config(
            tmp_path,
            eps_grid_MHz={"start": 0.0, "stop": 0.002, "num": 3},
            delta_grid_MHz={"start": 0.0, "stop": 0.3, "num": 3},
            numeric=True,
        )
        out = tmp_path / "run"
        assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
        columns, _rows = read_csv(out / "spectrum.csv")
        assert columns[-6:] == ["re_E2_num", "im_E2_num", "re_E3_num", "im_E3_num", "re_E4_num", "im_E4_num"]
        summary = json.loads((out / "summary.json").read_text())
        check = summary["checks"]["closed_vs_numeric"]
        assert check["pass"] is True
        assert check["value"] < 1e-9

    def test_empty_grid_is_config_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path, eps_grid_MHz={"start": 0, "stop": 1, "num": 0})
        assert main(["spectrum", "--config", cfg, "--out", str(tmp_path / "x")]) == 2
        assert "empty grid" in capsys.readouterr().err


class TestEpMapCommand:
    def test_curves_and_lep3_images(self, tmp_path):
        out = tmp_path / "run"
        assert main(["ep-map", "--out", str(out)]) == 0
        columns, rows = read_csv(out / "ep_map.csv")
        assert columns == ["eps", "delta", "order", "disc_residual", "q", "m", "coalescence"]
        orders = [int(r[2]) for r in rows]
        assert orders.count(3) == 4
        assert orders.count(2) == len(rows) - 4
        summary = json.loads((out / "summary.json").read_text())
        assert summary["checks"]["four_lep3_images"]["pass"] is True
        assert summary["checks"]["min_lep2_coalescence"]["pass"] is True
        eps3 = {round(p["eps"], 12) for p in summary["lep3_points"]}
        assert len(eps3) == 2  # +eps3 and -eps3 images


class TestLep3Command:
    def test_numeric_agrees_with_closed_form(self, tmp_path):
        out = tmp_path / "run"
        assert main(["lep3", "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["checks"]["closed_vs_numeric_rel"]["pass"] is True
        columns, rows = read_csv(out / "lep3.csv")
        assert len(rows) == 5
        assert all(int(r[2]) == 3 for r in rows)

    def test_explicit_seed(self, tmp_path):
        cfg = write_config(tmp_path, lep3_seed_MHz=[0.0016, 0.27])
        out = tmp_path / "run"
        assert main(["lep3", "--config", cfg, "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["checks"]["closed_vs_numeric_rel"]["pass"] is True


class TestWindingCommand:
    def test_default_contour_winds_once(self, tmp_path):
        out = tmp_path / "run"
        assert main(["winding", "--out", str(out)]) == 0
        payload = json.loads((out / "winding.json").read_text())
        assert payload["W"] == -1
        assert abs(payload["raw"] - payload["W"]) < 1e-3
        assert payload["config_hash"] == json.loads((out / "summary.json").read_text())["config_hash"]
        columns, rows = read_csv(out / "winding_trajectory.csv")
        assert columns == ["phi", "r1_norm", "r2_norm"]
        first, last = rows[0], rows[-1]
        assert float(last[0]) == pytest.approx(TWO_PI)
        assert float(first[1]) == pytest.approx(float(last[1]), abs=1e-9)
        norms = [np.hypot(float(r[1]), float(r[2])) for r in rows]
        assert max(abs(n - 1.0) for n in norms) < 1e-12

    def test_non_enclosing_contour_winds_zero(self, tmp_path):
        cfg = write_config(
            tmp_path,
            contour={"center_eps_MHz": 0.00225, "center_delta_MHz": 0.0, "radius_MHz": 0.00045},
        )
        out = tmp_path / "run"
        assert main(["winding", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "winding.json").read_text())
        assert payload["W"] == 0

    def test_contour_through_ep_is_numeric_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path, contour={"radius_MHz": 7.5e-5, "samples": 64})
        assert main(["winding", "--config", cfg, "--out", str(tmp_path / "x")]) == 3
        assert "resultant zero" in capsys.readouterr().err

    def test_unknown_contour_field(self, tmp_path):
        cfg = write_config(tmp_path, contour={"diameter_MHz": 1.0})
        assert main(["winding", "--config", cfg, "--out", str(tmp_path / "x")]) == 2


class TestFidelityCommand:
    CONFIG = dict(
        eps_MHz=0.74,
        delta_grid_MHz={"start": -0.2, "stop": 0.2, "num": 3},
        t_grid_us={"start": 0.0, "stop": 2.0, "num": 5},
        dim=20,
    )

    def test_per_initial_files(self, tmp_path):
        cfg = write_config(tmp_path, initial=["catplus", "coherent"], **self.CONFIG)
        out = tmp_path / "run"
        assert main(["fidelity", "--config", cfg, "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["files"] == ["fidelity_catplus.csv", "fidelity_coherent.csv"]
        for name in ("catplus", "coherent"):
            columns, rows = read_csv(out / f"fidelity_{name}.csv")
            assert columns == ["delta_MHz", "t_us", "fidelity", "leakage"]
            assert len(rows) == 15
            # coordinates are reported in cyclic MHz
            deltas = sorted({float(r[0]) for r in rows})
            np.testing.assert_allclose(deltas, [-0.2, 0.0, 0.2], atol=1e-12)
            for r in rows:
                if float(r[1]) == 0.0:
                    assert float(r[2]) > 1.0 - 1e-9
            assert summary["checks"][f"{name}_min_fidelity"]["pass"] is True

    def test_initial_flag_overrides(self, tmp_path):
        cfg = write_config(tmp_path, **self.CONFIG)
        out = tmp_path / "run"
        assert main(["fidelity", "--config", cfg, "--out", str(out), "--initial", "coherent"]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["files"] == ["fidelity_coherent.csv"]


class TestWignerCommand:
    def test_cat_map_normalized(self, tmp_path):
        cfg = write_config(
            tmp_path,
            dim=30,
            x_grid={"start": -4, "stop": 4, "num": 41},
            p_grid={"start": -4, "stop": 4, "num": 41},
        )
        out = tmp_path / "run"
        assert main(["wigner", "--config", cfg, "--out", str(out)]) == 0
        columns, rows = read_csv(out / "wigner.csv")
        assert columns == ["x", "p", "w"]
        assert len(rows) == 41 * 41
        summary = json.loads((out / "summary.json").read_text())
        assert summary["checks"]["normalization"]["pass"] is True
        assert summary["state"] == "catplus"

    def test_steady_subject(self, tmp_path):
        cfg = write_config(
            tmp_path,
            dim=20,
            x_grid={"start": -3, "stop": 3, "num": 21},
            p_grid={"start": -3, "stop": 3, "num": 21},
        )
        out = tmp_path / "run"
        assert main(["wigner", "--config", cfg, "--out", str(out), "--state", "steady"]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["state"] == "steady"


class TestSteadyStateCommand:
    def test_populations_and_observables(self, tmp_path):
        cfg = write_config(tmp_path, dim=20, eps_MHz=0.0, delta_MHz=0.0)
        out = tmp_path / "run"
        assert main(["steady-state", "--config", cfg, "--out", str(out)]) == 0
        columns, rows = read_csv(out / "steady_populations.csv")
        assert columns == ["n", "population"]
        assert len(rows) == 20
        total = sum(float(r[1]) for r in rows)
        assert abs(total - 1.0) < 1e-10
        summary = json.loads((out / "summary.json").read_text())
        assert summary["checks"]["residual"]["pass"] is True
        alpha_sq = 15.5 / 6.7
        assert abs(summary["photon_number"] - alpha_sq) < 0.01

    def test_full_spectrum_dump(self, tmp_path):
        cfg = write_config(tmp_path, dim=12, eps_MHz=0.0, delta_MHz=0.0)
        out = tmp_path / "run"
        assert main(["steady-state", "--config", cfg, "--out", str(out), "--full-spectrum"]) == 0
        columns, rows = read_csv(out / "spectrum_full.csv")
        assert columns == ["index", "re_E", "im_E"]
        assert len(rows) == 144
        summary = json.loads((out / "summary.json").read_text())
        assert summary["checks"]["spectrum_stable"]["pass"] is True

    def test_kappa_zero_is_numeric_error(self, tmp_path):
        cfg = write_config(tmp_path, dim=12, kappa=0.0)
        assert main(["steady-state", "--config", cfg, "--out", str(tmp_path / "x")]) == 3


class TestErrorPaths:
    def test_invalid_json_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["spectrum", "--config", str(bad), "--out", str(tmp_path / "x")]) == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_unknown_config_field(self, tmp_path):
        cfg = write_config(tmp_path, frequency_MHz=3.0)
        assert main(["spectrum", "--config", cfg, "--out", str(tmp_path / "x")]) == 2

    def test_unwritable_out_dir(self, tmp_path):
        block = tmp_path / "blockfile"
        block.write_text("x")
        assert main(["ep-map", "--out", str(block)]) == 4

    def test_missing_command_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2


class TestDeterminism:
    def test_fidelity_bytes_invariant_under_workers(self, tmp_path):
        base = dict(
            eps_MHz=0.74,
            delta_grid_MHz={"start": -0.2, "stop": 0.2, "num": 2},
            t_grid_us={"start": 0.0, "stop": 1.0, "num": 3},
            dim=20,
            initial=["catplus"],
        )
        blobs = []
        for tag, workers in (("a", 1), ("b", 2), ("c", 1)):
            cfg = write_config(tmp_path, workers=workers, **base)
            out = tmp_path / tag
            assert main(["fidelity", "--config", cfg, "--out", str(out)]) == 0
            blobs.append((out / "fidelity_catplus.csv").read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]

    def test_spectrum_rerun_identical(self, tmp_path):
        cfg = write_config(
            tmp_path,
            eps_grid_MHz={"start": 0, "stop": 0.002, "num": 4},
            delta_grid_MHz={"start": 0, "stop": 0.3, "num": 4},
        )
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["spectrum", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["spectrum", "--config", cfg, "--out", str(out2)]) == 0
        assert (out1 / "spectrum.csv").read_bytes() == (out2 / "spectrum.csv").read_bytes()

import math
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from superres import PsfModel, optimal_alpha
from superres.cli import (ConfigError, config_hash, load_config,
                          resolved_alpha, resolved_psf, run)

DROP = object()

DEFAULTS = {
    "scene": {"x0": -7.5e-6, "s": 15e-6, "z0": 1.0, "epsilon": 0.5,
              "lambda": 848.2e-9},
    "baseline": {"d1": 2.65e-3, "d2": -2.65e-3},
    "interferometer": {"alpha": "optimal", "nu": 0.975},
    "run": {"n_photons": 2000, "n_trials": 4, "seed": 42, "delta": 0.05,
            "psf_sigma": "auto", "output_dir": "out"},
}


def _toml_value(value) -> str:
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value)


def write_config(tmp_path: Path, overrides: dict | None = None,
                 name: str = "run.toml") -> Path:
    tables = {sec: dict(keys) for sec, keys in DEFAULTS.items()}
    tables["run"]["output_dir"] = str(tmp_path / "out")
    for sec, keys in (overrides or {}).items():
        tables.setdefault(sec, {})
        for key, value in keys.items():
            if value is DROP:
                tables[sec].pop(key, None)
            else:
                tables[sec][key] = value
    lines = []
    for sec, keys in tables.items():
        lines.append(f"[{sec}]")
        lines.extend(f"{k} = {_toml_value(v)}" for k, v in keys.items())
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


class TestLoadConfig:

    def test_round_trip(self, tmp_path):
        cfg = load_config(write_config(tmp_path))
        assert cfg.scene.s == 15e-6
        assert cfg.scene.x0 == -7.5e-6
        assert cfg.scene.wavelength == 848.2e-9
        assert cfg.baseline.d1 == 2.65e-3
        assert cfg.alpha_setting == "optimal"
        assert cfg.nu == 0.975
        assert cfg.n_photons == 2000
        assert cfg.n_trials == 4
        assert cfg.seed == 42
        assert cfg.delta == 0.05
        assert cfg.psf_sigma_setting == "auto"
        assert cfg.output_dir == str(tmp_path / "out")

    def test_missing_key_named(self, tmp_path):
        path = write_config(tmp_path, {"scene": {"z0": DROP}})
        with pytest.raises(ConfigError, match=r"scene\.z0"):
            load_config(path)

    def test_missing_section_named(self, tmp_path):
        path = write_config(tmp_path)
        text = path.read_text().replace("[baseline]", "[baseline_off]")
        path.write_text(text)
        with pytest.raises(ConfigError, match="baseline"):
            load_config(path)

    def test_unknown_key_named(self, tmp_path):
        path = write_config(tmp_path, {"scene": {"foo": 1.0}})
        with pytest.raises(ConfigError,
                           match=r"unknown config key\(s\): scene\.foo"):
            load_config(path)

    def test_unknown_section_named(self, tmp_path):
        path = write_config(tmp_path, {"extra": {"x": 1.0}})
        with pytest.raises(ConfigError, match="unknown config section"):
            load_config(path)

    def test_wrong_types_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="must be a number"):
            load_config(write_config(tmp_path, {"scene": {"x0": "wide"}}))
        with pytest.raises(ConfigError, match="must be an integer"):
            load_config(write_config(tmp_path, {"run": {"n_photons": 2.5}}))
        with pytest.raises(ConfigError, match="must be an integer"):
            load_config(write_config(tmp_path, {"run": {"n_photons": True}}))
        with pytest.raises(ConfigError, match="must be a string"):
            load_config(write_config(tmp_path, {"run": {"output_dir": 3}}))

    def test_alpha_literal_or_number(self, tmp_path):
        cfg = load_config(write_config(tmp_path,
                                       {"interferometer": {"alpha": 0.25}}))
        assert cfg.alpha_setting == 0.25
        assert resolved_alpha(cfg) == 0.25
        with pytest.raises(ConfigError, match="optimal"):
            load_config(write_config(tmp_path,
                                     {"interferometer": {"alpha": "best"}}))

    @pytest.mark.parametrize("section,key,value", [
        ("interferometer", "nu", 1.5),
        ("interferometer", "nu", -0.1),
        ("run", "delta", 0.0),
        ("run", "delta", 0.6),
        ("run", "psf_sigma", -1e-5),
        ("run", "n_trials", 0),
        ("run", "n_photons", -5),
    ])
    def test_range_checks(self, tmp_path, section, key, value):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, {section: {key: value}}))

    def test_malformed_toml(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("[scene\nz0 = 1.0\n")
        with pytest.raises(ConfigError, match="not valid TOML"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.toml")

    def test_scene_validation_surfaces(self, tmp_path):
        # bad physical values pass TOML parsing but fail scene validation
        with pytest.raises(ValueError):
            load_config(write_config(tmp_path, {"scene": {"epsilon": 1.5}}))


class TestResolvedSettings:

    def test_optimal_alpha_resolution(self, tmp_path):
        cfg = load_config(write_config(tmp_path))
        assert resolved_alpha(cfg) == optimal_alpha(cfg.scene, cfg.baseline)
        # centroid of this scene sits on axis, so the best phase is zero
        assert resolved_alpha(cfg) == pytest.approx(0.0, abs=1e-18)

    def test_auto_psf_resolution(self, tmp_path):
        cfg = load_config(write_config(tmp_path))
        assert resolved_psf(cfg).sigma == pytest.approx(
            0.42 * 848.2e-9 / 5.3e-3, rel=1e-12)
        explicit = load_config(write_config(tmp_path,
                                            {"run": {"psf_sigma": 1e-4}}))
        assert resolved_psf(explicit).sigma == 1e-4
        assert isinstance(resolved_psf(explicit), PsfModel)

    def test_config_hash_stable_and_sensitive(self, tmp_path):
        path = write_config(tmp_path)
        h1 = config_hash(load_config(path))
        h2 = config_hash(load_config(path))
        assert h1 == h2
        assert len(h1) == 64 and set(h1) <= set("0123456789abcdef")
        other = write_config(tmp_path, {"run": {"seed": 43}}, name="b.toml")
        assert config_hash(load_config(other)) != h1


def _entropy_table(captured: str) -> dict:
    table = {}
    for line in captured.splitlines():
        parts = line.split()
        if len(parts) == 3:
            table[parts[0]] = float(parts[1])
    return table


class TestEntropyCommand:

    def test_prints_table(self, tmp_path, capsys):
        assert run(["entropy", "--config",
                    str(write_config(tmp_path))]) == 0
        table = _entropy_table(capsys.readouterr().out)
        for key in ("qre_exact", "qre_small_angle", "cre_at_alpha", "cre_max",
                    "di_approx", "di_numeric", "alpha_used", "alpha_star",
                    "theta", "psf_sigma"):
            assert key in table
        assert table["theta"] == pytest.approx(1.5e-5, rel=1e-12)
        assert table["cre_max"] <= table["qre_exact"] + 1e-15

    def test_bits_flag_rescales(self, tmp_path, capsys):
        path = write_config(tmp_path)
        run(["entropy", "--config", str(path)])
        nats = _entropy_table(capsys.readouterr().out)
        run(["entropy", "--config", str(path), "--bits"])
        bits = _entropy_table(capsys.readouterr().out)
        assert bits["qre_exact"] == pytest.approx(
            nats["qre_exact"] / math.log(2.0), rel=1e-6)
        # phases and angles are not entropies and must not be rescaled
        assert bits["theta"] == nats["theta"]


class TestExitCodes:

    def test_missing_config_file(self, tmp_path, capsys):
        assert run(["entropy", "--config", str(tmp_path / "nope.toml")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_toml(self, tmp_path, capsys):
        path = tmp_path / "broken.toml"
        path.write_text("[scene\n")
        assert run(["entropy", "--config", str(path)]) == 2

    def test_bad_value(self, tmp_path, capsys):
        path = write_config(tmp_path, {"interferometer": {"nu": 2.0}})
        assert run(["entropy", "--config", str(path)]) == 2

    def test_numerical_failure(self, tmp_path, capsys):
        # zero visibility leaves the posterior flat: a numerics failure,
        # not a configuration one
        path = write_config(tmp_path, {"interferometer": {"nu": 0.0}})
        assert run(["estimate", "--config", str(path)]) == 3
        assert "numerical failure" in capsys.readouterr().err


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def _read_meta(path: Path) -> dict:
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


class TestEstimateCommand:

    def test_artifacts_and_contents(self, tmp_path, capsys):
        path = write_config(tmp_path)
        assert run(["estimate", "--config", str(path)]) == 0
        out = capsys.readouterr().out
        assert "mse=" in out and "n*qfi*mse" in out
        out_dir = tmp_path / "out"
        header, rows = _read_csv(out_dir / "estimate.csv")
        assert header == ["trial", "phi_hat", "theta_hat", "n_events",
                          "r_used", "seed"]
        assert [r[0] for r in rows] == ["0", "1", "2", "3"]
        assert {r[3] for r in rows} == {"2000"}
        assert {r[4] for r in rows} == {"0.975"}
        assert {r[5] for r in rows} == {"42"}
        for r in rows:
            assert float(r[2]) == pytest.approx(1.5e-5, rel=0.5)
        schema_lines = (out_dir / "estimate.schema.txt").read_text().splitlines()
        assert schema_lines[0] == "column,unit,description"
        assert len(schema_lines) == 1 + len(header)
        meta = _read_meta(out_dir / "estimate.meta.txt")
        assert meta["command"] == "estimate"
        assert meta["seed"] == "42"
        assert meta["generator"] == "numpy-pcg64"
        assert meta["config_hash"] == config_hash(load_config(path))
        assert "version" in meta

    def test_reruns_are_byte_identical(self, tmp_path):
        path = write_config(tmp_path)
        run(["estimate", "--config", str(path), "--out", str(tmp_path / "a")])
        run(["estimate", "--config", str(path), "--out", str(tmp_path / "b")])
        for name in ("estimate.csv", "estimate.schema.txt",
                     "estimate.meta.txt"):
            assert (tmp_path / "a" / name).read_bytes() \
                == (tmp_path / "b" / name).read_bytes()

    def test_worker_count_does_not_change_output(self, tmp_path):
        path = write_config(tmp_path)
        run(["estimate", "--config", str(path), "--workers", "1",
             "--out", str(tmp_path / "w1")])
        run(["estimate", "--config", str(path), "--workers", "3",
             "--out", str(tmp_path / "w3")])
        assert (tmp_path / "w1" / "estimate.csv").read_bytes() \
            == (tmp_path / "w3" / "estimate.csv").read_bytes()

    def test_seed_override(self, tmp_path):
        path = write_config(tmp_path)
        run(["estimate", "--config", str(path), "--out", str(tmp_path / "s42")])
        run(["estimate", "--config", str(path), "--seed", "7",
             "--out", str(tmp_path / "s7")])
        assert (tmp_path / "s42" / "estimate.csv").read_bytes() \
            != (tmp_path / "s7" / "estimate.csv").read_bytes()
        assert _read_meta(tmp_path / "s7" / "estimate.meta.txt")["seed"] == "7"


class TestDiscriminateCommand:

    def test_single_row_artifact(self, tmp_path, capsys):
        path = write_config(tmp_path, {
            "scene": {"x0": 0.0, "s": 59e-6, "epsilon": 0.1},
            "interferometer": {"nu": 1.0},
            "run": {"n_photons": 5000},
        })
        assert run(["discriminate", "--config", str(path), "--smoke"]) == 0
        out = capsys.readouterr().out
        assert "threshold=" in out and "alpha_hat=" in out
        header, rows = _read_csv(tmp_path / "out" / "discriminate.csv")
        assert header == ["n", "delta", "trials", "seed", "threshold",
                          "alpha_hat", "beta_hat", "log_beta_hat",
                          "first_order", "second_order", "d_classical",
                          "v_classical"]
        assert len(rows) == 1
        values = dict(zip(header, rows[0]))
        assert values["n"] == "5000"
        assert float(values["alpha_hat"]) <= 0.06
        assert float(values["d_classical"]) > 0.0
        assert float(values["log_beta_hat"]) < 0.0


class TestThermalCommand:

    def test_two_variant_rows(self, tmp_path, capsys):
        path = write_config(tmp_path)
        assert run(["thermal-check", "--config", str(path),
                    "--samples", "20000"]) == 0
        assert "g2_thermal" in capsys.readouterr().out
        header, rows = _read_csv(tmp_path / "out" / "thermal.csv")
        assert header == ["variant", "nbar", "n_samples", "g2"]
        assert [r[0] for r in rows] == ["gaussian", "fixed_amplitude"]
        assert {r[2] for r in rows} == {"20000"}
        assert float(rows[0][3]) == pytest.approx(2.0, abs=0.15)
        assert float(rows[1][3]) == pytest.approx(1.0, abs=1e-9)


class TestFigureCommand:

    HEADERS = {
        "fig4": ["alpha", "p_a_model", "p_a_sim", "n_events"],
        "fig5": ["epsilon", "qre", "cre_opt", "alpha_star", "cre_empirical",
                 "di_approx", "di_numeric"],
        "fig6": ["phi", "density"],
        "fig7": ["theta", "n_trials", "n_events", "mse", "variance",
                 "bias_sq", "crb_quantum", "crb_classical", "fisher_ratio"],
    }

    @pytest.mark.parametrize("kind", ["fig4", "fig5", "fig6", "fig7"])
    def test_artifact_set(self, tmp_path, kind):
        path = write_config(tmp_path)
        out_dir = tmp_path / "out"
        assert run(["figure", "--config", str(path), "--kind", kind,
                    "--smoke"]) == 0
        header, rows = _read_csv(out_dir / f"{kind}.csv")
        assert header == self.HEADERS[kind]
        assert rows
        meta = _read_meta(out_dir / f"{kind}.meta.txt")
        assert meta["command"] == f"figure {kind}"
        assert meta["generator"] == "numpy-pcg64"
        schema_lines = (out_dir / f"{kind}.schema.txt").read_text().splitlines()
        assert len(schema_lines) == 1 + len(header)

    def test_fig6_meta_carries_estimates(self, tmp_path):
        path = write_config(tmp_path)
        run(["figure", "--config", str(path), "--kind", "fig6", "--smoke"])
        meta = _read_meta(tmp_path / "out" / "fig6.meta.txt")
        n_a, n_b = int(meta["n_a"]), int(meta["n_b"])
        assert n_a + n_b == 2000
        assert float(meta["phi_hat"]) >= 0.0
        assert float(meta["theta_hat"]) >= 0.0

    def test_fig5_worker_equality(self, tmp_path):
        path = write_config(tmp_path)
        run(["figure", "--config", str(path), "--kind", "fig5", "--smoke",
             "--workers", "1", "--out", str(tmp_path / "w1")])
        run(["figure", "--config", str(path), "--kind", "fig5", "--smoke",
             "--workers", "3", "--out", str(tmp_path / "w3")])
        assert (tmp_path / "w1" / "fig5.csv").read_bytes() \
            == (tmp_path / "w3" / "fig5.csv").read_bytes()


class TestEntryPoints:

    def test_module_invocation(self):
        proc = subprocess.run([sys.executable, "-m", "superres.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "discriminate" in proc.stdout

    @pytest.mark.skipif(shutil.which("superres") is None,
                        reason="console script not on PATH")
    def test_console_script(self):
        proc = subprocess.run(["superres", "--help"], capture_output=True,
                              text=True)
        assert proc.returncode == 0
        assert "estimate" in proc.stdout

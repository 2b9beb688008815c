"""Command line driver for configured runs.

Subcommands:

* ``entropy``: per-photon information table for one configuration.
* ``discriminate``: calibrate the one-vs-two-source test and Monte Carlo
  its error probabilities.
* ``estimate``: repeated separation-estimation trials.
* ``thermal-check``: photon statistics of the pseudo-thermal source model.
* ``figure``: regenerate the data files behind the summary figures
  (``fig4`` fringe scan, ``fig5`` information vs secondary brightness,
  ``fig6`` phase posterior, ``fig7`` estimation error vs separation).

Runs are configured by a TOML file (:func:`load_config`) and are fully
deterministic given that file and the seed: derived random streams use
spawn keys, so results do not depend on worker count or scheduling.
Artifacts are CSV tables, each with a ``.schema.txt`` sidecar naming the
columns and units and a ``.meta.txt`` record with the config hash, seed,
and generator id.

Exit codes: 0 on success, 2 for configuration or validation problems,
3 for numerical failures.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .errors import ConfigError, NumericsError
from .inference import (estimate_theta, map_phase, mse, posterior_from_counts,
                        run_discrimination, run_estimation_trial)
from .measurement import (Interferometer, OutcomeDist, PsfModel,
                          classical_fisher_info, classical_relative_entropy,
                          cre_of_measurement, di_relative_entropy,
                          fringe_probs, hypothesis_probs, maximize_cre,
                          outcome_probs)
from .quantum import qfi_closed_form, qre_exact, qre_small_angle
from .scene import Baseline, Scene, optimal_alpha, phases
from .simulate import (GENERATOR_ID, g2_zero, sample_thermal, simulate_events)

LN2 = math.log(2.0)

_SECTIONS = ("scene", "baseline", "interferometer", "run")


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Validated contents of a run configuration file."""

    scene: Scene
    baseline: Baseline
    alpha_setting: float | str
    nu: float
    n_photons: int
    n_trials: int
    seed: int
    delta: float
    psf_sigma_setting: float | str
    output_dir: str
    raw: dict


@dataclass(frozen=True)
class RunReport:
    """What a subcommand did: inputs identification plus artifact paths."""

    command: str
    config_hash: str
    seed: int
    outputs: tuple[str, ...]


def _section(raw: dict, name: str) -> dict:
    if name not in raw:
        raise ConfigError(f"missing config section [{name}]")
    if not isinstance(raw[name], dict):
        raise ConfigError(f"config section [{name}] must be a table")
    return dict(raw[name])


def _pop_number(table: dict, section: str, key: str) -> float:
    if key not in table:
        raise ConfigError(f"missing config key {section}.{key}")
    value = table.pop(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {section}.{key} must be a number, "
                          f"got {value!r}")
    return float(value)


def _pop_int(table: dict, section: str, key: str) -> int:
    if key not in table:
        raise ConfigError(f"missing config key {section}.{key}")
    value = table.pop(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"config key {section}.{key} must be an integer, "
                          f"got {value!r}")
    return value


def _pop_string(table: dict, section: str, key: str) -> str:
    if key not in table:
        raise ConfigError(f"missing config key {section}.{key}")
    value = table.pop(key)
    if not isinstance(value, str):
        raise ConfigError(f"config key {section}.{key} must be a string, "
                          f"got {value!r}")
    return value


def _pop_number_or(table: dict, section: str, key: str,
                   literal: str) -> float | str:
    if key not in table:
        raise ConfigError(f"missing config key {section}.{key}")
    if isinstance(table[key], str):
        value = table.pop(key)
        if value != literal:
            raise ConfigError(f"config key {section}.{key} must be a number "
                              f"or {literal!r}, got {value!r}")
        return value
    return _pop_number(table, section, key)


def _no_leftovers(table: dict, section: str) -> None:
    if table:
        names = ", ".join(f"{section}.{key}" for key in sorted(table))
        raise ConfigError(f"unknown config key(s): {names}")


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate a TOML run configuration.

    Required layout: ``[scene]`` with x0, s, z0, epsilon, lambda (meters
    and a dimensionless brightness fraction); ``[baseline]`` with d1, d2
    (meters); ``[interferometer]`` with alpha (rad, or the string
    "optimal") and nu; ``[run]`` with n_photons, n_trials, seed, delta,
    psf_sigma (rad, or "auto") and output_dir.  Unknown sections or keys
    are rejected by name.
    """
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from None

    unknown = sorted(set(raw) - set(_SECTIONS))
    if unknown:
        raise ConfigError("unknown config section(s): " + ", ".join(unknown))

    scene_tbl = _section(raw, "scene")
    scene = Scene(x0=_pop_number(scene_tbl, "scene", "x0"),
                  s=_pop_number(scene_tbl, "scene", "s"),
                  z0=_pop_number(scene_tbl, "scene", "z0"),
                  epsilon=_pop_number(scene_tbl, "scene", "epsilon"),
                  wavelength=_pop_number(scene_tbl, "scene", "lambda"))
    _no_leftovers(scene_tbl, "scene")

    base_tbl = _section(raw, "baseline")
    baseline = Baseline(d1=_pop_number(base_tbl, "baseline", "d1"),
                        d2=_pop_number(base_tbl, "baseline", "d2"))
    _no_leftovers(base_tbl, "baseline")

    ifo_tbl = _section(raw, "interferometer")
    alpha_setting = _pop_number_or(ifo_tbl, "interferometer", "alpha", "optimal")
    nu = _pop_number(ifo_tbl, "interferometer", "nu")
    _no_leftovers(ifo_tbl, "interferometer")
    if not 0.0 <= nu <= 1.0:
        raise ConfigError(f"config key interferometer.nu must lie in [0, 1], "
                          f"got {nu}")

    run_tbl = _section(raw, "run")
    n_photons = _pop_int(run_tbl, "run", "n_photons")
    n_trials = _pop_int(run_tbl, "run", "n_trials")
    seed = _pop_int(run_tbl, "run", "seed")
    delta = _pop_number(run_tbl, "run", "delta")
    psf_sigma = _pop_number_or(run_tbl, "run", "psf_sigma", "auto")
    output_dir = _pop_string(run_tbl, "run", "output_dir")
    _no_leftovers(run_tbl, "run")
    if n_photons < 1:
        raise ConfigError(f"config key run.n_photons must be positive, "
                          f"got {n_photons}")
    if n_trials < 1:
        raise ConfigError(f"config key run.n_trials must be positive, "
                          f"got {n_trials}")
    if not 0.0 < delta <= 0.5:
        raise ConfigError(f"config key run.delta must lie in (0, 0.5], "
                          f"got {delta}")
    if isinstance(psf_sigma, float) and psf_sigma <= 0.0:
        raise ConfigError(f"config key run.psf_sigma must be positive, "
                          f"got {psf_sigma}")

    return ExperimentConfig(scene=scene, baseline=baseline,
                            alpha_setting=alpha_setting, nu=nu,
                            n_photons=n_photons, n_trials=n_trials, seed=seed,
                            delta=delta, psf_sigma_setting=psf_sigma,
                            output_dir=output_dir, raw=raw)


def resolved_alpha(cfg: ExperimentConfig) -> float:
    """The interferometer phase, resolving the "optimal" setting."""
    if isinstance(cfg.alpha_setting, str):
        return optimal_alpha(cfg.scene, cfg.baseline)
    return cfg.alpha_setting


def interferometer(cfg: ExperimentConfig) -> Interferometer:
    return Interferometer(alpha=resolved_alpha(cfg), nu=cfg.nu)


def resolved_psf(cfg: ExperimentConfig) -> PsfModel:
    """The direct-imaging PSF, resolving the "auto" width."""
    if isinstance(cfg.psf_sigma_setting, str):
        return PsfModel.from_baseline(cfg.scene, cfg.baseline)
    return PsfModel(sigma=cfg.psf_sigma_setting)


def config_hash(cfg: ExperimentConfig) -> str:
    """SHA-256 of the canonicalized raw configuration."""
    canon = json.dumps(cfg.raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _fmt_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("boolean CSV cells are not supported")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, columns: Sequence[str],
               rows: Sequence[Sequence]) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_schema(path: Path, entries: Sequence[tuple[str, str, str]]) -> None:
    lines = ["column,unit,description"]
    for column, unit, description in entries:
        lines.append(f"{column},{unit},{description}")
    path.write_text("\n".join(lines) + "\n")


def _write_meta(path: Path, command: str, cfg: ExperimentConfig, seed: int,
                extra: Sequence[tuple[str, str]] = ()) -> None:
    lines = [f"command={command}",
             f"config_hash={config_hash(cfg)}",
             f"seed={seed}",
             f"generator={GENERATOR_ID}",
             f"version={__version__}"]
    lines.extend(f"{key}={value}" for key, value in extra)
    path.write_text("\n".join(lines) + "\n")


def _artifact(out_dir: Path, name: str, columns, rows, schema, command: str,
              cfg: ExperimentConfig, seed: int,
              extra: Sequence[tuple[str, str]] = ()) -> list[str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{name}.csv"
    _write_csv(csv_path, columns, rows)
    _write_schema(out_dir / f"{name}.schema.txt", schema)
    _write_meta(out_dir / f"{name}.meta.txt", command, cfg, seed, extra)
    return [str(csv_path), str(out_dir / f"{name}.schema.txt"),
            str(out_dir / f"{name}.meta.txt")]


def _map_indexed(fn: Callable[[int], object], count: int,
                 workers: int) -> list:
    """Apply fn to 0..count-1, in order, optionally on a thread pool.

    Results are assembled by index, so the output is identical for any
    worker count.
    """
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def _convert(value: float, bits: bool) -> float:
    return value / LN2 if bits else value


def cmd_entropy(cfg: ExperimentConfig, bits: bool) -> RunReport:
    """Print the per-photon information table."""
    scene, baseline = cfg.scene, cfg.baseline
    ifo = interferometer(cfg)
    alpha_star, cre_star = maximize_cre(scene, baseline, cfg.nu)
    psf = resolved_psf(cfg)
    di_approx, di_numeric = di_relative_entropy(scene.theta, scene.epsilon, psf)
    unit = "bits" if bits else "nats"
    rows = [
        ("qre_exact", _convert(qre_exact(scene, baseline), bits), unit),
        ("qre_small_angle", _convert(qre_small_angle(scene, baseline), bits),
         unit),
        ("cre_at_alpha", _convert(cre_of_measurement(scene, baseline, ifo),
                                  bits), unit),
        ("cre_max", _convert(cre_star, bits), unit),
        ("di_approx", _convert(di_approx, bits), unit),
        ("di_numeric", _convert(di_numeric, bits), unit),
        ("alpha_used", ifo.alpha, "rad"),
        ("alpha_star", alpha_star, "rad"),
        ("theta", scene.theta, "rad"),
        ("psf_sigma", psf.sigma, "rad"),
    ]
    width = max(len(name) for name, _, _ in rows)
    for name, value, row_unit in rows:
        print(f"{name:<{width}}  {value: .9e}  {row_unit}")
    return RunReport("entropy", config_hash(cfg), cfg.seed, ())


def cmd_discriminate(cfg: ExperimentConfig, trials: int, out_dir: Path,
                     seed: int) -> RunReport:
    """Calibrated LLR test: threshold, empirical errors, predictions."""
    p0, p1 = hypothesis_probs(cfg.scene, cfg.baseline, interferometer(cfg))
    report = run_discrimination(p0, p1, n=cfg.n_photons, delta=cfg.delta,
                                trials=trials, seed=seed)
    exponent = (-report.log_beta_hat / report.n
                if math.isfinite(report.log_beta_hat) else math.inf)
    print(f"n={report.n} delta={report.delta} trials={report.trials} "
          f"seed={report.seed}")
    print(f"p0=(a:{p0.p_a:.8f}, b:{p0.p_b:.8f})  "
          f"p1=(a:{p1.p_a:.8f}, b:{p1.p_b:.8f})")
    print(f"d_classical={report.d_classical:.9e} nats  "
          f"v_classical={report.v_classical:.9e} nats^2")
    print(f"threshold={report.threshold:.9e}")
    print(f"alpha_hat={report.alpha_hat:.6f}  "
          f"log_beta_hat={report.log_beta_hat:.6f}")
    print(f"predicted log beta: first_order={report.first_order:.6f}  "
          f"second_order={report.second_order:.6f}")
    if math.isfinite(exponent) and report.d_classical > 0.0:
        print(f"empirical exponent -log(beta)/n={exponent:.9e}  "
              f"ratio_to_d={exponent / report.d_classical:.6f}")
    columns = ("n", "delta", "trials", "seed", "threshold", "alpha_hat",
               "beta_hat", "log_beta_hat", "first_order", "second_order",
               "d_classical", "v_classical")
    row = tuple(getattr(report, c) for c in columns)
    schema = [
        ("n", "count", "photons per test"),
        ("delta", "probability", "type-I error budget"),
        ("trials", "count", "Monte Carlo repetitions"),
        ("seed", "integer", "root seed"),
        ("threshold", "nats", "decision threshold on the total LLR"),
        ("alpha_hat", "probability", "empirical type-I error"),
        ("beta_hat", "probability", "importance-sampled type-II error"),
        ("log_beta_hat", "nats", "log of beta_hat"),
        ("first_order", "nats", "predicted log beta to first order"),
        ("second_order", "nats", "predicted log beta to second order"),
        ("d_classical", "nats", "per-photon relative entropy D(p0||p1)"),
        ("v_classical", "nats^2", "per-photon LLR variance under p0"),
    ]
    outputs = _artifact(out_dir, "discriminate", columns, [row], schema,
                        "discriminate", cfg, seed)
    return RunReport("discriminate", config_hash(cfg), seed, tuple(outputs))


def cmd_estimate(cfg: ExperimentConfig, workers: int, out_dir: Path,
                 seed: int) -> RunReport:
    """Repeated separation-estimation trials and their error summary."""
    scene, baseline = cfg.scene, cfg.baseline
    kd = scene.k * baseline.separation
    r = cfg.nu * math.cos(resolved_alpha(cfg))
    theta = scene.theta
    records = _map_indexed(
        lambda i: run_estimation_trial(theta, cfg.n_photons, r, kd, seed,
                                       trial=i),
        cfg.n_trials, workers)
    total, variance, bias_sq = mse([rec.theta_hat for rec in records], theta)
    qfi = qfi_closed_form(scene, baseline)
    crb = 1.0 / (cfg.n_photons * qfi)
    print(f"trials={cfg.n_trials} photons={cfg.n_photons} r={r:.6f} "
          f"theta_true={theta:.9e} seed={seed}")
    print(f"mse={total:.9e} variance={variance:.9e} bias_sq={bias_sq:.9e}")
    print(f"quantum_crb={crb:.9e}  n*qfi*mse={total / crb:.6f}")
    if theta > 0.0:
        print(f"rmse/theta={math.sqrt(total) / theta * 100.0:.4f} %")
    columns = ("trial", "phi_hat", "theta_hat", "n_events", "r_used", "seed")
    rows = [(rec.trial, rec.phi_hat, rec.theta_hat, rec.n_events, rec.r_used,
             rec.seed) for rec in records]
    schema = [
        ("trial", "index", "trial number; stream is spawn (seed; trial)"),
        ("phi_hat", "rad", "posterior-mode fringe phase magnitude"),
        ("theta_hat", "rad", "estimated angular separation 2|phi_hat|/|kd|"),
        ("n_events", "count", "clicks in the trial"),
        ("r_used", "dimensionless", "fringe factor nu*cos(alpha)"),
        ("seed", "integer", "root seed"),
    ]
    outputs = _artifact(out_dir, "estimate", columns, rows, schema,
                        "estimate", cfg, seed)
    return RunReport("estimate", config_hash(cfg), seed, tuple(outputs))


def cmd_thermal_check(cfg: ExperimentConfig, samples: int, out_dir: Path,
                      seed: int) -> RunReport:
    """Intensity-correlation check of the pseudo-thermal source model."""
    nbar = 1.0
    thermal = g2_zero(sample_thermal(nbar, samples, seed))
    laser_like = g2_zero(sample_thermal(nbar, samples, seed,
                                        fixed_amplitude=True))
    print(f"samples={samples} nbar={nbar} seed={seed}")
    print(f"g2_thermal={thermal:.6f} (expected 2)")
    print(f"g2_fixed_amplitude={laser_like:.6f} (expected 1)")
    columns = ("variant", "nbar", "n_samples", "g2")
    rows = [("gaussian", nbar, samples, thermal),
            ("fixed_amplitude", nbar, samples, laser_like)]
    schema = [
        ("variant", "name", "field statistics variant"),
        ("nbar", "photons", "mean intensity"),
        ("n_samples", "count", "field samples drawn"),
        ("g2", "dimensionless", "zero-delay intensity correlation"),
    ]
    outputs = _artifact(out_dir, "thermal", columns, rows, schema,
                        "thermal-check", cfg, seed)
    return RunReport("thermal-check", config_hash(cfg), seed, tuple(outputs))


def _fig4(cfg: ExperimentConfig, out_dir: Path, seed: int, smoke: bool,
          workers: int) -> list[str]:
    """Fringe scan: modeled and simulated click fraction vs alpha."""
    n_alpha = 32 if smoke else 64
    n_events = min(cfg.n_photons, 5000) if smoke else cfg.n_photons
    pair = phases(cfg.scene, cfg.baseline)
    sources = [(1.0 - cfg.scene.epsilon, pair.primary),
               (cfg.scene.epsilon, pair.secondary)]
    alphas = np.linspace(-math.pi, math.pi, n_alpha, endpoint=False)

    def one(i: int):
        dist = outcome_probs(sources, Interferometer(float(alphas[i]), cfg.nu))
        stream = simulate_events(dist, n_events, seed, spawn_key=(i,))
        n_a, _ = stream.counts()
        return (float(alphas[i]), dist.p_a, n_a / n_events, n_events)

    rows = _map_indexed(one, n_alpha, workers)
    schema = [
        ("alpha", "rad", "interferometer phase setting"),
        ("p_a_model", "probability", "modeled detector-a fraction"),
        ("p_a_sim", "probability", "simulated detector-a fraction"),
        ("n_events", "count", "clicks per setting"),
    ]
    return _artifact(out_dir, "fig4", ("alpha", "p_a_model", "p_a_sim",
                                       "n_events"), rows, schema,
                     "figure fig4", cfg, seed)


def _fig5(cfg: ExperimentConfig, out_dir: Path, seed: int, smoke: bool,
          workers: int) -> list[str]:
    """Information vs secondary brightness, quantum / measured / imaging."""
    n_eps = 6 if smoke else 12
    n_events = min(cfg.n_photons, 5000) if smoke else cfg.n_photons
    eps_grid = np.geomspace(1e-3, 0.5, n_eps)
    psf = resolved_psf(cfg)
    theta = cfg.scene.theta

    def one(i: int):
        eps = float(eps_grid[i])
        scene = replace(cfg.scene, epsilon=eps)
        alpha_star, cre_star = maximize_cre(scene, cfg.baseline, cfg.nu)
        p0, p1 = hypothesis_probs(scene, cfg.baseline,
                                  Interferometer(alpha_star, cfg.nu))
        s0 = simulate_events(p0, n_events, seed, spawn_key=(i, 0))
        s1 = simulate_events(p1, n_events, seed, spawn_key=(i, 1))
        emp0 = OutcomeDist(*(c / n_events for c in s0.counts()))
        emp1 = OutcomeDist(*(c / n_events for c in s1.counts()))
        cre_emp = classical_relative_entropy(emp0, emp1)
        di_approx, di_numeric = di_relative_entropy(theta, eps, psf)
        return (eps, qre_exact(scene, cfg.baseline), cre_star, alpha_star,
                cre_emp, di_approx, di_numeric)

    rows = _map_indexed(one, n_eps, workers)
    schema = [
        ("epsilon", "dimensionless", "secondary brightness fraction"),
        ("qre", "nats", "quantum relative entropy"),
        ("cre_opt", "nats", "measured relative entropy at the best alpha"),
        ("alpha_star", "rad", "best interferometer phase"),
        ("cre_empirical", "nats", "plug-in divergence of simulated counts"),
        ("di_approx", "nats", "direct imaging; small-separation law"),
        ("di_numeric", "nats", "direct imaging; numerically integrated"),
    ]
    return _artifact(out_dir, "fig5",
                     ("epsilon", "qre", "cre_opt", "alpha_star",
                      "cre_empirical", "di_approx", "di_numeric"),
                     rows, schema, "figure fig5", cfg, seed)


def _fig6(cfg: ExperimentConfig, out_dir: Path, seed: int,
          smoke: bool) -> list[str]:
    """Phase posterior for one simulated run at the configured scene."""
    n_events = min(cfg.n_photons, 5000) if smoke else cfg.n_photons
    kd = cfg.scene.k * cfg.baseline.separation
    r = cfg.nu * math.cos(resolved_alpha(cfg))
    phi_true = 0.5 * kd * cfg.scene.theta
    stream = simulate_events(fringe_probs(phi_true, r), n_events, seed)
    n_a, n_b = stream.counts()
    post = posterior_from_counts(n_a, n_b, r)
    phis, dens = post.grid()
    phi_hat = map_phase(post)
    rows = list(zip(phis.tolist(), dens.tolist()))
    schema = [
        ("phi", "rad", "fringe phase"),
        ("density", "1/rad", "normalized posterior density"),
    ]
    extra = [("n_a", str(n_a)), ("n_b", str(n_b)), ("r", repr(r)),
             ("phi_hat", repr(phi_hat)),
             ("theta_hat", repr(estimate_theta(phi_hat, kd)))]
    return _artifact(out_dir, "fig6", ("phi", "density"), rows, schema,
                     "figure fig6", cfg, seed, extra=extra)


def _fig7(cfg: ExperimentConfig, out_dir: Path, seed: int, smoke: bool,
          workers: int) -> list[str]:
    """Estimation error vs separation against both information bounds."""
    n_theta = 4 if smoke else 8
    n_events = min(cfg.n_photons, 5000) if smoke else cfg.n_photons
    n_trials = min(cfg.n_trials, 5) if smoke else cfg.n_trials
    thetas = np.geomspace(2e-6, 6e-5, n_theta)
    kd = cfg.scene.k * cfg.baseline.separation
    r = cfg.nu * math.cos(resolved_alpha(cfg))
    qfi = qfi_closed_form(cfg.scene, cfg.baseline)

    def one(flat: int):
        i = flat // n_trials
        return run_estimation_trial(float(thetas[i]), n_events, r, kd, seed,
                                    trial=flat)

    records = _map_indexed(one, n_theta * n_trials, workers)
    rows = []
    for i in range(n_theta):
        theta = float(thetas[i])
        batch = records[i * n_trials:(i + 1) * n_trials]
        total, variance, bias_sq = mse([rec.theta_hat for rec in batch], theta)
        cfi = classical_fisher_info(theta, r, kd)
        rows.append((theta, n_trials, n_events, total, variance, bias_sq,
                     1.0 / (n_events * qfi),
                     math.inf if cfi == 0.0 else 1.0 / (n_events * cfi),
                     cfi / qfi))
    schema = [
        ("theta", "rad", "true angular separation"),
        ("n_trials", "count", "estimation repetitions"),
        ("n_events", "count", "clicks per repetition"),
        ("mse", "rad^2", "mean squared error of theta_hat"),
        ("variance", "rad^2", "variance part of the mse"),
        ("bias_sq", "rad^2", "squared-bias part of the mse"),
        ("crb_quantum", "rad^2", "quantum bound 1/(n*qfi)"),
        ("crb_classical", "rad^2", "fringe bound 1/(n*cfi)"),
        ("fisher_ratio", "dimensionless", "cfi/qfi at this separation"),
    ]
    return _artifact(out_dir, "fig7",
                     ("theta", "n_trials", "n_events", "mse", "variance",
                      "bias_sq", "crb_quantum", "crb_classical",
                      "fisher_ratio"),
                     rows, schema, "figure fig7", cfg, seed)


def cmd_figure(cfg: ExperimentConfig, kind: str, out_dir: Path, seed: int,
               smoke: bool, workers: int) -> RunReport:
    if kind == "fig4":
        outputs = _fig4(cfg, out_dir, seed, smoke, workers)
    elif kind == "fig5":
        outputs = _fig5(cfg, out_dir, seed, smoke, workers)
    elif kind == "fig6":
        outputs = _fig6(cfg, out_dir, seed, smoke)
    elif kind == "fig7":
        outputs = _fig7(cfg, out_dir, seed, smoke, workers)
    else:
        raise ConfigError(f"unknown figure kind {kind!r}")
    return RunReport(f"figure {kind}", config_hash(cfg), seed, tuple(outputs))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superres",
        description="Two-source interferometric discrimination and "
                    "separation estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--seed", type=int, default=None,
                       help="override run.seed")
        p.add_argument("--out", default=None, help="override run.output_dir")

    p_entropy = sub.add_parser("entropy",
                               help="per-photon information table")
    common(p_entropy)
    p_entropy.add_argument("--bits", action="store_true",
                           help="print entropies in bits instead of nats")

    p_disc = sub.add_parser("discriminate",
                            help="calibrated one-vs-two-source test")
    common(p_disc)
    p_disc.add_argument("--trials", type=int, default=100_000,
                        help="Monte Carlo repetitions (default 100000)")
    p_disc.add_argument("--smoke", action="store_true",
                        help="small, fast run (caps photons and trials)")

    p_est = sub.add_parser("estimate", help="separation-estimation trials")
    common(p_est)
    p_est.add_argument("--workers", type=int, default=1,
                       help="thread workers (default 1; results identical)")
    p_est.add_argument("--smoke", action="store_true",
                       help="small, fast run (caps photons and trials)")

    p_thermal = sub.add_parser("thermal-check",
                               help="pseudo-thermal photon statistics")
    common(p_thermal)
    p_thermal.add_argument("--samples", type=int, default=1_000_000,
                           help="field samples (default 1000000)")

    p_fig = sub.add_parser("figure", help="regenerate figure data files")
    common(p_fig)
    p_fig.add_argument("--kind", required=True,
                       choices=("fig4", "fig5", "fig6", "fig7"))
    p_fig.add_argument("--smoke", action="store_true",
                       help="small, fast run")
    p_fig.add_argument("--workers", type=int, default=1,
                       help="thread workers (default 1; results identical)")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Entry point returning the process exit code."""
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        seed = cfg.seed if args.seed is None else args.seed
        out_dir = Path(args.out if args.out is not None else cfg.output_dir)
        if args.command == "entropy":
            report = cmd_entropy(cfg, bits=args.bits)
        elif args.command == "discriminate":
            cfg = _smoked(cfg, args.smoke)
            trials = min(args.trials, 20_000) if args.smoke else args.trials
            report = cmd_discriminate(cfg, trials, out_dir, seed)
        elif args.command == "estimate":
            cfg = _smoked(cfg, args.smoke)
            report = cmd_estimate(cfg, args.workers, out_dir, seed)
        elif args.command == "thermal-check":
            report = cmd_thermal_check(cfg, args.samples, out_dir, seed)
        else:
            report = cmd_figure(cfg, args.kind, out_dir, seed,
                                smoke=args.smoke, workers=args.workers)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for path in report.outputs:
        print(f"wrote {path}")
    return 0


def _smoked(cfg: ExperimentConfig, smoke: bool) -> ExperimentConfig:
    """Cap run sizes for quick checks."""
    if not smoke:
        return cfg
    return replace(cfg, n_photons=min(cfg.n_photons, 5000),
                   n_trials=min(cfg.n_trials, 5))


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(run())

"""Command-line front end: config ingestion, subcommands, CSV/JSON emission.

Configs are flat INI files; every frequency-like key is named *_over_2pi and
given in Hz, multiplied by 2*pi on ingestion (temperatures in kelvin).
Subcommands are deterministic given a config: floats are emitted with 17
significant digits, so repeated runs produce byte-identical files.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import oracle as orc
from . import propagator as prop
from .dynamics import (ClassifyThresholds, classify, first_recurrence,
                       fixed_point, phase_diagram, poincare_map)
from .errors import (ConfigError, GridTooCoarse, HermiticityLoss,
                     NoRecurrence, NonPositiveInput, ResonantDrive,
                     TraceDrift)
from .params import DerivedParams, PhysicalParams, derive, effective_temperature
from .solution import (EvolutionSpec, default_horizon, energy_at, mean_at,
                       variance_at)

TWO_PI = 2.0 * np.pi
ENV_OUT = "DRIVENQUBIT_OUT"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_ORACLE = 4
EXIT_RESOLUTION = 5

_KNOWN_KEYS = {
    "physical": {
        "omega_q_over_2pi", "omega_c_over_2pi", "delta_c_over_2pi",
        "omega_d_over_2pi", "delta_d_over_2pi", "g_over_2pi",
        "gamma_c_over_2pi", "omega_over_2pi", "temperature",
    },
    "initial": {"state", "alpha0"},
    "analysis": {
        "t_end", "n_samples", "dim", "grid_n", "grid_half_width", "frames",
        "delta_d_min_over_2pi", "delta_d_max_over_2pi", "delta_d_count",
        "omega_min_over_2pi", "omega_max_over_2pi", "omega_count",
        "alpha0_min", "alpha0_max", "alpha0_count",
        "prominence_frac", "collapse_frac", "revive_ratio", "oscillation_count",
    },
    "output": {"directory", "format"},
}


@dataclass
class RunConfig:
    physical: PhysicalParams
    state: str                  # "coherent" | "excited"
    alpha0: complex
    t_end: float | None
    n_samples: int
    dim: int | None
    grid_n: int
    grid_half_width: float | None
    frames: list[float] | None
    delta_d_range: tuple[float, float, int]
    Omega_range: tuple[float, float, int]
    alpha0_range: tuple[float, float, int]
    thresholds: ClassifyThresholds
    out_dir: Path
    out_format: str

    def resolved_dict(self) -> dict:
        p = self.physical
        return {
            "physical": {
                "omega_q_over_2pi": p.omega_q_lin / TWO_PI,
                "omega_c_over_2pi": p.omega_c / TWO_PI,
                "omega_d_over_2pi": p.omega_d / TWO_PI,
                "g_over_2pi": p.g / TWO_PI,
                "gamma_c_over_2pi": p.gamma_c / TWO_PI,
                "Omega_over_2pi": p.Omega / TWO_PI,
                "temperature": p.temperature,
            },
            "initial": {"state": self.state, "alpha0": str(self.alpha0)},
            "analysis": {
                "t_end": self.t_end,
                "n_samples": self.n_samples,
                "dim": self.dim,
                "grid_n": self.grid_n,
                "grid_half_width": self.grid_half_width,
                "frames": self.frames,
                "delta_d_range_over_2pi": list(self.delta_d_range),
                "Omega_range_over_2pi": list(self.Omega_range),
                "alpha0_range": list(self.alpha0_range),
                "thresholds": {
                    "prominence_frac": self.thresholds.prominence_frac,
                    "collapse_frac": self.thresholds.collapse_frac,
                    "revive_ratio": self.thresholds.revive_ratio,
                    "oscillation_count": self.thresholds.oscillation_count,
                },
            },
            "output": {"directory": str(self.out_dir), "format": self.out_format},
        }


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _get_float(section, key: str, default: float | None = None) -> float | None:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section.name}] {key}: not a number: {raw!r}") from exc


def _get_int(section, key: str, default: int | None = None) -> int | None:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section.name}] {key}: not an integer: {raw!r}") from exc


def load_config(path: str | Path) -> RunConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
    if "physical" not in parser:
        raise ConfigError("missing [physical] section")
    phys = parser["physical"]

    f_q = _get_float(phys, "omega_q_over_2pi")
    if f_q is None:
        raise ConfigError("[physical] omega_q_over_2pi is required")
    omega_q = TWO_PI * f_q

    f_c = _get_float(phys, "omega_c_over_2pi")
    f_dc = _get_float(phys, "delta_c_over_2pi")
    if (f_c is None) == (f_dc is None):
        raise ConfigError("[physical] give exactly one of omega_c_over_2pi, delta_c_over_2pi")
    omega_c = TWO_PI * f_c if f_c is not None else omega_q - TWO_PI * f_dc

    f_d = _get_float(phys, "omega_d_over_2pi")
    f_dd = _get_float(phys, "delta_d_over_2pi")
    if (f_d is None) == (f_dd is None):
        raise ConfigError("[physical] give exactly one of omega_d_over_2pi, delta_d_over_2pi")
    omega_d = TWO_PI * f_d if f_d is not None else omega_q - TWO_PI * f_dd

    for key in ("g_over_2pi", "gamma_c_over_2pi", "omega_over_2pi", "temperature"):
        if phys.get(key) is None:
            raise ConfigError(f"[physical] {key} is required")
    try:
        physical = PhysicalParams(
            omega_q_lin=omega_q,
            omega_c=omega_c,
            omega_d=omega_d,
            g=TWO_PI * _get_float(phys, "g_over_2pi"),
            gamma_c=TWO_PI * _get_float(phys, "gamma_c_over_2pi"),
            Omega=TWO_PI * _get_float(phys, "omega_over_2pi"),
            temperature=_get_float(phys, "temperature"),
        )
    except NonPositiveInput as exc:
        raise ConfigError(f"[physical] {exc}") from exc

    state = "coherent"
    alpha0 = 1.0 + 0j
    if "initial" in parser:
        sec = parser["initial"]
        state = sec.get("state", "coherent")
        if state not in ("coherent", "excited"):
            raise ConfigError(f"[initial] state must be coherent or excited, got {state!r}")
        raw = sec.get("alpha0")
        if raw is not None:
            try:
                alpha0 = complex(raw.replace(" ", ""))
            except ValueError as exc:
                raise ConfigError(f"[initial] alpha0: not a complex number: {raw!r}") from exc

    if "analysis" in parser:
        sec = parser["analysis"]
        t_end = _get_float(sec, "t_end")
        n_samples = _get_int(sec, "n_samples", 400)
        dim_raw = sec.get("dim")
        dim = None if dim_raw in (None, "auto") else _get_int(sec, "dim")
        grid_n = _get_int(sec, "grid_n", 256)
        grid_half_width = _get_float(sec, "grid_half_width")
        frames_raw = sec.get("frames")
        frames = None
        if frames_raw is not None:
            try:
                frames = [float(v) for v in frames_raw.split(",")]
            except ValueError as exc:
                raise ConfigError(f"[analysis] frames: bad list {frames_raw!r}") from exc
        dd_range = (
            _get_float(sec, "delta_d_min_over_2pi", -3e6),
            _get_float(sec, "delta_d_max_over_2pi", 3e6),
            _get_int(sec, "delta_d_count", 200),
        )
        om_range = (
            _get_float(sec, "omega_min_over_2pi", 1e4),
            _get_float(sec, "omega_max_over_2pi", 1e6),
            _get_int(sec, "omega_count", 200),
        )
        a0_range = (
            _get_float(sec, "alpha0_min", 0.05),
            _get_float(sec, "alpha0_max", 1.6),
            _get_int(sec, "alpha0_count", 156),
        )
        thresholds = ClassifyThresholds(
            prominence_frac=_get_float(sec, "prominence_frac", 0.05),
            collapse_frac=_get_float(sec, "collapse_frac", 0.15),
            revive_ratio=_get_float(sec, "revive_ratio", 1.5),
            oscillation_count=_get_int(sec, "oscillation_count", 3),
        )
    else:
        t_end, n_samples, dim, grid_n = None, 400, None, 256
        grid_half_width, frames = None, None
        dd_range = (-3e6, 3e6, 200)
        om_range = (1e4, 1e6, 200)
        a0_range = (0.05, 1.6, 156)
        thresholds = ClassifyThresholds()

    out_dir = Path("out")
    out_format = "csv"
    if "output" in parser:
        out_dir = Path(parser["output"].get("directory", "out"))
        out_format = parser["output"].get("format", "csv")
    if out_format not in ("csv", "json"):
        raise ConfigError(f"[output] format must be csv or json, got {out_format!r}")

    return RunConfig(
        physical=physical, state=state, alpha0=alpha0, t_end=t_end,
        n_samples=n_samples, dim=dim, grid_n=grid_n,
        grid_half_width=grid_half_width, frames=frames,
        delta_d_range=dd_range, Omega_range=om_range, alpha0_range=a0_range,
        thresholds=thresholds, out_dir=out_dir, out_format=out_format,
    )


def _write_table(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else _fmt(v) for v in row])


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(cfg: RunConfig, stem: str, header: list[str], rows) -> Path:
    rows = list(rows)
    if cfg.out_format == "csv":
        path = cfg.out_dir / f"{stem}.csv"
        _write_table(path, header, rows)
    else:
        path = cfg.out_dir / f"{stem}.json"
        _write_json(path, {"columns": header,
                           "rows": [[v for v in row] for row in rows]})
    return path


def _derived_report(d: DerivedParams, p: PhysicalParams) -> dict:
    return {
        "delta_d_rad_per_s": d.delta_d,
        "delta_d_over_2pi_hz": d.delta_d / TWO_PI,
        "delta_c_rad_per_s": d.delta_c,
        "delta_c_over_2pi_hz": d.delta_c / TWO_PI,
        "alpha_d": d.alpha_d,
        "nu": d.nu,
        "nu_bar": d.nu_bar,
        "n_bar": d.n_bar,
        "gamma_rad_per_s": d.gamma,
        "gamma_over_2pi_hz": d.gamma / TWO_PI,
        "eta_rad_per_s": d.eta,
        "eta_over_2pi_hz": d.eta / TWO_PI,
        "mu_ss_re": d.mu_ss.real,
        "mu_ss_im": d.mu_ss.imag,
        "mu_ss_abs": abs(d.mu_ss),
        "sigma2_ss": d.sigma2_ss,
        "effective_temperature_k": effective_temperature(p),
    }


def cmd_derive(cfg: RunConfig) -> int:
    d = derive(cfg.physical)
    report = _derived_report(d, cfg.physical)
    _write_json(cfg.out_dir / "derived.json", report)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def _evolution_rows(d: DerivedParams, alpha0: complex, t):
    spec = EvolutionSpec(derived=d, alpha0=alpha0)
    mu = mean_at(spec, t)
    s2 = variance_at(spec, t)
    en = energy_at(spec, t)
    for k in range(len(t)):
        yield (t[k], mu[k].real, mu[k].imag, s2[k], en[k])


def cmd_evolve(cfg: RunConfig) -> int:
    d = derive(cfg.physical)
    t_end = cfg.t_end if cfg.t_end is not None else default_horizon(d)
    t = np.linspace(0.0, t_end, cfg.n_samples)
    header = ["t", "re_mu", "im_mu", "sigma2", "energy"]
    _emit(cfg, "evolution", header, _evolution_rows(d, cfg.alpha0, t))
    d_ref = derive(replace(cfg.physical, Omega=0.0))
    _emit(cfg, "evolution_no_drive", header, _evolution_rows(d_ref, cfg.alpha0, t))
    print(f"evolution written for t in [0, {_fmt(t_end)}] s ({cfg.n_samples} samples)")
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    d = derive(cfg.physical)
    t_end = cfg.t_end if cfg.t_end is not None else 10.0 / (d.nu_bar * d.gamma)
    t = np.linspace(0.0, t_end, min(cfg.n_samples, 200))
    a0_disp = orc.displaced_amplitude(d, cfg.alpha0)
    m_ss = d.mu_ss + d.alpha_d
    excursion = abs(m_ss) + abs(a0_disp - m_ss)
    dim = cfg.dim if cfg.dim is not None else orc.min_dim_for(excursion)
    space = orc.build_space(dim)
    rho0 = (orc.excited_state(space) if cfg.state == "excited"
            else orc.coherent_state(space, a0_disp))
    run = orc.evolve(space, d, rho0, t)
    mom = [orc.moments(space, r) for r in run.states]
    mu_orc = orc.quadrature_mean(d, np.array([m[0] for m in mom]), t)
    s2_orc = np.array([m[1] for m in mom])
    spec = EvolutionSpec(derived=d, alpha0=cfg.alpha0)
    mu_ref = mean_at(spec, t)
    s2_ref = variance_at(spec, t)
    header = ["t", "analytic_re_mu", "analytic_im_mu", "oracle_re_mu",
              "oracle_im_mu", "analytic_sigma2", "oracle_sigma2"]
    rows = [(t[k], mu_ref[k].real, mu_ref[k].imag, mu_orc[k].real,
             mu_orc[k].imag, s2_ref[k], s2_orc[k]) for k in range(len(t))]
    _emit(cfg, "oracle_compare", header, rows)
    summary = {
        "dim": dim,
        "dt": orc.default_step(d),
        "t_end": t_end,
        "max_rel_err_mu": float(np.max(np.abs(mu_orc - mu_ref)) / np.max(np.abs(mu_ref))),
        "max_rel_err_sigma2": float(np.max(np.abs(s2_orc - s2_ref) / s2_ref)),
        "trace_drift_max": float(np.max(run.trace_errors)),
        "hermiticity_max": float(np.max(run.herm_errors)),
    }
    _write_json(cfg.out_dir / "oracle_summary.json", summary)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def _default_frames(d: DerivedParams) -> list[float]:
    tau = 1.0 / (d.nu_bar * d.gamma)
    return [0.0, 0.25 * tau, 0.5 * tau, tau, 2.0 * tau, 10.0 * tau]


def cmd_qdist(cfg: RunConfig) -> int:
    d = derive(cfg.physical)
    frames = cfg.frames if cfg.frames is not None else _default_frames(d)
    if cfg.grid_half_width is not None:
        x, y = prop.square_grid(cfg.grid_half_width, cfg.grid_n)
    else:
        x, y = prop.default_grid(d, cfg.grid_n)
    if cfg.state == "excited":
        initial = prop.excited_field(x, y)
        overlay_start = 0.0 + 0j
    else:
        initial = prop.gaussian_field(x, y, cfg.alpha0, 0.5)
        overlay_start = cfg.alpha0
    meta_frames = []
    for k, tf in enumerate(frames):
        fld = initial if tf == 0.0 else prop.evolve_field(d, initial, tf)
        rows = ((fx, fy, fld.values[j, i]) for j, fy in enumerate(y)
                for i, fx in enumerate(x))
        path = _emit(cfg, f"qdist_frame_{k}", ["x", "y", "value"], rows)
        meta_frames.append({
            "index": k, "t": tf, "file": path.name,
            "mass": fld.integral(),
            "mean_re": fld.mean().real, "mean_im": fld.mean().imag,
            "second_central": fld.second_central(),
        })
    t_grid = np.linspace(0.0, max(frames[-1], 1e-12), 400)
    overlay = prop.trajectory_overlay(d, overlay_start, t_grid)
    _emit(cfg, "trajectory", ["t", "re_mu", "im_mu"],
          ((t_grid[k], overlay.means[k].real, overlay.means[k].imag)
           for k in range(len(t_grid))))
    meta = {
        "grid": {"n": cfg.grid_n, "half_width": float(x[-1]), "cell": float(x[1] - x[0])},
        "initial_state": cfg.state,
        "limit_cycle_radius": overlay.radius,
        "frames": meta_frames,
    }
    _write_json(cfg.out_dir / "qdist_frames.json", meta)
    print(json.dumps(meta["frames"], indent=2, sort_keys=True))
    return EXIT_OK


def cmd_phases(cfg: RunConfig, workers: int) -> int:
    lo, hi, n = cfg.delta_d_range
    dd = TWO_PI * np.linspace(lo, hi, n)
    lo, hi, n = cfg.Omega_range
    om = TWO_PI * np.linspace(lo, hi, n)
    diagram = phase_diagram(cfg.physical, dd, om, alpha0=cfg.alpha0,
                            thresholds=cfg.thresholds, workers=workers)
    rows = []
    counts: dict[str, int] = {}
    for j, om_v in enumerate(diagram.Omega):
        for i, dd_v in enumerate(diagram.delta_d):
            label = diagram.labels[j][i] or "undefined"
            counts[label] = counts.get(label, 0) + 1
            rows.append((dd_v / TWO_PI, om_v / TWO_PI, label))
    _emit(cfg, "phase_diagram", ["delta_d_over_2pi", "Omega_over_2pi", "label"], rows)
    _write_json(cfg.out_dir / "phase_diagram_meta.json", {
        "delta_d_over_2pi": [v / TWO_PI for v in diagram.delta_d],
        "Omega_over_2pi": [v / TWO_PI for v in diagram.Omega],
        "labels": diagram.labels,
        "counts": counts,
    })
    print(json.dumps(counts, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_poincare(cfg: RunConfig) -> int:
    d = derive(cfg.physical)
    lo, hi, n = cfg.alpha0_range
    a0 = np.linspace(lo, hi, n)
    series = poincare_map(d, a0)
    _emit(cfg, "poincare", ["alpha0", "recurrence_x", "half_turns"],
          ((series.alpha0[k], series.recurrence_x[k], float(series.half_turns[k]))
           for k in range(len(a0))))
    try:
        fp = fixed_point(d, lo, hi)
    except NoRecurrence:
        fp = None
    summary = {
        "fixed_point": fp,
        "limit_cycle_radius": abs(d.mu_ss),
        "partition": series.partition,
        "slope_full_turn": series.slope_full_turn,
        "slope_half_turn": series.slope_half_turn,
    }
    _write_json(cfg.out_dir / "poincare_summary.json", summary)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivenqubit",
        description="Decoherence dynamics of a driven qubit coupled to a "
                    "two-level junction defect.")
    parser.add_argument("command",
                        choices=["derive", "evolve", "oracle", "qdist",
                                 "phases", "poincare"])
    parser.add_argument("--config", required=True, help="INI run configuration")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="parallel workers for sweeps")
    parser.add_argument("--format", choices=["csv", "json"],
                        help="table format (overrides config)")
    parser.add_argument("--print-config", action="store_true",
                        help="echo the fully resolved configuration")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ConfigError, configparser.Error) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        cfg.out_dir = Path(args.out)
    env_out = os.environ.get(ENV_OUT)
    if env_out:
        cfg.out_dir = Path(env_out)
    if args.format:
        cfg.out_format = args.format
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    if args.print_config:
        print(json.dumps(cfg.resolved_dict(), indent=2, sort_keys=True))
    try:
        if args.command == "derive":
            return cmd_derive(cfg)
        if args.command == "evolve":
            return cmd_evolve(cfg)
        if args.command == "oracle":
            return cmd_oracle(cfg)
        if args.command == "qdist":
            return cmd_qdist(cfg)
        if args.command == "phases":
            return cmd_phases(cfg, args.workers)
        if args.command == "poincare":
            return cmd_poincare(cfg)
    except (ResonantDrive, NonPositiveInput) as exc:
        print(f"singular parameters: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (TraceDrift, HermiticityLoss) as exc:
        print(f"oracle integrity: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except GridTooCoarse as exc:
        print(f"resolution: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

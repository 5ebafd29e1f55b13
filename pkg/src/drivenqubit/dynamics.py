"""Transient classification and the first-recurrence map of the mean.

Four dynamic phases describe how the mean trajectory reaches the limit
cycle, decided from the radial history r(t) = |mu(t)|:

    IV amplifying        the cycle radius exceeds the start, |mu_ss| > |alpha0|
                         (driving pumps net energy in);
    III monotonic decay  r(t) has no prominent local minimum;
    I oscillating        at least `oscillation_count` prominent minima
                         (persistent beating during the decay);
    II collapse-revive   otherwise, when the deepest prominent minimum falls
                         below `collapse_frac`*|alpha0| and r later grows back
                         by at least `revive_ratio`.

The thresholds live in ClassifyThresholds and are configuration-exposed;
the defaults are pinned by the four labelled reference trajectories.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq
from scipy.signal import find_peaks

from .errors import DegenerateStart, NoRecurrence, ResonantDrive
from .params import DerivedParams, PhysicalParams, derive
from .solution import EvolutionSpec, mean_at

__all__ = [
    "Phase",
    "ClassifyThresholds",
    "PhaseDiagram",
    "Recurrence",
    "PoincareSeries",
    "classify",
    "phase_diagram",
    "first_recurrence",
    "poincare_map",
    "fixed_point",
]


class Phase(enum.Enum):
    OSCILLATING = "I"
    COLLAPSE_REVIVE = "II"
    MONOTONIC_DECAY = "III"
    AMPLIFYING = "IV"

    @property
    def label(self) -> str:
        return self.value


@dataclass(frozen=True)
class ClassifyThresholds:
    """Decision constants for the radial-history classifier."""

    prominence_frac: float = 0.05
    collapse_frac: float = 0.15
    revive_ratio: float = 1.5
    oscillation_count: int = 3


DEFAULT_THRESHOLDS = ClassifyThresholds()

# Decay horizon for feature extraction: after a dozen decay times the
# envelope is ~6e-6 of the start, below any usable prominence threshold,
# and r(t) is constant at |mu_ss| -- longer windows add no extrema.
_HORIZON_DECAY_TIMES = 12.0
_SAMPLES_PER_TURN = 48
_MIN_SAMPLES = 4096
_MAX_SAMPLES = 98304


@dataclass(frozen=True)
class PhaseDiagram:
    """Labels over the (detuning, strength) plane; None marks undefined cells."""

    delta_d: np.ndarray
    Omega: np.ndarray
    labels: list[list[str | None]]


@dataclass(frozen=True)
class Recurrence:
    """First return to the positive x-axis: coordinate, half-turn count, time."""

    x: float
    half_turns: int
    t: float


@dataclass(frozen=True)
class PoincareSeries:
    """Recurrence map samples with per-sample winding and fitted zone slopes."""

    alpha0: np.ndarray
    recurrence_x: np.ndarray        # NaN where no recurrence occurred
    half_turns: np.ndarray          # 0 where no recurrence occurred
    partition: float | None
    slope_full_turn: float | None
    slope_half_turn: float | None


def _radial_history(derived: DerivedParams, alpha0: complex) -> np.ndarray:
    nbg = derived.nu_bar * derived.gamma
    t_end = _HORIZON_DECAY_TIMES / nbg
    turns = t_end * abs(derived.delta_d) / (2.0 * np.pi)
    n = int(np.clip(_SAMPLES_PER_TURN * turns, _MIN_SAMPLES, _MAX_SAMPLES))
    t = np.linspace(0.0, t_end, n)
    return np.abs(mean_at(EvolutionSpec(derived=derived, alpha0=alpha0), t))


def classify(derived: DerivedParams, alpha0: complex,
             thresholds: ClassifyThresholds = DEFAULT_THRESHOLDS) -> Phase:
    """Assign one of the four phases to the trajectory from alpha0.

    Deterministic in its inputs; features depend only on |mu(t)|, |mu_ss|
    and |alpha0|, so a global rotation applied to both alpha0 and the
    steady mean leaves the label unchanged.
    """
    if abs(alpha0 - derived.mu_ss) < 1e-9:
        raise DegenerateStart("initial point already on the attractor")
    scale = abs(alpha0)
    if abs(derived.mu_ss) > scale:
        return Phase.AMPLIFYING
    r = _radial_history(derived, alpha0)
    minima, _ = find_peaks(-r, prominence=thresholds.prominence_frac * scale)
    if len(minima) == 0:
        return Phase.MONOTONIC_DECAY
    if len(minima) >= thresholds.oscillation_count:
        return Phase.OSCILLATING
    k = minima[np.argmin(r[minima])]
    if (r[k] < thresholds.collapse_frac * scale
            and np.max(r[k:]) >= thresholds.revive_ratio * r[k]):
        return Phase.COLLAPSE_REVIVE
    return Phase.OSCILLATING


def _classify_cell(base: PhysicalParams, delta_d: float, Omega: float,
                   alpha0: complex, thresholds: ClassifyThresholds) -> str | None:
    try:
        p = replace(base, omega_d=base.omega_q_lin - delta_d, Omega=Omega)
        return classify(derive(p), alpha0, thresholds).label
    except (ResonantDrive, DegenerateStart):
        return None


def _classify_row(args) -> list[str | None]:
    base, delta_vals, Omega, alpha0, thresholds = args
    return [_classify_cell(base, dd, Omega, alpha0, thresholds) for dd in delta_vals]


def phase_diagram(base: PhysicalParams, delta_d_values, Omega_values,
                  alpha0: complex = 1.0 + 0j,
                  thresholds: ClassifyThresholds = DEFAULT_THRESHOLDS,
                  workers: int = 1) -> PhaseDiagram:
    """Classify every cell of the (delta_d, Omega) grid.

    Cells where the drive is exactly resonant (or the start degenerate) are
    marked None rather than failing the sweep. Rows are independent tasks;
    results are merged by row index, so the output is identical for any
    worker count.
    """
    delta_d_values = np.asarray(delta_d_values, dtype=float)
    Omega_values = np.asarray(Omega_values, dtype=float)
    jobs = [(base, delta_d_values, om, alpha0, thresholds) for om in Omega_values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_classify_row, jobs, chunksize=4))
    else:
        rows = [_classify_row(j) for j in jobs]
    return PhaseDiagram(delta_d=delta_d_values, Omega=Omega_values, labels=rows)


def _recurrence_horizon(derived: DerivedParams) -> float:
    return (4.0 * np.pi / abs(derived.delta_d)
            + 10.0 / (derived.nu_bar * derived.gamma))


def first_recurrence(derived: DerivedParams, alpha0: float,
                     t_end: float | None = None) -> Recurrence:
    """First crossing of the positive x-axis by the mean trajectory.

    Starts from a real positive alpha0, scans the imaginary part of mu(t)
    for sign changes, polishes each bracket by root finding to
    |Im mu| < 1e-12, and accepts the first crossing with Re mu > 0.
    The half-turn count tallies every axis crossing up to acceptance
    (1 = half turn, 2 = full turn).
    """
    if not alpha0 > 0:
        raise ValueError("alpha0 must be a positive real coordinate")
    spec = EvolutionSpec(derived=derived, alpha0=complex(alpha0))
    if t_end is None:
        t_end = _recurrence_horizon(derived)
    period = 2.0 * np.pi / abs(derived.delta_d)
    nbg = derived.nu_bar * derived.gamma
    dt = min(period / 512.0, 1.0 / (16.0 * nbg))
    # skip the trivial root at t = 0 (the start already sits on the axis)
    t = np.arange(1, int(t_end / dt) + 2) * dt
    im = np.imag(mean_at(spec, t))
    im_of = lambda tt: float(np.imag(mean_at(spec, tt)))
    crossings = 0
    sign_flips = np.nonzero(np.sign(im[:-1]) * np.sign(im[1:]) < 0)[0]
    for k in sign_flips:
        tc = brentq(im_of, t[k], t[k + 1], xtol=1e-18, rtol=8.9e-16)
        mu_c = complex(mean_at(spec, tc))
        if abs(mu_c.imag) > 1e-12:
            raise RuntimeError(f"root polish left |Im mu| = {abs(mu_c.imag):.2e}")
        crossings += 1
        if mu_c.real > 0:
            return Recurrence(x=mu_c.real, half_turns=crossings, t=tc)
    raise NoRecurrence(f"no positive-axis return before t = {t_end:.3e}")


def poincare_map(derived: DerivedParams, alpha0_values,
                 t_end: float | None = None) -> PoincareSeries:
    """Recurrence map over a range of starting coordinates.

    The partition point is the winding-tag flip, refined by bisection
    between the bracketing samples; slopes are least-squares fits in each
    zone, excluding the three samples nearest the partition.
    """
    alpha0_values = np.asarray(alpha0_values, dtype=float)
    xs = np.full(alpha0_values.shape, np.nan)
    turns = np.zeros(alpha0_values.shape, dtype=int)
    for i, a0 in enumerate(alpha0_values):
        try:
            rec = first_recurrence(derived, float(a0), t_end)
        except NoRecurrence:
            continue
        xs[i] = rec.x
        turns[i] = rec.half_turns

    partition = None
    slope_full = None
    slope_half = None
    ok = turns > 0
    flip_at = None
    idx = np.nonzero(ok)[0]
    for prev, cur in zip(idx[:-1], idx[1:]):
        if turns[prev] != turns[cur]:
            flip_at = (prev, cur)
            break
    if flip_at is not None:
        lo, hi = alpha0_values[flip_at[0]], alpha0_values[flip_at[1]]
        tag_lo = turns[flip_at[0]]
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            try:
                tag_mid = first_recurrence(derived, float(mid), t_end).half_turns
            except NoRecurrence:
                break
            if tag_mid == tag_lo:
                lo = mid
            else:
                hi = mid
        partition = 0.5 * (lo + hi)
        margin = 3
        lo_zone = ok & (np.arange(len(ok)) <= flip_at[0] - margin)
        hi_zone = ok & (np.arange(len(ok)) >= flip_at[1] + margin)
        if np.sum(lo_zone) >= 2:
            slope_full = float(np.polyfit(alpha0_values[lo_zone], xs[lo_zone], 1)[0])
        if np.sum(hi_zone) >= 2:
            slope_half = float(np.polyfit(alpha0_values[hi_zone], xs[hi_zone], 1)[0])
    return PoincareSeries(alpha0=alpha0_values, recurrence_x=xs, half_turns=turns,
                          partition=partition, slope_full_turn=slope_full,
                          slope_half_turn=slope_half)


def fixed_point(derived: DerivedParams, lo: float, hi: float,
                t_end: float | None = None) -> float:
    """Root of P(alpha0) - alpha0, bracketed inside one winding zone."""
    gap = lambda a: first_recurrence(derived, float(a), t_end).x - a
    n_scan = 24
    grid = np.linspace(lo, hi, n_scan)
    vals = [gap(a) for a in grid]
    for k in range(n_scan - 1):
        if np.sign(vals[k]) * np.sign(vals[k + 1]) < 0:
            return float(brentq(gap, grid[k], grid[k + 1], xtol=1e-12))
    raise NoRecurrence(f"no fixed point of the recurrence map in [{lo}, {hi}]")

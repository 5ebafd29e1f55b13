"""Tests for phase classification and the first-recurrence map."""
import dataclasses

import numpy as np
import pytest

from drivenqubit import (ClassifyThresholds, DegenerateStart, NoRecurrence,
                         Phase, classify, derive, first_recurrence,
                         fixed_point, phase_diagram, poincare_map)

from conftest import DRIVE_PRESETS, TWO_PI, physical, preset


@pytest.fixture(scope="module")
def d_rec():
    return derive(preset("recurrence"))


def test_four_reference_labels(derived_presets):
    for name in ("I", "II", "III", "IV"):
        assert classify(derived_presets[name], 1.0 + 0j).label == name


def test_amplifying_iff_cycle_exceeds_start(derived_presets):
    d = derived_presets["IV"]
    assert abs(d.mu_ss) > 1.0
    assert classify(d, 1.0 + 0j) is Phase.AMPLIFYING
    # same parameters, start outside the cycle: no longer amplifying
    assert classify(d, 2.0 * abs(d.mu_ss) + 0j) is not Phase.AMPLIFYING


def test_classify_invariant_under_global_rotation(derived_presets):
    for name in ("I", "II", "III"):
        d = derived_presets[name]
        base = classify(d, 1.0 + 0j)
        for phi in (0.7, 2.1, -1.3):
            rot = np.exp(1j * phi)
            d_rot = dataclasses.replace(d, mu_ss=d.mu_ss * rot)
            assert classify(d_rot, rot + 0j) is base


def test_classify_degenerate_start(derived_presets):
    d = derived_presets["III"]
    with pytest.raises(DegenerateStart):
        classify(d, d.mu_ss)


def test_classify_deterministic(derived_presets):
    d = derived_presets["II"]
    assert classify(d, 1 + 0j) is classify(d, 1 + 0j)


def test_thresholds_are_exposed(derived_presets):
    # an absurd prominence filter suppresses every minimum: anything
    # non-amplifying degenerates to monotonic decay
    loose = ClassifyThresholds(prominence_frac=5.0)
    assert classify(derived_presets["I"], 1 + 0j, loose) is Phase.MONOTONIC_DECAY


def test_phase_diagram_contains_reference_points():
    base = preset("I")
    dd = TWO_PI * np.array([DRIVE_PRESETS[n][0] for n in ("I", "II", "III", "IV")])
    om = TWO_PI * np.array([1e5, 5e5])
    diag = phase_diagram(base, np.sort(dd), om)
    order = np.argsort(dd)
    names = np.array(["I", "II", "III", "IV"])[order]
    weak = {n: diag.labels[0][k] for k, n in enumerate(names)}
    strong = {n: diag.labels[1][k] for k, n in enumerate(names)}
    assert weak["I"] == "I" and weak["II"] == "II" and weak["III"] == "III"
    assert strong["IV"] == "IV"


def test_phase_diagram_undefined_on_resonance():
    base = preset("I")
    diag = phase_diagram(base, np.array([0.0, TWO_PI * 1e5]),
                         np.array([TWO_PI * 1e5]))
    assert diag.labels[0][0] is None
    assert diag.labels[0][1] is not None


def test_phase_diagram_no_amplifying_without_drive():
    base = preset("I")
    dd = TWO_PI * np.linspace(-2e6, 2e6, 9)
    dd = dd[dd != 0.0]
    diag = phase_diagram(base, dd, np.array([TWO_PI * 1.0]))  # ~zero drive
    assert all(lbl != "IV" for lbl in diag.labels[0])


def test_phase_diagram_worker_independence():
    base = preset("I")
    dd = TWO_PI * np.linspace(-1.5e6, 1.5e6, 8)
    om = TWO_PI * np.linspace(5e4, 8e5, 6)
    serial = phase_diagram(base, dd, om, workers=1)
    parallel = phase_diagram(base, dd, om, workers=2)
    assert serial.labels == parallel.labels


def test_first_recurrence_on_axis_start(d_rec):
    rec = first_recurrence(d_rec, 1.2)
    assert rec.x > 0
    assert rec.half_turns in (1, 2)
    assert rec.t > 0


def test_first_recurrence_winding_zones(d_rec):
    # inner starts come back after a full turn, far starts after a half turn
    assert first_recurrence(d_rec, 0.3).half_turns == 2
    assert first_recurrence(d_rec, 1.4).half_turns == 1


def test_first_recurrence_near_fixed_point(d_rec):
    x0 = abs(d_rec.mu_ss)
    rec = first_recurrence(d_rec, x0)
    assert rec.x == pytest.approx(x0, abs=1e-4)


def test_first_recurrence_no_return():
    # without rotation relative to the axis the trajectory never crosses:
    # make the steady mean real and the start real, with negligible rotation
    d = derive(preset("recurrence"))
    d0 = dataclasses.replace(d, mu_ss=0.2 + 0j, delta_d=1e-2,
                             eta=0.0, alpha_d=0.0)
    with pytest.raises(NoRecurrence):
        first_recurrence(d0, 1.0, t_end=5.0 / (d0.nu_bar * d0.gamma))


def test_first_recurrence_rejects_bad_start(d_rec):
    with pytest.raises(ValueError):
        first_recurrence(d_rec, -1.0)


def test_poincare_map_series(d_rec):
    a0 = np.linspace(0.1, 1.5, 71)
    series = poincare_map(d_rec, a0)
    ok = series.half_turns > 0
    assert np.all(np.isfinite(series.recurrence_x[ok]))
    assert np.all(series.recurrence_x[ok] > 0)
    # two winding zones with one flip between them
    assert set(series.half_turns[ok]) == {1, 2}
    assert series.partition is not None
    assert 0.84 <= series.partition <= 0.94
    assert 0.62 <= series.slope_full_turn <= 0.72
    assert 0.77 <= series.slope_half_turn <= 0.87


def test_poincare_slopes_are_contractions(d_rec):
    series = poincare_map(d_rec, np.linspace(0.1, 1.5, 71))
    assert 0 < series.slope_full_turn < 1
    assert 0 < series.slope_half_turn < 1


def test_poincare_monotone_within_zones(d_rec):
    a0 = np.linspace(0.1, 1.5, 71)
    series = poincare_map(d_rec, a0)
    for tag in (1, 2):
        xs = series.recurrence_x[series.half_turns == tag]
        assert np.all(np.diff(xs) > 0)


def test_fixed_point_matches_cycle_radius(d_rec):
    fp = fixed_point(d_rec, 0.1, 0.8)
    # a real-axis start cannot sit exactly on the complex attractor, so the
    # map's fixed point misses |mu_ss| at second order in Im(mu_ss)/|mu_ss|
    # (~1.2e-5 here); first order cancels at the full-turn return
    assert fp == pytest.approx(abs(d_rec.mu_ss), abs=5e-5)


def test_isolated_labels_resolve_under_refinement():
    # isolated single-cell islands are boundary-sampling artifacts: refining
    # the neighborhood four-fold connects them to a same-label region
    base = preset("I")
    dd = TWO_PI * np.linspace(-3e6, 3e6, 40)
    om = TWO_PI * np.linspace(1e4, 1e6, 40)
    diag = phase_diagram(base, dd, om)
    lab = diag.labels

    def isolated(labels, j, i):
        me = labels[j][i]
        ny, nx = len(labels), len(labels[0])
        for jj in range(max(0, j - 1), min(ny, j + 2)):
            for ii in range(max(0, i - 1), min(nx, i + 2)):
                if (jj, ii) != (j, i) and labels[jj][ii] == me:
                    return False
        return True

    islands = [(j, i) for j in range(40) for i in range(40)
               if lab[j][i] is not None and isolated(lab, j, i)]
    for j, i in islands:
        dd_fine = dd[i] + (dd[1] - dd[0]) * np.linspace(-1, 1, 9)
        om_fine = om[j] + (om[1] - om[0]) * np.linspace(-1, 1, 9)
        fine = phase_diagram(base, dd_fine, om_fine).labels
        assert not isolated(fine, 4, 4), (
            f"cell ({dd[i]/TWO_PI:.3g} Hz, {om[j]/TWO_PI:.3g} Hz) stays isolated")


def test_fixed_point_iteration_converges(d_rec):
    fp = fixed_point(d_rec, 0.1, 0.8)
    x = 0.15
    gaps = []
    for _ in range(4):
        x = first_recurrence(d_rec, x).x
        gaps.append(abs(x - fp))
    assert all(b < 0.8 * a for a, b in zip(gaps[:-1], gaps[1:]))

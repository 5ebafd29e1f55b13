"""Tests for the Green-function propagation of lattice Q-distributions."""
import numpy as np
import pytest

from drivenqubit import (EvolutionSpec, GridTooCoarse, ZeroTime, default_grid,
                         derive, evolve_field, excited_field, gaussian_field,
                         green_function, kernel_mean, kernel_variance, mean_at,
                         q_value, square_grid, trajectory_overlay, variance_at)

from conftest import preset


@pytest.fixture(scope="module")
def d_ring():
    return derive(preset("ring"))


@pytest.fixture(scope="module")
def d_hot():
    return derive(preset("ring", temperature=0.2))


def tau(d):
    return 1.0 / (d.nu_bar * d.gamma)


def test_green_zero_time_is_error(d_ring):
    with pytest.raises(ZeroTime):
        green_function(d_ring, 0j, 0j, 0.0)


def test_green_small_time_variance_linear(d_hot):
    t = 1e-4 * tau(d_hot)
    v = kernel_variance(d_hot, t)
    expect = 2.0 * d_hot.nu_bar * d_hot.gamma * t * d_hot.sigma2_ss
    assert v == pytest.approx(expect, rel=1e-3)


def test_green_long_time_forgets_source(d_ring):
    t = 40.0 * tau(d_ring)
    pts = np.array([0.3 + 0.2j, -1.0 + 1.5j, 2.0 - 0.5j])
    a = green_function(d_ring, pts, 0j, t)
    b = green_function(d_ring, pts, 1.5 - 1.0j, t)
    assert np.max(np.abs(a - b)) < 1e-12
    mu = d_ring.mu_ss * np.exp(1j * d_ring.delta_d * t)
    expect = np.exp(-np.abs(pts - mu) ** 2 / (2 * d_ring.sigma2_ss)) / (
        2 * np.pi * d_ring.sigma2_ss)
    assert np.max(np.abs(a - expect)) < 1e-12


def test_green_convolution_identity(d_hot):
    # convolving a width-1/2 source Gaussian with the kernel reproduces the
    # closed-form density
    alpha0 = 0.6 - 0.4j
    t = 0.8 * tau(d_hot)
    x, y = square_grid(6.0, 384)
    src = gaussian_field(x, y, alpha0, 0.5)
    out = evolve_field(d_hot, src, t)
    spec = EvolutionSpec(derived=d_hot, alpha0=alpha0)
    xx, yy = np.meshgrid(x, y)
    expect = q_value(spec, xx + 1j * yy, t)
    assert np.max(np.abs(out.values - expect)) < 1e-8


def test_evolve_field_matches_direct_summation(d_ring):
    x, y = square_grid(4.5, 48)
    fld = excited_field(x, y)
    t = 1.1 * tau(d_ring)
    out = evolve_field(d_ring, fld, t)
    c = float(np.exp(-d_ring.nu_bar * d_ring.gamma * t))
    s = kernel_mean(d_ring, 0j, t)
    v = kernel_variance(d_ring, t)
    xx, yy = np.meshgrid(x, y)
    cell = fld.cell_area
    direct = np.empty_like(fld.values)
    for j in range(len(y)):
        for i in range(len(x)):
            d2 = (x[i] - c * xx - s.real) ** 2 + (y[j] - c * yy - s.imag) ** 2
            direct[j, i] = np.sum(np.exp(-d2 / (2 * v)) / (2 * np.pi * v)
                                  * fld.values) * cell
    assert np.max(np.abs(out.values - direct)) < 1e-12


def test_evolve_field_mass_conserved(d_ring):
    x, y = default_grid(d_ring)
    fld = excited_field(x, y)
    for t_frac in (0.25, 0.5, 1.0, 2.0, 10.0):
        out = evolve_field(d_ring, fld, t_frac * tau(d_ring))
        assert out.integral() == pytest.approx(1.0, abs=1e-4)


def test_evolve_field_ring_contracts_to_steady_disk(d_ring):
    x, y = default_grid(d_ring)
    fld = excited_field(x, y)
    t = 10.0 * tau(d_ring)
    out = evolve_field(d_ring, fld, t)
    spec = EvolutionSpec(derived=d_ring, alpha0=0j)
    assert abs(out.mean() - mean_at(spec, t)) < 1e-3
    assert out.second_central() == pytest.approx(d_ring.sigma2_ss, abs=1e-3)


def test_evolve_field_grid_too_coarse(d_ring):
    x, y = square_grid(5.0, 32)  # cell ~0.32
    fld = excited_field(x, y)
    with pytest.raises(GridTooCoarse):
        evolve_field(d_ring, fld, 1e-3 * tau(d_ring))


def test_chapman_kolmogorov_two_time_composition(d_hot):
    x, y = square_grid(6.0, 256)
    fld = gaussian_field(x, y, 0.9 + 0.3j, 0.5)
    for t1_frac, t2_frac in ((0.3, 0.9), (0.7, 1.4), (1.5, 3.0)):
        t1, t2 = t1_frac * tau(d_hot), t2_frac * tau(d_hot)
        one_step = evolve_field(d_hot, fld, t1 + t2)
        two_step = evolve_field(d_hot, evolve_field(d_hot, fld, t1), t1 + t2,
                                t_start=t1)
        assert np.max(np.abs(one_step.values - two_step.values)) < 1e-6
    # coefficient-level identities behind the composition
    t1, t2 = 0.6 * tau(d_hot), 1.7 * tau(d_hot)
    beta = 0.4 - 0.2j
    m12 = kernel_mean(d_hot, kernel_mean(d_hot, beta, t1), t1 + t2, t_start=t1)
    assert m12 == pytest.approx(kernel_mean(d_hot, beta, t1 + t2), abs=1e-14)
    c2 = np.exp(-2 * d_hot.nu_bar * d_hot.gamma * t2)
    v12 = kernel_variance(d_hot, t1) * c2 + kernel_variance(d_hot, t1 + t2, t_start=t1)
    assert v12 == pytest.approx(kernel_variance(d_hot, t1 + t2), rel=1e-12)


def test_long_time_universality(d_ring):
    x, y = default_grid(d_ring)
    cell = (x[1] - x[0]) * (y[1] - y[0])
    t = 10.0 * tau(d_ring)
    from_ring = evolve_field(d_ring, excited_field(x, y), t)
    from_vacuum = evolve_field(d_ring, gaussian_field(x, y, 0j, 0.5), t)
    l1 = np.sum(np.abs(from_ring.values - from_vacuum.values)) * cell
    assert l1 < 1e-3
    spec = EvolutionSpec(derived=d_ring, alpha0=0j)
    xx, yy = np.meshgrid(x, y)
    steady = q_value(spec, xx + 1j * yy, t)
    assert np.sum(np.abs(from_ring.values - steady)) * cell < 1e-3


def test_trajectory_overlay_endpoints(d_ring):
    alpha0 = 1.0 + 0j
    t_grid = np.linspace(0.0, 12.0 * tau(d_ring), 300)
    ov = trajectory_overlay(d_ring, alpha0, t_grid)
    assert ov.means[0] == pytest.approx(alpha0, abs=1e-15)
    envelope = abs(alpha0 - d_ring.mu_ss) * np.exp(-12.0)
    assert abs(abs(ov.means[-1]) - ov.radius) <= envelope + 1e-12
    assert ov.radius == abs(d_ring.mu_ss)


def test_qfield_moments_on_known_gaussian():
    x, y = square_grid(6.0, 300)
    fld = gaussian_field(x, y, 0.8 - 0.3j, 0.7)
    assert fld.integral() == pytest.approx(1.0, abs=1e-6)
    assert abs(fld.mean() - (0.8 - 0.3j)) < 1e-6
    assert fld.second_central() == pytest.approx(0.7, abs=1e-5)


def test_excited_field_normalized_with_unit_occupation():
    x, y = square_grid(5.0, 400)
    fld = excited_field(x, y)
    assert fld.integral() == pytest.approx(1.0, abs=1e-6)
    assert abs(fld.mean()) < 1e-12
    # Husimi second moment of the one-photon ring: <a a^dag> = 2 per pair
    assert fld.second_central() == pytest.approx(1.0, abs=1e-5)

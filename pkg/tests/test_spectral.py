"""Spectral density, Fourier coefficient tables, measure classification."""

import numpy as np
import pytest

from twogap.domain import make_boundary_matrix, make_domain
from twogap.eigen import eigen_coeffs
from twogap.errors import DegenerateRegime, ValidationError
from twogap.spectral import (
    AbsolutelyContinuous,
    MixedMeasure,
    SpectralDensity,
    comb_limit_diagnostic,
    density,
    fourier_coeffs,
    period_integral,
    spectral_measure,
)

from conftest import random_boundary, random_geometry


def test_half_coupling_density_anchors(ex59):
    # frozen by hand for w = sqrt(3)/2: rho(0) = 3, rho(1/2) = 1/3
    bm, dom = ex59
    assert density(bm, dom, 0.0) == pytest.approx(3.0, abs=1e-14)
    assert density(bm, dom, 0.5) == pytest.approx(1.0 / 3.0, abs=1e-14)


def test_density_is_inverse_square_modulus():
    rng = np.random.default_rng(50)
    lam = np.linspace(-4.0, 4.0, 301)
    for _ in range(10):
        bm = random_boundary(rng)
        dom = random_geometry(rng)
        rho = density(bm, dom, lam)
        m = eigen_coeffs(bm, dom, lam).m
        # relative: the peak grows like 4/w^2, so scale the float budget
        assert np.max(np.abs(rho - 1.0 / m**2)) < 1e-13 * np.max(rho)


def test_density_bounds_and_period():
    rng = np.random.default_rng(51)
    for _ in range(10):
        bm = random_boundary(rng)
        dom = random_geometry(rng)
        rho = SpectralDensity(bm, dom)
        lo, hi = rho.bounds()
        lam = np.linspace(0.0, rho.period, 501)
        vals = rho(lam)
        assert np.all(vals >= lo - 1e-12) and np.all(vals <= hi + 1e-12)
        # extremes are attained at psi/ell and psi/ell + period/2
        assert rho(bm.psi / dom.ell) == pytest.approx(hi, abs=1e-12)
        assert rho(bm.psi / dom.ell + 0.5 / dom.ell) == pytest.approx(lo, abs=1e-12)
        # periodicity (scale by the peak; it can be ~4/w^2)
        assert np.max(np.abs(rho(lam + rho.period) - vals)) < 1e-13 * hi


def test_period_integral_is_inverse_ell():
    rng = np.random.default_rng(52)
    for _ in range(20):
        bm = random_boundary(rng)
        dom = random_geometry(rng)
        assert period_integral(bm, dom) == pytest.approx(1.0 / dom.ell, abs=1e-10)


def test_density_rejects_decoupled():
    bm = make_boundary_matrix(w=0.0, psi=0.25)
    dom = make_domain(2.0, 3.0)
    with pytest.raises(DegenerateRegime):
        density(bm, dom, 0.0)
    with pytest.raises(DegenerateRegime):
        fourier_coeffs(bm)


def test_fourier_table_half_coupling(ex59):
    bm, dom = ex59
    table = fourier_coeffs(bm, K=8, domain=dom)
    assert np.array_equal(table.k, np.arange(-8, 9))
    assert np.allclose(table.values, 0.5 ** np.abs(table.k))
    assert table.step == dom.ell
    assert table.tail == pytest.approx(2.0 * 0.5**9 / 0.5)


def test_fourier_table_synthesizes_density():
    rng = np.random.default_rng(53)
    lam = np.linspace(-2.0, 2.0, 101)
    for _ in range(5):
        bm = random_boundary(rng)
        dom = random_geometry(rng)
        table = fourier_coeffs(bm, domain=dom, tol=1e-13)
        synth = np.zeros_like(lam, dtype=complex)
        for k, a_k in zip(table.k, table.values):
            # density(lam) = sum_k a_k e(k ell lam - ... ); coefficients carry e(-k psi)
            synth += a_k * np.exp(2j * np.pi * k * dom.ell * lam)
        assert np.max(np.abs(synth - density(bm, dom, lam))) < 1e-11


def test_fourier_auto_window_honors_tol():
    bm = make_boundary_matrix(w=0.5, psi=0.3)
    table = fourier_coeffs(bm, tol=1e-9)
    assert table.tail <= 1e-9
    with pytest.raises(ValidationError):
        fourier_coeffs(bm, K=-1)


def test_normalization_identity():
    # m(0)^-2 = sum_k a_k e(k psi)|_{lam=0}: at psi = 0 the plain total works
    bm = make_boundary_matrix(w=0.7)
    dom = make_domain(2.0, 3.0)
    table = fourier_coeffs(bm, domain=dom, tol=1e-14)
    m0_sq = float(eigen_coeffs(bm, dom, 0.0).m) ** 2
    assert m0_sq * np.real(table.total()) == pytest.approx(1.0, abs=1e-12)


def test_comb_limit_monotone():
    dom = make_domain(2.0, 3.0)
    recs = comb_limit_diagnostic(dom, psi=0.0, w_sequence=[0.5, 0.1, 0.02], window_width=0.1)
    masses = [r["window_mass"] for r in recs]
    assert all(b > a for a, b in zip(masses, masses[1:]))
    for r in recs:
        assert r["period_mass"] == pytest.approx(1.0, abs=1e-15)
        assert r["off_window"] == pytest.approx(r["period_mass"] - r["window_mass"])
    # nearly all mass is inside the window by w = 0.02
    assert masses[-1] > 0.99


def test_comb_window_mass_matches_quadrature():
    # cross-check the closed-form antiderivative against brute summation
    # at a moderate w where the density is tame
    dom = make_domain(2.5, 3.0)  # ell = 1.5
    psi, w = 0.2, 0.6
    recs = comb_limit_diagnostic(dom, psi=psi, w_sequence=[w], window_width=0.25)
    bm = make_boundary_matrix(w, psi=psi)
    center = psi / dom.ell
    edges = np.linspace(center - 0.125, center + 0.125, 200001)
    mids = 0.5 * (edges[:-1] + edges[1:])
    brute = float(np.sum(density(bm, dom, mids)) * (edges[1] - edges[0]))
    assert recs[0]["window_mass"] == pytest.approx(brute, abs=1e-8)


def test_comb_window_validation():
    dom = make_domain(2.0, 3.0)
    with pytest.raises(ValidationError):
        comb_limit_diagnostic(dom, psi=0.0, w_sequence=[0.5], window_width=1.5)


def test_measure_dispatch():
    dom = make_domain(2.0, 3.0)
    ac = spectral_measure(make_boundary_matrix(w=0.8), dom)
    assert isinstance(ac, AbsolutelyContinuous)
    assert ac.kind == "absolutely_continuous"
    assert ac.density.period == pytest.approx(1.0)

    mixed = spectral_measure(make_boundary_matrix(w=0.0, psi=0.25), dom)
    assert isinstance(mixed, MixedMeasure)
    assert mixed.kind == "mixed"
    assert mixed.flat_density == 1.0
    assert np.allclose(mixed.atoms(0, 3), [0.25, 1.25, 2.25])

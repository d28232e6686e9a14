"""Translation-series multipliers: closed forms, algebra, spatial action."""

import numpy as np
import pytest

from twogap.domain import e2pi, make_boundary_matrix, make_domain
from twogap.errors import DegenerateRegime, ValidationError
from twogap.multipliers import (
    BLOCK_KIND,
    MULTIPLIER_KINDS,
    apply_multiplier,
    block_multiplier,
    block_multiplier_composed,
    compose_multipliers,
    conjugate_multiplier,
    make_multiplier,
)
from twogap.packets import StepPacket

from conftest import random_boundary, random_geometry, random_packet

LAM = np.linspace(-3.7, 4.1, 113)


def coeff_a(bm, dom, lam):
    return (
        e2pi(bm.phi) / bm.w
        * e2pi(lam)
        * (1.0 - bm.q * e2pi(-bm.psi + dom.ell * lam))
    )


def coeff_c(bm, dom, lam):
    return (
        e2pi(bm.phi - bm.theta) / bm.w
        * e2pi(-dom.gap * lam)
        * (1.0 - bm.q * e2pi(bm.psi - dom.ell * lam))
    )


CLOSED_FORMS = {
    "identity": lambda bm, dom, lam: np.ones_like(lam, dtype=complex),
    "a": coeff_a,
    "c": coeff_c,
    "a_inv": lambda bm, dom, lam: 1.0 / coeff_a(bm, dom, lam),
    "c_inv": lambda bm, dom, lam: 1.0 / coeff_c(bm, dom, lam),
    "a_conj_inv": lambda bm, dom, lam: 1.0 / np.conj(coeff_a(bm, dom, lam)),
    "c_conj_inv": lambda bm, dom, lam: 1.0 / np.conj(coeff_c(bm, dom, lam)),
    "a_inv_c": lambda bm, dom, lam: coeff_c(bm, dom, lam) / coeff_a(bm, dom, lam),
    "c_inv_a": lambda bm, dom, lam: coeff_a(bm, dom, lam) / coeff_c(bm, dom, lam),
    "m_squared_inv": lambda bm, dom, lam: 1.0 / np.abs(coeff_a(bm, dom, lam)) ** 2,
}


@pytest.mark.parametrize("kind", MULTIPLIER_KINDS)
def test_series_matches_closed_form(kind):
    rng = np.random.default_rng(101)
    for _ in range(5):
        bm = random_boundary(rng)
        dom = random_geometry(rng)
        m = make_multiplier(bm, dom, kind, eps=1e-13)
        got = m.value(LAM)
        want = CLOSED_FORMS[kind](bm, dom, LAM)
        assert np.max(np.abs(got - want)) < 1e-11


def test_density_series_is_real_even_lattice():
    bm = make_boundary_matrix(w=np.sqrt(3.0) / 2.0)
    dom = make_domain(2.0, 3.0)
    m = make_multiplier(bm, dom, "m_squared_inv")
    # zero phases: coefficients are q^|k|, real and symmetric
    for k, c in m.coeffs.items():
        assert c == pytest.approx(0.5 ** abs(k))
        assert m.coeffs[-k] == pytest.approx(np.conj(c))
    assert m.value(0.0) == pytest.approx(3.0, abs=1e-12)
    assert m.value(0.5) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_transform_intertwines_spatial_action():
    # the defining property: (M f)^ = M(lambda) f^(lambda)
    rng = np.random.default_rng(7)
    for _ in range(4):
        bm = random_boundary(rng)
        dom = random_geometry(rng)
        f = random_packet(rng, freqs=(-1, 0, 2))
        for kind in ("a_inv", "a_inv_c", "m_squared_inv", "c"):
            m = make_multiplier(bm, dom, kind, eps=1e-13)
            g = apply_multiplier(m, f)
            lhs = g.transform(LAM)
            rhs = m.value(LAM) * f.transform(LAM)
            assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_apply_matches_manual_translates():
    rng = np.random.default_rng(21)
    bm = random_boundary(rng)
    dom = random_geometry(rng)
    f = random_packet(rng)
    m = make_multiplier(bm, dom, "a_inv", eps=1e-12)
    # (M f)(x) = scalar sum_n c_n f(x + base + n step) = sum c_n T_{-base-n step} f
    manual = StepPacket.zero()
    for n, c in sorted(m.coeffs.items()):
        manual = manual + f.translate(-(m.base_shift + n * m.step)).scale(m.scalar * c)
    assert apply_multiplier(m, f).distance2(manual) < 1e-24


def test_apply_oscillatory_cell_phase():
    # translating a frequency-n cell must pick up e(n * shift)
    dom = make_domain(2.0, 3.0)
    bm = make_boundary_matrix(w=0.6, psi=0.3)
    f = StepPacket.box(0.0, 1.0, 1.0, freq=2)
    m = make_multiplier(bm, dom, "a", eps=1e-12)
    g = apply_multiplier(m, f)
    xs = np.array([1.2, 1.7, 2.4])
    want = m.scalar * (
        m.coeffs[0] * f.sample(xs + m.base_shift)
        + m.coeffs[1] * f.sample(xs + m.base_shift + m.step)
    )
    assert np.max(np.abs(g.sample(xs) - want)) < 1e-13


def test_apply_empty_packet():
    bm = make_boundary_matrix(w=0.5)
    dom = make_domain(2.0, 3.0)
    m = make_multiplier(bm, dom, "a_inv")
    assert apply_multiplier(m, StepPacket.zero()).is_empty


def test_conjugate_is_pointwise_conjugate():
    rng = np.random.default_rng(3)
    bm = random_boundary(rng)
    dom = random_geometry(rng)
    for kind in ("a", "a_inv", "a_inv_c", "m_squared_inv"):
        m = make_multiplier(bm, dom, kind)
        mc = conjugate_multiplier(m)
        assert np.max(np.abs(mc.value(LAM) - np.conj(m.value(LAM)))) < 1e-13


def test_conjugate_involution():
    bm = make_boundary_matrix(w=0.55, theta=0.2, phi=0.4, psi=0.8)
    dom = make_domain(1.5, 2.75)
    m = make_multiplier(bm, dom, "c_inv")
    back = conjugate_multiplier(conjugate_multiplier(m))
    assert back.kind == m.kind
    assert back.scalar == pytest.approx(m.scalar)
    assert back.coeffs.keys() == m.coeffs.keys()


def test_compose_is_pointwise_product():
    rng = np.random.default_rng(11)
    bm = random_boundary(rng)
    dom = random_geometry(rng)
    m1 = make_multiplier(bm, dom, "a", eps=1e-13)
    m2 = make_multiplier(bm, dom, "a_inv", eps=1e-13)
    prod = compose_multipliers(m1, m2)
    assert np.max(np.abs(prod.value(LAM) - m1.value(LAM) * m2.value(LAM))) < 1e-12
    # a * a^-1 = 1 up to the declared truncation tail
    assert np.max(np.abs(prod.value(LAM) - 1.0)) < prod.tail + 1e-12


def test_scattering_quotients_are_reciprocal():
    # |a| = |c| on the real axis, so (c/a) * (a/c) = 1 exactly
    rng = np.random.default_rng(13)
    bm = random_boundary(rng)
    dom = random_geometry(rng)
    m1 = make_multiplier(bm, dom, "a_inv_c", eps=1e-13)
    m2 = make_multiplier(bm, dom, "c_inv_a", eps=1e-13)
    prod = compose_multipliers(m1, m2)
    assert np.max(np.abs(prod.value(LAM) - 1.0)) < prod.tail + 1e-11


def test_compose_rejects_mismatched_lattice():
    bm = make_boundary_matrix(w=0.5)
    m1 = make_multiplier(bm, make_domain(2.0, 3.0), "a")
    m2 = make_multiplier(bm, make_domain(2.5, 3.0), "a")
    with pytest.raises(ValidationError):
        compose_multipliers(m1, m2)


@pytest.mark.parametrize("dest,src", sorted(BLOCK_KIND))
def test_block_entry_two_routes(dest, src):
    rng = np.random.default_rng(sum(map(ord, dest + src)))
    bm = random_boundary(rng)
    dom = random_geometry(rng)
    direct = block_multiplier(bm, dom, dest, src, eps=1e-13)
    composed = block_multiplier_composed(bm, dom, dest, src, eps=1e-13)
    spread = np.max(np.abs(direct.value(LAM) - composed.value(LAM)))
    assert spread < direct.tail + composed.tail + 1e-11


def test_block_entry_unknown_component():
    bm = make_boundary_matrix(w=0.5)
    dom = make_domain(2.0, 3.0)
    with pytest.raises(ValidationError):
        block_multiplier(bm, dom, "izero", "nowhere")


def test_decoupled_regime_rejected():
    bm = make_boundary_matrix(w=0.0, theta=0.25)
    dom = make_domain(2.0, 3.0)
    with pytest.raises(DegenerateRegime):
        make_multiplier(bm, dom, "a_inv")
    # identity needs no coupling
    make_multiplier(bm, dom, "identity")


def test_unknown_kind_rejected():
    bm = make_boundary_matrix(w=0.5)
    dom = make_domain(2.0, 3.0)
    with pytest.raises(ValidationError):
        make_multiplier(bm, dom, "b_inv")


def test_bad_eps_rejected():
    bm = make_boundary_matrix(w=0.5)
    dom = make_domain(2.0, 3.0)
    with pytest.raises(ValidationError):
        make_multiplier(bm, dom, "a_inv", eps=0.0)


def test_tail_bound_is_honest():
    bm = make_boundary_matrix(w=0.4, psi=0.37)
    dom = make_domain(2.3, 3.1)
    crude = make_multiplier(bm, dom, "a_inv", eps=1e-5)
    fine = make_multiplier(bm, dom, "a_inv", eps=1e-15)
    gap = np.max(np.abs(crude.value(LAM) - fine.value(LAM)))
    assert gap <= crude.tail + 1e-13
    assert crude.tail <= 1e-5 * 1.000001


def test_shifts_follow_lattice():
    bm = make_boundary_matrix(w=0.5, psi=0.1)
    dom = make_domain(2.5, 4.0)
    m = make_multiplier(bm, dom, "a_inv", eps=1e-10)
    shifts = m.shifts()
    assert shifts[0] == pytest.approx(-1.0)
    assert np.allclose(np.diff(shifts), dom.ell)

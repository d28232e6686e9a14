"""Sobolev point-evaluation kernels and the obstacle boundary form."""

import numpy as np
import pytest

from twogap.domain import make_domain
from twogap.eigen import eigenfunction_traces
from twogap.errors import ValidationError
from twogap.rkhs import (
    BoundaryTrace,
    KernelSpec,
    boundary_form,
    h1_inner,
    kernel_endpoint,
    kernel_interior,
    momentum_defect,
    point_eval_via_kernel,
    trace_condition_residuals,
)

from conftest import random_boundary, random_geometry


def gaussian(center, width=0.7, amp=1.0):
    """A smooth decaying test function and its derivative."""

    def f(y):
        y = np.asarray(y, float)
        return amp * np.exp(-((y - center) ** 2) / (2.0 * width**2))

    def df(y):
        y = np.asarray(y, float)
        return -amp * (y - center) / width**2 * np.exp(
            -((y - center) ** 2) / (2.0 * width**2)
        )

    return f, df


def test_endpoint_kernels_reproduce_finite_interval():
    spec = KernelSpec(1.0, 2.0)
    f, df = gaussian(1.4, 0.5, 1.0 - 0.75j)
    left = point_eval_via_kernel(f, df, spec, "left")
    right = point_eval_via_kernel(f, df, spec, "right")
    assert abs(left - f(1.0)) < 1e-6
    assert abs(right - f(2.0)) < 1e-6


def test_endpoint_kernels_halflines():
    left_line = KernelSpec(-np.inf, 0.0)
    f = lambda y: np.exp(0.9 * np.asarray(y, float))
    df = lambda y: 0.9 * np.exp(0.9 * np.asarray(y, float))
    got = point_eval_via_kernel(f, df, left_line, "right")
    assert abs(got - 1.0) < 1e-6

    right_line = KernelSpec(3.0, np.inf)
    g = lambda y: np.exp(-1.1 * (np.asarray(y, float) - 3.0)) * (2.0 + 1.0j)
    dg = lambda y: -1.1 * g(y)
    got = point_eval_via_kernel(g, dg, right_line, "left")
    assert abs(got - (2.0 + 1.0j)) < 1e-6


def test_kernels_self_consistent():
    # k_a evaluated through its own pairing: <k_a, k_a> = k_a(a)
    spec = KernelSpec(1.0, 2.5)
    for which, point in (("left", 1.0), ("right", 2.5)):
        k, dk = kernel_endpoint(spec, which)
        got = h1_inner(k, dk, k, dk, spec)
        assert abs(got - k(point)) < 1e-10


def test_interior_exact_on_exponential_span():
    spec = KernelSpec(1.0, 2.0)
    c1, c2 = 0.8 - 0.2j, -0.35 + 1.1j
    f = lambda y: c1 * np.exp(np.asarray(y, float)) + c2 * np.exp(-np.asarray(y, float))
    df = lambda y: c1 * np.exp(np.asarray(y, float)) - c2 * np.exp(-np.asarray(y, float))
    for x in (1.2, 1.5, 1.83):
        got = point_eval_via_kernel(f, df, spec, x)
        assert abs(got - f(x)) < 1e-10


def test_interior_is_boundary_interpolant_off_span():
    # outside span{e^y, e^-y} the cosh combination returns the two-point
    # boundary interpolant, not f(x) — pinned down, not glossed over
    spec = KernelSpec(1.0, 2.0)
    a, b = spec.lo, spec.hi
    f, df = gaussian(1.5, 0.4)
    x = 1.37
    got = point_eval_via_kernel(f, df, spec, x)
    interp = (np.sinh(b - x) * f(a) + np.sinh(x - a) * f(b)) / np.sinh(b - a)
    assert abs(got - interp) < 1e-10
    assert abs(got - f(x)) > 1e-2


def test_green_identity():
    dom = make_domain(2.25, 3.5)
    f, df = gaussian(0.6, 2.0, 1.0 + 0.5j)
    g, dg = gaussian(2.8, 1.5, -0.3 + 1.0j)
    defect = momentum_defect(f, df, g, dg, dom)
    tf = BoundaryTrace(f(0.0), f(1.0), f(dom.alpha), f(dom.beta))
    tg = BoundaryTrace(g(0.0), g(1.0), g(dom.alpha), g(dom.beta))
    assert abs(defect - 1j * boundary_form(tf, tg)) < 1e-10


def test_constrained_traces_annihilate_form():
    rng = np.random.default_rng(110)
    for _ in range(10):
        bm = random_boundary(rng)
        mat = bm.matrix()

        def constrained(gl):
            gr = mat @ gl
            return BoundaryTrace(at0=gr[0], at1=gl[0], at_alpha=gr[1], at_beta=gl[1])

        tf = constrained(rng.normal(size=2) + 1j * rng.normal(size=2))
        tg = constrained(rng.normal(size=2) + 1j * rng.normal(size=2))
        assert abs(boundary_form(tf, tg)) < 1e-13
        assert abs(boundary_form(tf, tf)) < 1e-13
        d1, d2 = trace_condition_residuals(bm, tf)
        assert d1 < 1e-13 and d2 < 1e-13
        # the two residual arrangements agree (unitarity)
        assert abs(d1 - d2) < 1e-13


def test_unconstrained_trace_detected():
    rng = np.random.default_rng(111)
    bm = random_boundary(rng)
    tr = BoundaryTrace(1.0, 0.5, -0.25j, 2.0)
    d1, d2 = trace_condition_residuals(bm, tr)
    assert d1 > 1e-3 and d2 > 1e-3
    assert abs(boundary_form(tr, tr)) > 1e-3


def test_eigenfunction_traces_on_domain():
    rng = np.random.default_rng(112)
    for _ in range(10):
        bm = random_boundary(rng)
        dom = random_geometry(rng)
        lam = rng.uniform(-3.0, 3.0)
        rho1, rho2 = eigenfunction_traces(bm, dom, lam)
        tr = BoundaryTrace(at0=rho2[0], at1=rho1[0], at_alpha=rho2[1], at_beta=rho1[1])
        d1, d2 = trace_condition_residuals(bm, tr)
        assert d1 < 1e-12 and d2 < 1e-12
        assert abs(boundary_form(tr, tr)) < 1e-12


def test_validation():
    with pytest.raises(ValidationError):
        KernelSpec(2.0, 1.0)
    with pytest.raises(ValidationError):
        KernelSpec(-np.inf, np.inf)
    with pytest.raises(ValidationError):
        kernel_endpoint(KernelSpec(-np.inf, 0.0), "left")
    with pytest.raises(ValidationError):
        kernel_endpoint(KernelSpec(1.0, 2.0), "middle")
    with pytest.raises(ValidationError):
        kernel_interior(KernelSpec(3.0, np.inf), 4.0)
    with pytest.raises(ValidationError):
        kernel_interior(KernelSpec(1.0, 2.0), 2.5)

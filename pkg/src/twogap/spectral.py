"""Spectral data of the coupled model: density, its Fourier series, and the
decoupled limit diagnostics.

For w > 0 the spectrum is purely absolutely continuous with density (with
respect to Lebesgue measure in lambda)

    rho(lambda) = m(lambda)^-2
               = (1 - q^2) / (1 - 2 q cos(2 pi (ell lambda - psi)) + q^2),

a Poisson-kernel profile in the periodic variable ell lambda - psi with
q = sqrt(1 - w^2).  Its mean over one period 1/ell is exactly 1, and its
Fourier coefficients on the lattice are a_k = q^|k| e(-k psi).

As w -> 0 the density concentrates at the lattice points (psi + n)/ell and
the measure converges to Lebesgue-plus-comb; the diagnostic here measures
that concentration.  At w = 0 the model itself is decoupled: the measure
splits into an absolutely continuous half-line part and atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import BoundaryMatrix, ExteriorDomain, TWO_PI, e2pi
from .errors import DegenerateRegime, ValidationError
from .quadrature import adaptive_simpson

__all__ = [
    "SpectralDensity",
    "FourierCoefficientTable",
    "density",
    "period_integral",
    "fourier_coeffs",
    "comb_limit_diagnostic",
    "AbsolutelyContinuous",
    "MixedMeasure",
    "spectral_measure",
]


def density(bm: BoundaryMatrix, domain: ExteriorDomain, lam):
    """Spectral density m(lambda)^-2; requires w > 0."""
    if bm.w == 0.0:
        raise DegenerateRegime("density is undefined at w = 0 (atomic part)")
    lam = np.asarray(lam, dtype=float)
    q = bm.q
    angle = TWO_PI * (domain.ell * lam - bm.psi)
    return (1.0 - q * q) / (1.0 - 2.0 * q * np.cos(angle) + q * q)


@dataclass(frozen=True)
class SpectralDensity:
    """Callable wrapper holding the density together with its invariants."""

    bm: BoundaryMatrix
    domain: ExteriorDomain

    @property
    def period(self) -> float:
        return 1.0 / self.domain.ell

    @property
    def b_modulus(self) -> float:
        return self.bm.q

    def __call__(self, lam):
        return density(self.bm, self.domain, lam)

    def bounds(self):
        """(min, max) of the density: w^2/(1+q)^2 ... w^2/(1-q)^2."""
        q = self.bm.q
        w2 = 1.0 - q * q
        return w2 / (1.0 + q) ** 2, w2 / (1.0 - q) ** 2


def period_integral(bm: BoundaryMatrix, domain: ExteriorDomain, tol: float = 1e-12) -> float:
    """Integral of the density over one period (equals 1/ell exactly)."""
    rho = SpectralDensity(bm, domain)
    return float(
        np.real(adaptive_simpson(lambda t: rho(t), 0.0, rho.period, tol=tol))
    )


@dataclass(frozen=True)
class FourierCoefficientTable:
    """Density Fourier coefficients a_k = q^|k| e(-k psi) for |k| <= K."""

    k: np.ndarray
    values: np.ndarray
    step: float | None
    tail: float

    def total(self) -> complex:
        return complex(np.sum(self.values))


def fourier_coeffs(
    bm: BoundaryMatrix,
    K: int | None = None,
    domain: ExteriorDomain | None = None,
    tol: float = 1e-12,
) -> FourierCoefficientTable:
    """Coefficient table of the density in the periodic lattice variable.

    When K is omitted, the smallest window with geometric tail bound
    2 q^(K+1)/(1-q) <= tol is used.  The lattice step alpha - 1 is recorded
    when a domain is supplied.
    """
    if bm.w == 0.0:
        raise DegenerateRegime("fourier_coeffs is undefined at w = 0")
    q = bm.q
    if K is None:
        if q == 0.0:
            K = 0
        else:
            K = 0
            while 2.0 * q ** (K + 1) / (1.0 - q) > tol:
                K += 1
    K = int(K)
    if K < 0:
        raise ValidationError("K must be nonnegative")
    k = np.arange(-K, K + 1)
    values = q ** np.abs(k) * e2pi(-k * bm.psi)
    tail = 2.0 * q ** (K + 1) / (1.0 - q) if q > 0.0 else 0.0
    return FourierCoefficientTable(
        k=k, values=values, step=(domain.ell if domain is not None else None), tail=tail
    )


def comb_limit_diagnostic(
    domain: ExteriorDomain,
    psi: float,
    w_sequence,
    window_width: float,
    theta: float = 0.0,
    phi: float = 0.0,
):
    """Concentration of the density near one lattice point as w decreases.

    For each w, integrates the density over a window of the given width
    centered at the lattice point psi/ell, and reports the per-period total
    (always 1/ell) and the off-window remainder.  The window mass must
    increase toward the full per-period mass as w -> 0 (tested as a trend,
    not a tolerance).

    The window integral uses the exact antiderivative
    2 arctan((1+q)/(1-q) tan(s/2)) of the periodized density; adaptive
    quadrature would stall on the near-comb spikes (height ~ 4/w^2, width
    ~ w^2) that are the whole point of this diagnostic.
    """
    from .domain import make_boundary_matrix

    if not (0.0 < window_width < 1.0 / domain.ell):
        raise ValidationError("window width must be inside one period")
    half = window_width / 2.0
    records = []
    for w in w_sequence:
        bm = make_boundary_matrix(w, theta, phi, psi)
        q = bm.q
        s_half = np.pi * domain.ell * window_width  # half-window, angle units
        amp = (1.0 + q) / (1.0 - q)
        mass_in = float(
            2.0 * np.arctan(amp * np.tan(s_half / 2.0)) / (np.pi * domain.ell)
        )
        total = 1.0 / domain.ell
        records.append(
            {
                "w": float(w),
                "window_mass": mass_in,
                "period_mass": total,
                "off_window": total - mass_in,
            }
        )
    return records


@dataclass(frozen=True)
class AbsolutelyContinuous:
    """w > 0: purely absolutely continuous spectrum with the given density."""

    density: SpectralDensity
    kind: str = "absolutely_continuous"


@dataclass(frozen=True)
class MixedMeasure:
    """w = 0: Lebesgue measure on the line plus the lattice comb of atoms.

    The half-line continuum contributes a flat density; the middle-interval
    bound states contribute atoms at (psi + n)/ell whose per-period count is
    one atom per 1/ell of frequency.
    """

    atom_lattice_offset: float
    atom_spacing: float
    flat_density: float = 1.0
    kind: str = "mixed"

    def atoms(self, n_lo: int, n_hi: int) -> np.ndarray:
        n = np.arange(n_lo, n_hi)
        return self.atom_lattice_offset + n * self.atom_spacing


def spectral_measure(bm: BoundaryMatrix, domain: ExteriorDomain):
    """Tagged spectral-measure summary: AC for w > 0, mixed at w = 0."""
    if bm.w > 0.0:
        return AbsolutelyContinuous(density=SpectralDensity(bm, domain))
    return MixedMeasure(
        atom_lattice_offset=bm.psi / domain.ell,
        atom_spacing=1.0 / domain.ell,
    )

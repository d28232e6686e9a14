"""Lattice translation series: the Fourier multipliers of the model.

Every operator this package applies to packets is, on the transform side,
multiplication by

    M(lambda) = scalar * e(base * lambda) * sum_n  c_n e(n * step * lambda),

with integer lattice indices n and step = alpha - 1.  On the spatial side
(with the convention (e(s lambda) f^)v (x) = f(x + s)) this acts as

    (M f)(x) = scalar * sum_n  c_n f(x + base + n * step),

i.e. a finite weighted sum of translates — exact on step packets.  The
geometric series for the inverse coefficient functions are truncated at a
relative tolerance eps; the ``tail`` field carries the sup-norm bound
|scalar| * sum of dropped |c_n| so callers can budget truncation error.

Kinds
-----
a_inv, c_inv          reciprocals of the two eigenfunction coefficients
a_conj_inv, c_conj_inv  reciprocals of their conjugates
a_inv_c, c_inv_a      the scattering quotients c/a and a/c
m_squared_inv         1/|a|^2, the spectral density factor (two-sided series)
identity              multiplication by 1
a, c                  the coefficient functions themselves (finite, 2 terms)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import BoundaryMatrix, ExteriorDomain, e2pi
from .errors import DegenerateRegime, ValidationError
from .packets import StepPacket, _assemble

__all__ = [
    "MultiplierSeries",
    "make_multiplier",
    "apply_multiplier",
    "conjugate_multiplier",
    "compose_multipliers",
    "BLOCK_KIND",
    "block_multiplier",
    "block_multiplier_composed",
    "MULTIPLIER_KINDS",
]

MULTIPLIER_KINDS = (
    "identity",
    "a_inv",
    "c_inv",
    "a_inv_c",
    "c_inv_a",
    "a_conj_inv",
    "c_conj_inv",
    "m_squared_inv",
    "a",
    "c",
)

# (destination component, source component) -> multiplier kind.  These are
# the nine entries of the evolution block matrix: the (i, j) entry is
# m^-2 a_i conj(a_j) with (a_-, a_0, a_+) = (a, 1, c), which telescopes to
# the kinds below.
BLOCK_KIND = {
    ("iminus", "iminus"): "identity",
    ("iminus", "izero"): "a_conj_inv",
    ("iminus", "iplus"): "c_inv_a",
    ("izero", "iminus"): "a_inv",
    ("izero", "izero"): "m_squared_inv",
    ("izero", "iplus"): "c_inv",
    ("iplus", "iminus"): "a_inv_c",
    ("iplus", "izero"): "c_conj_inv",
    ("iplus", "iplus"): "identity",
}

_CONJ_KIND = {
    "identity": "identity",
    "a_inv": "a_conj_inv",
    "a_conj_inv": "a_inv",
    "c_inv": "c_conj_inv",
    "c_conj_inv": "c_inv",
    "a_inv_c": "c_inv_a",
    "c_inv_a": "a_inv_c",
    "m_squared_inv": "m_squared_inv",
}


@dataclass(frozen=True)
class MultiplierSeries:
    """One translation series; see the module docstring for semantics."""

    scalar: complex
    base_shift: float
    step: float
    coeffs: dict = field(default_factory=dict)  # int lattice index -> complex
    kind: str = "custom"
    tail: float = 0.0

    def value(self, lam) -> np.ndarray:
        """Pointwise multiplier value on a real lambda grid."""
        lam = np.asarray(lam, dtype=float)
        scalar_input = lam.ndim == 0
        lam = np.atleast_1d(lam)
        ns = np.array(sorted(self.coeffs), dtype=float)
        cs = np.array([self.coeffs[int(n)] for n in ns], dtype=complex)
        acc = np.zeros(lam.shape, dtype=complex)
        chunk = max(1, int(2e6 / max(len(lam), 1)))
        for start in range(0, len(ns), chunk):
            sl = slice(start, start + chunk)
            acc += (cs[sl, None] * e2pi(ns[sl, None] * self.step * lam[None, :])).sum(axis=0)
        out = self.scalar * e2pi(self.base_shift * lam) * acc
        return out[0] if scalar_input else out

    def sum_abs(self) -> float:
        """|scalar| times the coefficient l1 mass (sup-norm bound)."""
        return abs(self.scalar) * float(sum(abs(c) for c in self.coeffs.values()))

    def shifts(self) -> np.ndarray:
        """The spatial shifts base + n * step, sorted by lattice index."""
        ns = np.array(sorted(self.coeffs), dtype=float)
        return self.base_shift + ns * self.step


def _geom_terms(q: float, eps: float) -> int:
    """Smallest N with q^(N+1)/(1-q) <= eps (tail of a unit geometric series)."""
    if eps <= 0:
        raise ValidationError("truncation tolerance must be positive")
    if q == 0.0:
        return 0
    n = max(0, int(np.ceil(np.log(eps * (1.0 - q)) / np.log(q))) - 1)
    while q ** (n + 1) / (1.0 - q) > eps:
        n += 1
    return n


def make_multiplier(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    kind: str,
    eps: float = 1e-12,
) -> MultiplierSeries:
    """Build one of the named series for (bm, domain) at tolerance eps."""
    if kind == "identity":
        return MultiplierSeries(1.0 + 0j, 0.0, domain.ell, {0: 1.0 + 0j}, "identity", 0.0)
    w, q = bm.w, bm.q
    theta, phi, psi = bm.theta, bm.phi, bm.psi
    ell, gap = domain.ell, domain.gap
    if kind not in MULTIPLIER_KINDS:
        raise ValidationError(f"unknown multiplier kind {kind!r}")
    if w == 0.0:
        raise DegenerateRegime(
            f"multiplier {kind!r} needs w > 0 (decoupled regime has no "
            "transmission; use the dedicated decoupled evolution)"
        )

    if kind == "a":
        coeffs = {0: 1.0 + 0j, 1: -q * complex(e2pi(-psi))}
        return MultiplierSeries(complex(e2pi(phi)) / w, 1.0, ell, coeffs, "a", 0.0)
    if kind == "c":
        coeffs = {0: 1.0 + 0j, -1: -q * complex(e2pi(psi))}
        return MultiplierSeries(complex(e2pi(phi - theta)) / w, -gap, ell, coeffs, "c", 0.0)

    n_terms = _geom_terms(q, eps)
    geo_tail = q ** (n_terms + 1) / (1.0 - q) if q > 0.0 else 0.0

    if kind == "a_inv":
        coeffs = {n: q**n * complex(e2pi(-n * psi)) for n in range(n_terms + 1)}
        return MultiplierSeries(
            w * complex(e2pi(-phi)), -1.0, ell, coeffs, "a_inv", w * geo_tail
        )
    if kind == "c_inv":
        coeffs = {-n: q**n * complex(e2pi(n * psi)) for n in range(n_terms + 1)}
        return MultiplierSeries(
            w * complex(e2pi(theta - phi)), gap, ell, coeffs, "c_inv", w * geo_tail
        )
    if kind == "m_squared_inv":
        k_terms = _geom_terms(q, eps / 2.0)
        coeffs = {
            k: q ** abs(k) * complex(e2pi(-k * psi))
            for k in range(-k_terms, k_terms + 1)
        }
        tail = 2.0 * q ** (k_terms + 1) / (1.0 - q) if q > 0.0 else 0.0
        return MultiplierSeries(1.0 + 0j, 0.0, ell, coeffs, "m_squared_inv", tail)
    if kind == "a_inv_c":
        coeffs = {-1: -q * complex(e2pi(psi))}
        for n in range(n_terms + 1):
            coeffs[n] = w * w * q**n * complex(e2pi(-n * psi))
        return MultiplierSeries(
            complex(e2pi(-theta)), -(gap + 1.0), ell, coeffs, "a_inv_c",
            w * w * geo_tail,
        )
    if kind == "c_inv_a":
        return conjugate_multiplier(make_multiplier(bm, domain, "a_inv_c", eps))
    if kind == "a_conj_inv":
        return conjugate_multiplier(make_multiplier(bm, domain, "a_inv", eps))
    if kind == "c_conj_inv":
        return conjugate_multiplier(make_multiplier(bm, domain, "c_inv", eps))
    raise ValidationError(f"unknown multiplier kind {kind!r}")  # pragma: no cover


def conjugate_multiplier(m: MultiplierSeries) -> MultiplierSeries:
    """Pointwise complex conjugate on the real axis.

    conj(M)(lambda) has conjugated scalar, negated base shift and the
    coefficient at -n equal to conj(c_n).
    """
    coeffs = {-n: np.conj(c) for n, c in m.coeffs.items()}
    kind = _CONJ_KIND.get(m.kind, f"conj({m.kind})")
    return MultiplierSeries(
        np.conj(m.scalar), -m.base_shift, m.step, coeffs, kind, m.tail
    )


def compose_multipliers(m1: MultiplierSeries, m2: MultiplierSeries) -> MultiplierSeries:
    """Product multiplier (convolution of coefficient tables).

    Both factors must live on the same lattice step.  The tail bound adds
    the cross terms |M1_tail|*|M2| + |M2_tail|*|M1| + |M1_tail||M2_tail|.
    """
    if abs(m1.step - m2.step) > 1e-12 * max(1.0, abs(m1.step)):
        raise ValidationError("cannot compose series on different lattices")
    coeffs = {}
    for n1, c1 in m1.coeffs.items():
        for n2, c2 in m2.coeffs.items():
            k = n1 + n2
            coeffs[k] = coeffs.get(k, 0.0 + 0j) + c1 * c2
    tail = m1.tail * m2.sum_abs() + m2.tail * m1.sum_abs() + m1.tail * m2.tail
    return MultiplierSeries(
        m1.scalar * m2.scalar,
        m1.base_shift + m2.base_shift,
        m1.step,
        coeffs,
        f"{m1.kind}*{m2.kind}",
        tail,
    )


def apply_multiplier(m: MultiplierSeries, f: StepPacket) -> StepPacket:
    """Spatial action: scalar * sum_n c_n f(. + base + n step), one sweep."""
    if f.is_empty or not m.coeffs:
        return StepPacket.zero()
    ns = sorted(m.coeffs)
    segs = {}
    for n in ns:
        s = m.base_shift + n * m.step
        weight = m.scalar * m.coeffs[n]
        for freq, vals in f.waves.items():
            # g(x) = f(x+s): a cell value v e(freq y) becomes v e(freq s) e(freq x)
            phase = complex(e2pi(freq * s)) if freq else 1.0
            bucket = segs.setdefault(freq, ([], [], []))
            bucket[0].append(f.lo - s)
            bucket[1].append(f.hi - s)
            bucket[2].append(vals * (weight * phase))
    segs = {
        freq: tuple(np.concatenate(col) for col in cols)
        for freq, cols in segs.items()
    }
    return StepPacket(*_assemble(segs), _trusted=True)


def block_multiplier(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    dest: str,
    src: str,
    eps: float = 1e-12,
) -> MultiplierSeries:
    """The (dest, src) entry of the evolution block matrix."""
    try:
        kind = BLOCK_KIND[(dest, src)]
    except KeyError:
        raise ValidationError(f"unknown block ({dest!r}, {src!r})") from None
    return make_multiplier(bm, domain, kind, eps)


def block_multiplier_composed(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    dest: str,
    src: str,
    eps: float = 1e-12,
) -> MultiplierSeries:
    """Same entry built the long way: m^-2 * a_dest * conj(a_src).

    Exercises series composition/conjugation; agrees with block_multiplier
    up to truncation tails (tested, not assumed).
    """
    factor = {
        "iminus": "a",
        "izero": "identity",
        "iplus": "c",
    }
    m = make_multiplier(bm, domain, "m_squared_inv", eps)
    m = compose_multipliers(m, make_multiplier(bm, domain, factor[dest], eps))
    m = compose_multipliers(
        m, conjugate_multiplier(make_multiplier(bm, domain, factor[src], eps))
    )
    return m

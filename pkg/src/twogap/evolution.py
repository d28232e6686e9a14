"""Unitary evolution of step packets and its scattering bookkeeping.

The evolution at time t acts on a packet supported in the open domain by a
3x3 block of translation multipliers followed by the rigid shift by t and
restriction back to the components.  The (dest, src) block kinds live in
``multipliers.BLOCK_KIND``; the packet picture of, say, a left-launched
packet is: the identity copy keeps moving on I_minus, the transmitted
geometric train enters the middle interval through a_inv, and the outgoing
train leaves through a_inv_c (one direct reflection plus the resonance sum).

The same formulas hold for negative t (the derivation is time-sign-free);
the adjoint relation <U(-t) f, g> = <f, U(t) g> is verified in the tests
rather than used as a definition.

At w = 0 the model decouples and the dynamics is an explicit splice: the
middle interval wraps onto itself with a phase e(-psi) per wrap, and the two
half-lines glue into a single line (exit at 0, re-enter at beta) with splice
phase -e(psi - theta).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import BoundaryMatrix, ExteriorDomain, e2pi
from .errors import (
    DegenerateRegime,
    EmptySupport,
    NotDecoupled,
    SupportViolation,
    ValidationError,
)
from .multipliers import (
    BLOCK_KIND,
    apply_multiplier,
    make_multiplier,
)
from .packets import StepPacket, sum_packets

__all__ = [
    "EvolutionResult",
    "evolve",
    "evolve_decoupled",
    "scatter",
    "translation_representation",
    "correlation",
    "cesaro_decay",
    "block_matrix_entry",
    "decompose",
]

COMPONENTS = ("iminus", "izero", "iplus")

_mult_cache: dict = {}


def _cached_multiplier(bm, domain, kind, eps):
    key = (bm, domain, kind, eps)
    out = _mult_cache.get(key)
    if out is None:
        out = make_multiplier(bm, domain, kind, eps)
        if len(_mult_cache) > 256:
            _mult_cache.clear()
        _mult_cache[key] = out
    return out


def decompose(f: StepPacket, domain: ExteriorDomain, tol: float = 1e-12):
    """Split f into its three component restrictions; reject obstacle mass.

    Mass on the removed intervals [0,1] and [alpha,beta] above tol (squared,
    relative to the packet norm) raises SupportViolation.
    """
    parts = tuple(f.restrict(*domain.component(tag)) for tag in COMPONENTS)
    leak = f.norm2() - sum(p.norm2() for p in parts)
    if leak > tol * max(1.0, f.norm2()):
        raise SupportViolation(
            f"packet carries mass {leak:.3e} on the removed intervals"
        )
    return parts


@dataclass(frozen=True)
class EvolutionResult:
    """Evolved packet plus the accumulated series-truncation budget."""

    packet: StepPacket
    t: float
    truncation: float


def _dest_packets(bm, domain, f, eps):
    """Pre-shift sums g_dest = sum_src M_{dest,src} f_src, and tail budget."""
    parts = dict(zip(COMPONENTS, decompose(f, domain)))
    out = {}
    trunc = 0.0
    for dest in COMPONENTS:
        pieces = []
        for src in COMPONENTS:
            fsrc = parts[src]
            if fsrc.is_empty:
                continue
            kind = BLOCK_KIND[(dest, src)]
            if kind == "identity":
                pieces.append(fsrc)
            else:
                m = _cached_multiplier(bm, domain, kind, eps)
                pieces.append(apply_multiplier(m, fsrc))
                trunc += m.tail * np.sqrt(fsrc.norm2())
        out[dest] = sum_packets(pieces) if pieces else StepPacket.zero()
    return out, trunc


def evolve(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    f: StepPacket,
    t: float,
    eps: float = 1e-12,
) -> EvolutionResult:
    """Unitary evolution U(t) f for w > 0 (any real t)."""
    if bm.w == 0.0:
        raise DegenerateRegime("w = 0 evolution is decoupled; use evolve_decoupled")
    dest_packets, trunc = _dest_packets(bm, domain, f, eps)
    out = []
    for dest, g in dest_packets.items():
        if g.is_empty:
            continue
        lo, hi = domain.component(dest)
        out.append(g.translate(t).restrict(lo, hi))
    return EvolutionResult(packet=sum_packets(out), t=float(t), truncation=trunc)


def block_matrix_entry(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    dest: str,
    src: str,
    f: StepPacket,
    t: float,
    eps: float = 1e-12,
) -> StepPacket:
    """The (dest, src) block of U(t) applied to f: restriction of the
    multiplier action of the src part, shifted by t, clipped to dest."""
    if bm.w == 0.0:
        raise DegenerateRegime("block entries need w > 0")
    if dest not in COMPONENTS or src not in COMPONENTS:
        raise ValidationError(f"unknown components ({dest!r}, {src!r})")
    fsrc = f.restrict(*domain.component(src))
    if fsrc.is_empty:
        return StepPacket.zero()
    kind = BLOCK_KIND[(dest, src)]
    if kind == "identity":
        g = fsrc
    else:
        g = apply_multiplier(_cached_multiplier(bm, domain, kind, eps), fsrc)
    return g.translate(t).restrict(*domain.component(dest))


# ----------------------------------------------------------------------
# decoupled (w = 0) dynamics
# ----------------------------------------------------------------------


def _wrap_middle(bm, domain, f0, t):
    """Periodic wrap of the middle interval, phase e(-psi) per forward wrap."""
    if f0.is_empty:
        return f0
    ell = domain.ell
    r = t % ell
    m = round((t - r) / ell)
    g = f0.translate(r).scale(complex(e2pi(-bm.psi * m)))
    inside = g.restrict(1.0, domain.alpha)
    spill = g.restrict(domain.alpha, domain.alpha + ell)
    if spill.is_empty:
        return inside
    return inside + spill.translate(-ell).scale(complex(e2pi(-bm.psi)))


def _splice_halflines(bm, domain, fm, fp, t):
    """Glued-line shift: exit at 0, re-enter at beta, phase -e(psi-theta)."""
    omega = -complex(e2pi(bm.psi - bm.theta))
    h = fm + fp.translate(-domain.beta)  # glued coordinate: I_plus -> (0, inf)
    if h.is_empty:
        return h
    if t >= 0:
        stay_neg = h.restrict(hi=-t).translate(t)
        crossed = h.restrict(-t, 0.0).translate(t).scale(omega)
        stay_pos = h.restrict(lo=0.0).translate(t)
    else:
        stay_neg = h.restrict(hi=0.0).translate(t)
        crossed = h.restrict(0.0, -t).translate(t).scale(np.conj(omega))
        stay_pos = h.restrict(lo=-t).translate(t)
    g = sum_packets([stay_neg, crossed, stay_pos])
    return g.restrict(hi=0.0) + g.restrict(lo=0.0).translate(domain.beta)


def evolve_decoupled(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    f: StepPacket,
    t: float,
) -> EvolutionResult:
    """Exact w = 0 evolution (wrap + splice); no series, no truncation."""
    if bm.w != 0.0:
        raise NotDecoupled(f"evolve_decoupled needs w = 0, got w = {bm.w}")
    fm, f0, fp = decompose(f, domain)
    out = _wrap_middle(bm, domain, f0, t) + _splice_halflines(bm, domain, fm, fp, t)
    return EvolutionResult(packet=out, t=float(t), truncation=0.0)


# ----------------------------------------------------------------------
# scattering pictures
# ----------------------------------------------------------------------


def scatter(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    f_in: StepPacket,
    eps: float = 1e-12,
) -> StepPacket:
    """Map an incoming packet (supported on I_minus) to its outgoing image.

    This is the spatial action of the scattering coefficient: one direct
    reflection plus the transmitted resonance train.
    """
    if bm.w == 0.0:
        raise DegenerateRegime("scattering needs w > 0")
    sup = f_in.support()
    if sup is None or sup[1] > 1e-12:
        raise EmptySupport("incoming packet must be supported on the left half-line")
    m = _cached_multiplier(bm, domain, "a_inv_c", eps)
    return apply_multiplier(m, f_in)


def translation_representation(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    f: StepPacket,
    sign: str,
    eps: float = 1e-12,
) -> StepPacket:
    """Outgoing ('+') or incoming ('-') translation representer of f.

    Both act as the identity on their own half-line and rewrite the other
    two components through the scattering multipliers; they intertwine the
    evolution with the rigid shift (tested property).
    """
    if bm.w == 0.0:
        raise DegenerateRegime("translation representations need w > 0")
    fm, f0, fp = decompose(f, domain)
    if sign == "+":
        table = {"iminus": "a_inv_c", "izero": "c_conj_inv"}
        parts = [fp]
        for src, packet in (("iminus", fm), ("izero", f0)):
            if not packet.is_empty:
                parts.append(
                    apply_multiplier(_cached_multiplier(bm, domain, table[src], eps), packet)
                )
    elif sign == "-":
        table = {"izero": "a_conj_inv", "iplus": "c_inv_a"}
        parts = [fm]
        for src, packet in (("izero", f0), ("iplus", fp)):
            if not packet.is_empty:
                parts.append(
                    apply_multiplier(_cached_multiplier(bm, domain, table[src], eps), packet)
                )
    else:
        raise ValidationError(f"sign must be '+' or '-', got {sign!r}")
    return sum_packets(parts)


# ----------------------------------------------------------------------
# correlations
# ----------------------------------------------------------------------


def correlation(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    f: StepPacket,
    g: StepPacket,
    t: float,
    eps: float = 1e-12,
) -> complex:
    """<f, U(t) g> (conjugate-first pairing)."""
    return f.inner(evolve(bm, domain, g, t, eps).packet)


def _finite_component_edges(domain, tag):
    lo, hi = domain.component(tag)
    return [v for v in (lo, hi) if np.isfinite(v)]


def cesaro_decay(
    bm: BoundaryMatrix,
    domain: ExteriorDomain,
    f: StepPacket,
    g: StepPacket,
    horizons,
    eps: float = 1e-12,
):
    """Cesàro averages (1/2T) int_{-T}^{T} |<f, U(t) g>|^2 dt, exactly.

    The correlation is piecewise linear in t (cell edges of the evolved
    packet crossing cell edges of f or component boundaries), so |corr|^2 is
    piecewise quadratic and per-interval Simpson integrates it exactly.
    Only frequency-0 packets are supported here.
    """
    for p in (f, g):
        if any(n != 0 for n in p.frequencies()):
            raise ValidationError("cesaro_decay supports frequency-0 packets only")
    dest_packets, _ = _dest_packets(bm, domain, g, eps)
    f_parts = {tag: f.restrict(*domain.component(tag)) for tag in COMPONENTS}

    def corr(t):
        total = 0.0 + 0.0j
        for tag in COMPONENTS:
            gd = dest_packets[tag]
            fp = f_parts[tag]
            if gd.is_empty or fp.is_empty:
                continue
            lo, hi = domain.component(tag)
            total += fp.inner(gd.translate(t).restrict(lo, hi))
        return total

    crossing = set()
    for tag in COMPONENTS:
        gd = dest_packets[tag]
        fp = f_parts[tag]
        if gd.is_empty:
            continue
        targets = list(_finite_component_edges(domain, tag))
        if not fp.is_empty:
            targets.extend(fp.breakpoints().tolist())
        for e in gd.breakpoints():
            for p in targets:
                crossing.add(p - e)

    horizons = np.atleast_1d(np.asarray(horizons, dtype=float))
    out = np.empty(horizons.shape)
    for i, T in enumerate(horizons):
        if T <= 0:
            raise ValidationError("Cesàro horizon must be positive")
        pts = sorted({-T, T} | {c for c in crossing if -T < c < T})
        total = 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            ya = abs(corr(a)) ** 2
            ym = abs(corr(0.5 * (a + b))) ** 2
            yb = abs(corr(b)) ** 2
            total += (b - a) / 6.0 * (ya + 4.0 * ym + yb)
        out[i] = total / (2.0 * T)
    return out if out.size > 1 else float(out[0])

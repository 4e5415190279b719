"""Free-energy density of the wire and its analytic interval derivatives.

The model, in CGS units (erg/cc), with the wire axis as polar axis:

    E = -m_s*H*[sin(t)sin(t_H)cos(f - f_H) + cos(t)cos(t_H)]   Zeeman
        + pi*m_s^2*sin^2(t)                        demag, infinite cylinder
        + K_u*sin^2(t) + K_4*sin^4(t)              axial anisotropy

All derivative formulas are hand-coded analytic expressions evaluated in
interval arithmetic, so each returned interval encloses the true range of
that partial over the queried box.

Internally the same expressions are also available in a rotated
coordinate frame (new z along the old x axis).  The physics is frame
independent; rewriting m in rotated angles (a, b) keeps the energy the
same shape with permuted field components and the axis weight
w = m.(old z) expressed through the new angles.  The rotated view exists
because the spherical gradient degenerates where sin(t) ~ 0; boxes
hugging a pole are far from the rotated frame's own poles and evaluate
there with full precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import interval as iv
from .interval import Interval
from .params import FieldDirection, MaterialParams

__all__ = ["EnergyDerivatives", "energy", "derivatives", "rotated_angles"]

_PI_UP = math.nextafter(math.pi, math.inf)
_UNIT = Interval(-1.0, 1.0)
_POS_UNIT = Interval(0.0, 1.0)
_ZERO = Interval(0.0, 0.0)


@dataclass(frozen=True, slots=True)
class EnergyDerivatives:
    """Interval enclosures of the five free-energy partials over a box.

    e_theta, e_phi: first partials (erg/cc per rad).
    e_tt, e_pp, e_tp: second partials d2E/dt2, d2E/df2, d2E/dtdf.
    """

    e_theta: Interval
    e_phi: Interval
    e_tt: Interval
    e_pp: Interval
    e_tp: Interval


def _check_domain(box_theta: Interval, box_phi: Interval, box_h: Interval) -> None:
    # phi is allowed the whole trig-table span so that periodicity
    # identities like E(f) == E(f + 2*pi) stay evaluable.
    if not (0.0 <= box_theta.lo and box_theta.hi <= _PI_UP):
        raise ValueError(f"theta box {box_theta} outside [0, pi]")
    if not (iv.TRIG_TABLE_LO <= box_phi.lo and box_phi.hi <= iv.TRIG_TABLE_HI):
        raise ValueError(f"phi box {box_phi} outside the trig table range")
    if not box_h.lo >= 0.0:
        raise ValueError(f"field box {box_h} reaches below 0")


# ---------------------------------------------------------------------------
# shared frame engine (float parameters in, intervals out)
#
# With w = m.(axis) and s2 = 1 - w^2 = sin^2(t), the non-Zeeman part is
# G(s2) = A*s2 + K_4*s2^2 where A = pi*m_s^2*demag + K_u, and the Zeeman
# direction factor is D = p*sin(a)cos(b) + q*sin(a)sin(b) + r*cos(a) with
# (p, q, r) the field components seen by the frame.  Each frame supplies
# w and its (a, b)-derivatives; everything below is frame independent:
#
#   dG/dw   = -2w*(A + 2*K_4*s2)
#   d2G/dw2 = -2A - 4*K_4 + 12*K_4*w^2
#
#   E_a  = -m_s*H*D_a  + G'(w)*w_a
#   E_ab = -m_s*H*D_ab + G''(w)*w_a*w_b + G'(w)*w_ab   (etc.)


def _frame_derivatives(sa, ca, sb, cb, w, wa, wb, waa, wbb, wab, s2,
                       zeeman, p, q, r, a_const, k4):
    u = cb * p + sb * q
    v = cb * q - sb * p
    d_a = ca * u - sa * r
    d_b = sa * v
    d_aa = -(sa * u + ca * r)
    d_bb = -(sa * u)
    d_ab = ca * v

    gp = (-2.0 * w) * (a_const + (2.0 * k4) * s2)
    gpp = (-2.0 * a_const - 4.0 * k4) + (12.0 * k4) * iv.sqr(w)

    e_a = -(zeeman * d_a) + gp * wa
    e_b = -(zeeman * d_b) + gp * wb
    e_aa = -(zeeman * d_aa) + gpp * iv.sqr(wa) + gp * waa
    e_bb = -(zeeman * d_bb) + gpp * iv.sqr(wb) + gp * wbb
    e_ab = -(zeeman * d_ab) + gpp * (wa * wb) + gp * wab
    return e_a, e_b, e_aa, e_bb, e_ab


def _std_parts(theta, phi, h, hx, hy, hz, ms):
    """Standard-frame inputs for the engine: a = theta, b = phi, w = cos."""
    sa = iv.sin(theta).intersect(_POS_UNIT)  # theta within [0, pi]
    ca = iv.cos(theta)
    sb = iv.sin(phi)
    cb = iv.cos(phi)
    w = ca
    wa = -sa
    waa = -ca
    s2 = iv.sqr(sa).intersect(_POS_UNIT)
    zeeman = h * ms
    return (sa, ca, sb, cb, w, wa, _ZERO, waa, _ZERO, _ZERO, s2,
            zeeman, hx, hy, hz)


def _rot_parts(alpha, beta, h, hx, hy, hz, ms):
    """Rotated-frame inputs: new x = old y, new y = old z, new z = old x.

    The old polar axis becomes the new y axis, so w = sin(a)sin(b); the
    field components permute to (p, q, r) = (hy, hz, hx).
    """
    sa = iv.sin(alpha).intersect(_POS_UNIT)  # alpha in [0, pi] by construction
    ca = iv.cos(alpha)
    sb = iv.sin(beta)
    cb = iv.cos(beta)
    w = (sa * sb).intersect(_UNIT)
    wa = ca * sb
    wb = sa * cb
    wab = ca * cb
    s2 = (iv.sqr(ca) + iv.sqr(sa * cb)).intersect(_POS_UNIT)
    zeeman = h * ms
    return (sa, ca, sb, cb, w, wa, wb, -w, -w, wab, s2,
            zeeman, hy, hz, hx)


def rotated_angles(box_theta: Interval, box_phi: Interval):
    """Enclosures of the rotated spherical angles (a, b) of the box.

    Returns None when the box straddles mz = 0, where the rotated
    azimuth has no single-valued enclosure; callers fall back to the
    standard frame there.
    """
    sth = iv.sin(box_theta).intersect(_POS_UNIT)
    cth = iv.cos(box_theta)
    sph = iv.sin(box_phi)
    cph = iv.cos(box_phi)
    mx = (sth * cph).intersect(_UNIT)
    my = (sth * sph).intersect(_UNIT)
    mz = cth.intersect(_UNIT)

    alpha = iv.acos(mx)
    half_pi = Interval(0.5 * math.pi, math.nextafter(0.5 * math.pi, math.inf))
    if mz.lo > 0.0:
        beta = half_pi - iv.atan(iv.div_extended(my, mz))
    elif mz.hi < 0.0:
        beta = -half_pi + iv.atan(iv.div_extended(my, -mz))
    else:
        return None
    return alpha, beta


# ---------------------------------------------------------------------------
# public object-level API (standard frame)


def energy(
    box_theta: Interval,
    box_phi: Interval,
    box_h: Interval,
    direction: FieldDirection,
    params: MaterialParams,
) -> Interval:
    """Enclosure of E over the box (erg/cc)."""
    _check_domain(box_theta, box_phi, box_h)
    hx, hy, hz = direction.unit()
    (sa, ca, sb, cb, _w, _wa, _wb, _waa, _wbb, _wab, s2, zeeman,
     p, q, r) = _std_parts(box_theta, box_phi, box_h, hx, hy, hz, params.m_s)
    d = sa * (cb * p + sb * q) + ca * r
    return -(zeeman * d) + params.aniso_a * s2 + params.k_4 * iv.sqr(s2)


def derivatives(
    box_theta: Interval,
    box_phi: Interval,
    box_h: Interval,
    direction: FieldDirection,
    params: MaterialParams,
) -> EnergyDerivatives:
    """Enclosures of the five partials of E over the box."""
    _check_domain(box_theta, box_phi, box_h)
    hx, hy, hz = direction.unit()
    parts = _std_parts(box_theta, box_phi, box_h, hx, hy, hz, params.m_s)
    e_a, e_b, e_aa, e_bb, e_ab = _frame_derivatives(
        *parts, params.aniso_a, params.k_4
    )
    return EnergyDerivatives(e_a, e_b, e_aa, e_bb, e_ab)

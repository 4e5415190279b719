"""Resonance level set and the box-elimination tests.

At a stable magnetization equilibrium the precession frequency obeys

    (omega/gamma)^2 = [E_tt*E_pp - E_tp^2] / (m_s*sin(theta))^2 ,

with the second partials taken at the equilibrium angles.  A box of
(phi, theta, H) can be discarded as soon as interval evaluation proves
that no point inside it can be a resonating stable equilibrium:

    T1 PHI_DERIV    0 not in dE/dphi            -> no stationary point
    T2 THETA_DERIV  0 not in dE/dtheta          -> no stationary point
    T3 POSITIVITY   r.h.s. has no positive part -> no precessing minimum
    T4 FREQUENCY    (omega_exp/gamma)^2 not in r.h.s. -> wrong field
    T5 STABILITY    E_tt or E_pp provably <= 0  -> saddle or maximum

Each test discards only boxes that provably contain no resonance, so the
subdivision search never loses a true resonance field.  T5 exists
because T3 alone also admits energy maxima, whose curvature product is
positive too; at a true minimum with a positive curvature product both
diagonal curvatures are strictly positive, so requiring a positive part
in each is again only ever fatal to boxes without such minima.

The battery runs in the standard parametrization and, whenever the box
stays clear of mz = 0, again in a rotated one (energy.rotated_angles).
Both passes are sound on the same box: stationarity annihilates the
angular derivatives of every smooth parametrization, and the level-set
value at a stationary point is frame invariant, so an enclosure from
either frame may exclude the target.  Running both is not redundancy
but the only way to keep enclosures tight everywhere: near a pole the
standard numerator and denominator both carry sin(theta)^2 factors
whose correlation plain interval evaluation cannot see, inflating the
level-set width by roughly tol_angle / theta and smearing the T4 test
over an O(1 Oe) band of fields; the rotated frame has no small
denominator there and collapses that band by two orders of magnitude
(and vice versa around the rotated frame's own poles on the mx axis).

Two curvature conditions need care.  E_aa <= 0 is fatal in any frame:
the polar coordinate curve is unit speed everywhere, so at a strict
minimum its curvature is strictly positive even at a pole.  E_bb <= 0
is fatal only when the frame's sin(polar) is positive over the whole
box; otherwise the azimuthal curve can degenerate at the candidate
point (an axial field pins the standard E_bb to [0, 0] at its pole
equilibria) and the sign carries no information.

Boxes that straddle mz = 0 while also touching sin(theta) = 0 have no
frame with a bounded division and pass vacuously, surfacing as
INDETERMINATE.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import interval as iv
from .interval import UNBOUNDED, Interval
from .energy import _frame_derivatives, _rot_parts, _std_parts, rotated_angles
from .params import FieldDirection, MaterialParams

__all__ = [
    "Verdict",
    "Reason",
    "TestOutcome",
    "omega_over_gamma_sq",
    "test_box",
    "classify_intervals",
    "classify_raw",
]


class Verdict(enum.Enum):
    ELIMINATE = "eliminate"
    KEEP = "keep"
    INDETERMINATE = "indeterminate"


class Reason(enum.IntEnum):
    NONE = 0
    PHI_DERIV = 1
    THETA_DERIV = 2
    POSITIVITY = 3
    FREQUENCY = 4
    STABILITY = 5


# classify_raw verdict codes (shared with the compiled kernel)
ELIMINATE = 0
KEEP = 1
INDETERMINATE = 2

_VERDICT_FROM_CODE = {
    ELIMINATE: Verdict.ELIMINATE,
    KEEP: Verdict.KEEP,
    INDETERMINATE: Verdict.INDETERMINATE,
}


@dataclass(frozen=True, slots=True)
class TestOutcome:
    """Result of the elimination battery on one box.

    verdict: ELIMINATE only when an interval condition provably fails;
        INDETERMINATE when the box was kept but its level-set evaluation
        was unbounded in every usable frame.
    reason: the first failing test for ELIMINATE, NONE otherwise.
    """

    verdict: Verdict
    reason: Reason

    @property
    def keep(self) -> bool:
        return self.verdict is not Verdict.ELIMINATE


def omega_over_gamma_sq(box, direction: FieldDirection, params: MaterialParams):
    """Enclosure of the level-set r.h.s. over the box, in Oe^2.

    UNBOUNDED whenever sin(theta) over the box contains zero (extended
    division); callers must branch on that.
    """
    hx, hy, hz = direction.unit()
    parts = _std_parts(box.theta, box.phi, box.h, hx, hy, hz, params.m_s)
    sa = parts[0]
    _, _, e_aa, e_bb, e_ab = _frame_derivatives(*parts, params.aniso_a, params.k_4)
    num = e_aa * e_bb - iv.sqr(e_ab)
    den = iv.sqr(sa * params.m_s)
    return iv.div_extended(num, den)


def _frame_battery(parts, aniso_a: float, k4: float, ms: float,
                   target: float) -> tuple[int, bool]:
    """T1..T5 in one parametrization: (reason, level set bounded).

    reason is Reason.NONE when the box survives.  parts[0] is the
    frame's sin(polar), already clamped to [0, 1]; its lower bound
    being positive is what licenses the E_bb sign test (see module
    docstring) and guarantees a bounded division.
    """
    e_a, e_b, e_aa, e_bb, e_ab = _frame_derivatives(*parts, aniso_a, k4)
    if not e_b.contains_zero():
        return Reason.PHI_DERIV, False
    if not e_a.contains_zero():
        return Reason.THETA_DERIV, False
    num = e_aa * e_bb - iv.sqr(e_ab)
    den = iv.sqr(parts[0] * ms)
    rhs = iv.div_extended(num, den)
    bounded = rhs is not UNBOUNDED
    if bounded:
        if not rhs.hi > 0.0:
            return Reason.POSITIVITY, bounded
        if not rhs.contains(target):
            return Reason.FREQUENCY, bounded
    if not e_aa.hi > 0.0:
        return Reason.STABILITY, bounded
    if parts[0].lo > 0.0 and not e_bb.hi > 0.0:
        return Reason.STABILITY, bounded
    return Reason.NONE, bounded


def classify_raw(
    theta: Interval,
    phi: Interval,
    h: Interval,
    hx: float,
    hy: float,
    hz: float,
    ms: float,
    aniso_a: float,
    k4: float,
    target: float,
) -> tuple[int, int]:
    """Elimination battery with raw model parameters.

    Runs the five tests in the standard frame, then again in the
    rotated frame when the box admits one; either pass may eliminate.
    Returns (verdict code, reason code); the compiled kernel implements
    exactly this function.
    """
    reason, bounded = _frame_battery(
        _std_parts(theta, phi, h, hx, hy, hz, ms), aniso_a, k4, ms, target)
    if reason:
        return ELIMINATE, reason
    rot = rotated_angles(theta, phi)
    if rot is not None:
        r_reason, r_bounded = _frame_battery(
            _rot_parts(rot[0], rot[1], h, hx, hy, hz, ms),
            aniso_a, k4, ms, target)
        if r_reason:
            return ELIMINATE, r_reason
        bounded = bounded or r_bounded
    return (KEEP, Reason.NONE) if bounded else (INDETERMINATE, Reason.NONE)


def classify_intervals(
    theta: Interval,
    phi: Interval,
    h: Interval,
    direction: FieldDirection,
    params: MaterialParams,
) -> TestOutcome:
    hx, hy, hz = direction.unit()
    code, reason = classify_raw(
        theta, phi, h, hx, hy, hz,
        params.m_s, params.aniso_a, params.k_4, params.target_sq,
    )
    return TestOutcome(_VERDICT_FROM_CODE[code], Reason(reason))


def test_box(box, direction: FieldDirection, params: MaterialParams) -> TestOutcome:
    """Elimination battery on a solver box (duck-typed: .theta/.phi/.h)."""
    return classify_intervals(box.theta, box.phi, box.h, direction, params)

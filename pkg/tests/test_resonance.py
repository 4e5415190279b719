"""Elimination battery: verdicts, reasons, and inclusion monotonicity."""

import math

from fmrbound.interval import TWO_PI, UNBOUNDED, Interval
from fmrbound.params import FieldDirection, MaterialParams
from fmrbound import resonance
from fmrbound.resonance import (
    Reason,
    Verdict,
    classify_intervals,
    omega_over_gamma_sq,
)
from fmrbound.solver import Box3

_PI_UP = math.nextafter(math.pi, math.inf)

# Kittel geometry (defaults): uniaxial shape term only, 2A/m_s = 3200 Oe
H_PAR = 101.95709590867273
H_PERP = 5269.185286030352
# field at 45 deg: lowest resonance, equilibrium pulled toward the axis
H_45 = 146.33784292126074
THETA_EQ_45 = 0.0313281533478484

P = MaterialParams()


def I(lo, hi=None) -> Interval:
    return Interval(lo, lo if hi is None else hi)


def _cls(th, ph, h, d):
    return classify_intervals(th, ph, h, d, P)


PAR = FieldDirection(0.0)
PERP = FieldDirection(math.pi / 2)
D45 = FieldDirection(math.pi / 4)


# -- keeps at the known resonances --------------------------------------------------


def test_keeps_box_at_parallel_resonance():
    # polar box: only the rotated frame can bound the level set here
    out = _cls(Interval(0.0, 1e-7), Interval(0.0, 1e-7), I(H_PAR - 0.01, H_PAR + 0.01), PAR)
    assert out.verdict is Verdict.KEEP and out.reason is Reason.NONE
    assert out.keep


def test_keeps_box_at_perpendicular_resonance():
    out = _cls(
        I(math.pi / 2 - 1e-7, math.pi / 2 + 1e-7),
        Interval(0.0, 1e-7),
        I(H_PERP - 0.01, H_PERP + 0.01),
        PERP,
    )
    assert out.verdict is Verdict.KEEP


def test_keeps_box_at_oblique_resonance():
    out = _cls(
        I(THETA_EQ_45 - 1e-6, THETA_EQ_45 + 1e-6),
        Interval(0.0, 1e-7),
        I(H_45 - 0.01, H_45 + 0.01),
        D45,
    )
    assert out.verdict is Verdict.KEEP


# -- eliminations, one per test of the battery ---------------------------------------


def test_wrong_azimuth_fails_first_order_condition():
    out = _cls(
        I(math.pi / 2 - 1e-7, math.pi / 2 + 1e-7),
        I(0.8, 0.81),
        I(H_PERP - 0.01, H_PERP + 0.01),
        PERP,
    )
    assert out.verdict is Verdict.ELIMINATE and out.reason is Reason.PHI_DERIV
    assert not out.keep


def test_wrong_polar_angle_fails_first_order_condition():
    out = _cls(I(0.8, 0.81), Interval(0.0, 1e-7), I(H_PERP - 0.01, H_PERP + 0.01), PERP)
    assert out.verdict is Verdict.ELIMINATE and out.reason is Reason.THETA_DERIV


def test_hard_axis_below_saturation_is_a_saddle():
    # stationary but not a minimum: the Hessian determinant bound goes negative
    for h in (I(99.9, 100.1), I(999.9, 1000.1), I(3100.0, 3100.2)):
        out = _cls(I(math.pi / 2 - 1e-7, math.pi / 2 + 1e-7), Interval(0.0, 1e-7), h, PERP)
        assert out.verdict is Verdict.ELIMINATE and out.reason is Reason.POSITIVITY


def test_off_resonance_fields_fail_the_frequency_match():
    for h in (I(499.9, 500.1), I(5000.0, 5000.1)):
        out = _cls(Interval(0.0, 1e-7), Interval(0.0, 1e-7), h, PAR)
        assert out.verdict is Verdict.ELIMINATE and out.reason is Reason.FREQUENCY
    out = _cls(
        I(math.pi / 2 - 1e-7, math.pi / 2 + 1e-7), Interval(0.0, 1e-7),
        I(3999.9, 4000.1), PERP,
    )
    assert out.reason is Reason.FREQUENCY


def test_unstable_pole_fails_curvature_sign():
    # theta spanning pi exactly: sin clamps to a zero-containing sliver, so
    # the level-set division is unbounded and the curvature test must act
    out = _cls(Interval(math.pi, _PI_UP), Interval(0.0, 1e-7), I(4999.9, 5000.1), PAR)
    assert out.verdict is Verdict.ELIMINATE and out.reason is Reason.STABILITY


# -- indeterminate and wrappers -----------------------------------------------------


def test_root_box_is_indeterminate():
    for d in (PAR, PERP, D45):
        out = _cls(Interval(0.0, _PI_UP), Interval(0.0, TWO_PI), Interval(0.0, 10000.0), d)
        assert out.verdict is Verdict.INDETERMINATE and out.reason is Reason.NONE
        assert out.keep  # indeterminate boxes stay in the worklist


def test_box_wrapper_matches_interval_form():
    box = Box3(Interval(0.0, 0.3), Interval(1.0, 1.2), Interval(4000.0, 4100.0))
    a = resonance.test_box(box, PERP, P)
    b = _cls(box.theta, box.phi, box.h, PERP)
    assert a.verdict is b.verdict and a.reason is b.reason


# -- level-set diagnostic ------------------------------------------------------------


def test_level_set_is_unbounded_over_a_polar_box():
    box = Box3(Interval(0.0, 1e-7), Interval(0.0, 1e-7), I(5000.0))
    assert omega_over_gamma_sq(box, PAR, P) is UNBOUNDED


def test_level_set_matches_textbook_hard_axis_form():
    # saturated hard-axis branch: rhs = H (H - 2A/m_s) with 2A/m_s = 3200 Oe
    for h in (4000.0, H_PERP, 8000.0):
        box = Box3(I(0.0), I(math.pi / 2), I(h))
        rhs = omega_over_gamma_sq(box, PERP, P)
        want = h * (h - 3200.0)
        assert rhs.lo <= want <= rhs.hi
        assert rhs.width <= 1e-9 * abs(want)


def test_level_set_hits_target_at_oblique_anchor():
    # the anchor itself carries the oracle's refinement error, so ask for
    # closeness at that scale rather than exact containment
    box = Box3(I(0.0), I(THETA_EQ_45), I(H_45))
    rhs = omega_over_gamma_sq(box, D45, P)
    assert rhs is not UNBOUNDED
    assert abs(rhs.midpoint - P.target_sq) <= 1e-9 * P.target_sq


def test_level_set_degenerates_for_axial_fields():
    # an axial field gives the energy no azimuthal dependence at all, so
    # the standard-frame Hessian determinant is identically zero.  Below
    # 2A/m_s = 3200 Oe an interior cone of equilibria exists at
    # cos(theta) = -H/3200; those zero-mode rings can never match a
    # positive squared frequency and must die on the positivity test.
    h = 1000.0
    t_star = math.acos(-h / 3200.0)
    box = Box3(I(0.3), Interval(t_star - 1e-6, t_star + 1e-6), I(h))
    rhs = omega_over_gamma_sq(box, PAR, P)
    assert rhs is not UNBOUNDED and rhs.lo == 0.0 and rhs.hi == 0.0
    out = _cls(box.theta, box.phi, box.h, PAR)
    assert out.verdict is Verdict.ELIMINATE and out.reason is Reason.POSITIVITY


# -- inclusion monotonicity of elimination -------------------------------------------


def _rand_box(rng):
    tl = rng.uniform(0.0, math.pi)
    th = min(_PI_UP, tl + 10.0 ** rng.uniform(-7, -0.3))
    pl = rng.uniform(0.0, TWO_PI)
    ph = min(TWO_PI, pl + 10.0 ** rng.uniform(-7, -0.3))
    hl = rng.uniform(0.0, 9000.0)
    hh = hl + 10.0 ** rng.uniform(-3, 2.5)
    return Interval(tl, th), Interval(pl, ph), Interval(hl, hh)


def _shrink(x: Interval, rng) -> Interval:
    a = rng.uniform(x.lo, x.hi)
    b = rng.uniform(a, x.hi)
    return Interval(a, b)


def test_elimination_is_inclusion_monotone(rng):
    # a verdict proven over a box must hold over every sub-box
    eliminated = 0
    for _ in range(400):
        d = FieldDirection(rng.uniform(0.0, math.pi), rng.uniform(0.0, 6.2))
        th, ph, h = _rand_box(rng)
        if _cls(th, ph, h, d).verdict is not Verdict.ELIMINATE:
            continue
        eliminated += 1
        for _ in range(4):
            sub = _cls(_shrink(th, rng), _shrink(ph, rng), _shrink(h, rng), d)
            assert sub.verdict is Verdict.ELIMINATE
    assert eliminated > 100  # the sweep must actually exercise the property


def test_keep_verdicts_never_flip_to_indeterminate_on_shrink(rng):
    # bounded level set on the parent implies bounded on the child; random
    # boxes essentially never classify KEEP, so jitter around known keeps
    anchors = [
        (PAR, 5e-8, 5e-8, H_PAR),
        (PERP, math.pi / 2, 5e-8, H_PERP),
        (D45, THETA_EQ_45, 5e-8, H_45),
    ]
    kept = 0
    for d, t0, p0, h0 in anchors:
        for _ in range(40):
            tl = max(0.0, t0 + rng.uniform(-2e-4, 1e-4))
            pl = max(0.0, p0 + rng.uniform(-2e-4, 1e-4))
            hl = h0 + rng.uniform(-0.2, 0.1)
            th = Interval(tl, tl + rng.uniform(1e-6, 3e-4))
            ph = Interval(pl, pl + rng.uniform(1e-6, 3e-4))
            h = Interval(hl, hl + rng.uniform(1e-3, 0.3))
            if _cls(th, ph, h, d).verdict is not Verdict.KEEP:
                continue
            kept += 1
            for _ in range(3):
                sub = _cls(_shrink(th, rng), _shrink(ph, rng), _shrink(h, rng), d)
                assert sub.verdict is not Verdict.INDETERMINATE
    assert kept >= 30

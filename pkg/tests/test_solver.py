"""Branch-and-bound driver: convergence, gluing, determinism, soundness."""

import math

import pytest

from fmrbound.interval import TWO_PI, Interval
from fmrbound.params import FieldDirection, MaterialParams
from fmrbound.solver import (
    Box3,
    ListOverflow,
    ResonanceResult,
    SolverConfig,
    SolverState,
    Status,
    glue,
    solve_orientation,
)

P = MaterialParams()
PAR = FieldDirection(0.0)
PERP = FieldDirection(math.pi / 2)
D45 = FieldDirection(math.pi / 4)

H_PAR = 101.95709590867273
H_PERP = 5269.185286030352
H_45 = 146.33784292126074
THETA_EQ_45 = 0.0313281533478484


def I(lo, hi=None) -> Interval:
    return Interval(lo, lo if hi is None else hi)


# -- end-to-end anchors --------------------------------------------------------------


@pytest.mark.parametrize(
    "direction,h_expect",
    [(PAR, H_PAR), (PERP, H_PERP), (D45, H_45)],
    ids=["parallel", "perpendicular", "oblique45"],
)
def test_single_branch_orientations_give_one_tight_enclosure(direction, h_expect):
    results = solve_orientation(direction, P)
    assert len(results) == 1
    r = results[0]
    assert r.status is Status.RESONANCE
    assert r.h_res.lo <= h_expect <= r.h_res.hi
    assert r.h_res.width <= 0.05
    assert r.boxes_merged >= 1


def test_no_enclosures_when_field_range_excludes_all_resonances():
    cfg = SolverConfig(h_max=1.0)
    assert solve_orientation(PERP, P, cfg) == []


def test_results_sorted_by_field():
    # preset-like multiwell case is covered elsewhere; here just confirm
    # the ordering contract on the single-branch output shape
    results = solve_orientation(D45, P)
    fields = [r.h_res.midpoint for r in results]
    assert fields == sorted(fields)


# -- state mechanics ------------------------------------------------------------------


def test_overflow_raises_with_size_and_context():
    cfg = SolverConfig(max_list=4)
    with pytest.raises(ListOverflow) as exc:
        SolverState(PERP, P, cfg).run()
    assert exc.value.size > 4
    assert "overflow" in str(exc.value)


def test_two_runs_are_bit_identical():
    a = solve_orientation(D45, P)
    b = solve_orientation(D45, P)
    assert a == b
    sa, sb = SolverState(D45, P), SolverState(D45, P)
    for _ in range(500):
        if sa.done() or sb.done():
            break
        assert sa.step() == sb.step()
    assert sa.worklist_size == sb.worklist_size


def test_step_on_exhausted_state_raises():
    cfg = SolverConfig(h_max=1.0)
    state = SolverState(PERP, P, cfg)
    state.run()
    assert state.done()
    with pytest.raises(ValueError):
        state.step()


def test_measure_never_increases():
    # relative slack: child volumes in a split can round up an ulp or two
    state = SolverState(D45, P)
    last = state.measure()
    for _ in range(300):
        if state.done():
            break
        state.step()
        now = state.measure()
        assert now <= last * (1.0 + 1e-12)
        last = now


# -- gluing ---------------------------------------------------------------------------


def _unit_box(h: Interval, theta=None, phi=None) -> Box3:
    return Box3(
        phi if phi is not None else Interval(0.0, 1e-6),
        theta if theta is not None else Interval(1.0, 1.0 + 1e-6),
        h,
    )


CFG = SolverConfig()  # glue_gap = 0.01


def test_glue_merges_adjacent_boxes():
    boxes = [
        (_unit_box(Interval(100.0, 100.004)), False),
        (_unit_box(Interval(100.005, 100.009)), False),  # gap 0.001 < 0.01
        (_unit_box(Interval(100.009, 100.013)), False),  # overlap
    ]
    out = glue(boxes, CFG)
    assert len(out) == 1
    r = out[0]
    assert r.boxes_merged == 3
    assert r.h_res == Interval(100.0, 100.013)
    assert r.status is Status.RESONANCE


def test_glue_keeps_distant_boxes_apart():
    boxes = [
        (_unit_box(Interval(100.0, 100.004)), False),
        (_unit_box(Interval(100.2, 100.204)), False),  # gap 0.196 >> 0.01
    ]
    out = glue(boxes, CFG)
    assert len(out) == 2
    assert out[0].h_res.hi < out[1].h_res.lo


def test_glue_requires_angle_contact():
    near, far = Interval(1.0, 1.000001), Interval(2.0, 2.000001)
    boxes = [
        (_unit_box(Interval(100.0, 100.004), theta=near), False),
        (_unit_box(Interval(100.004, 100.008), theta=far), False),
    ]
    assert len(glue(boxes, CFG)) == 2


def test_glue_wraps_phi_at_the_seam():
    lo_side = Interval(0.0, 1e-6)
    hi_side = Interval(TWO_PI - 1e-6, TWO_PI)
    boxes = [
        (_unit_box(Interval(100.0, 100.004), phi=lo_side), False),
        (_unit_box(Interval(100.004, 100.008), phi=hi_side), False),
    ]
    out = glue(boxes, CFG)
    assert len(out) == 1 and out[0].boxes_merged == 2


def test_glue_mixed_cluster_reports_resonance():
    boxes = [
        (_unit_box(Interval(100.0, 100.004)), True),
        (_unit_box(Interval(100.004, 100.008)), False),
        (_unit_box(Interval(100.008, 100.012)), True),
    ]
    out = glue(boxes, CFG)
    assert len(out) == 1 and out[0].status is Status.RESONANCE


def test_glue_all_indeterminate_cluster_keeps_the_flag():
    boxes = [
        (_unit_box(Interval(100.0, 100.004)), True),
        (_unit_box(Interval(100.004, 100.008)), True),
    ]
    out = glue(boxes, CFG)
    assert len(out) == 1 and out[0].status is Status.INDETERMINATE


def test_glue_empty_input():
    assert glue([], CFG) == []


# -- soundness of the elimination trace ----------------------------------------------


def test_eliminations_replay_identically():
    from fmrbound.resonance import Verdict, classify_intervals

    results, state = solve_orientation(D45, P, keep_trace=True)
    assert results and state.trace
    replayed = 0
    for box, reason in state.trace[:4000]:
        out = classify_intervals(box.theta, box.phi, box.h, D45, P)
        assert out.verdict is Verdict.ELIMINATE and out.reason is reason
        replayed += 1
    assert replayed > 100


@pytest.mark.parametrize(
    "direction,point",
    [
        (PERP, (0.0, math.pi / 2, H_PERP)),
        (D45, (0.0, THETA_EQ_45, H_45)),
    ],
    ids=["perpendicular", "oblique45"],
)
def test_no_eliminated_box_strictly_contains_a_resonance(direction, point):
    _, state = solve_orientation(direction, P, keep_trace=True)
    ph, th, h = point
    eps = 1e-9  # strict interior: rules out boundary-touching false alarms
    for box, _reason in state.trace:
        inside = (
            box.phi.lo + eps < ph < box.phi.hi - eps
            and box.theta.lo + eps < th < box.theta.hi - eps
            and box.h.lo + eps < h < box.h.hi - eps
        )
        assert not inside


# -- polish pass ----------------------------------------------------------------------


def test_polish_removes_spurious_survivors_near_slow_crossings():
    # near this orientation the frequency crossing is shallow enough that
    # converged boxes survive off the true root; the polish pass must
    # leave exactly one enclosure per physical resonance
    from fmrbound.params import load_preset

    p3 = load_preset(3)
    results = solve_orientation(FieldDirection(math.radians(76.0)), p3)
    assert len(results) == 3
    for r in results:
        assert r.status is Status.RESONANCE


def test_polish_never_discards_a_resonance_box():
    _, state = solve_orientation(D45, P, keep_trace=True)
    ph, th, h = 0.0, THETA_EQ_45, H_45
    for box in state.polished:
        inside = (
            box.phi.lo + 1e-9 < ph < box.phi.hi - 1e-9
            and box.theta.lo + 1e-9 < th < box.theta.hi - 1e-9
            and box.h.lo + 1e-9 < h < box.h.hi - 1e-9
        )
        assert not inside


def test_polish_can_be_disabled():
    from fmrbound.params import load_preset

    p3 = load_preset(3)
    cfg = SolverConfig(polish_depth=0)
    results = solve_orientation(FieldDirection(math.radians(76.0)), p3, cfg)
    # without the retest the spurious survivors come back
    assert len(results) > 3


# -- config validation ----------------------------------------------------------------


def test_config_rejects_bad_values():
    for kw in (
        {"h_max": 0.0},
        {"tol_angle": -1e-9},
        {"tol_field": 0.0},
        {"max_list": 0},
        {"glue_gap": -0.01},
        {"polish_depth": -1},
    ):
        with pytest.raises(ValueError):
            SolverConfig(**kw)


def test_config_defaults_glue_gap_to_twice_field_tolerance():
    assert SolverConfig(tol_field=0.02).glue_gap == 0.04
    assert SolverConfig(glue_gap=1.5).glue_gap == 1.5

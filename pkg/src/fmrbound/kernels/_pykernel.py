"""Pure-Python kernel backend: a thin adapter over resonance.classify_raw."""

from __future__ import annotations

from ..interval import Interval
from ..resonance import classify_raw


def classify_box(
    th_lo: float,
    th_hi: float,
    ph_lo: float,
    ph_hi: float,
    h_lo: float,
    h_hi: float,
    hx: float,
    hy: float,
    hz: float,
    ms: float,
    aniso_a: float,
    k4: float,
    target: float,
) -> tuple[int, int]:
    code, reason = classify_raw(
        Interval(th_lo, th_hi),
        Interval(ph_lo, ph_hi),
        Interval(h_lo, h_hi),
        hx, hy, hz, ms, aniso_a, k4, target,
    )
    return code, int(reason)

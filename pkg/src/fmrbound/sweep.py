"""Angle-sweep driver: worker pool, CSV and SVG emission, CLI entry point.

The sweep solves one orientation per work item, optionally runs the
classical reference scan alongside, and serializes everything to a CSV
whose float columns round-trip exactly (shortest-repr decimal, at most
17 significant digits).  The SVG plot is a dependency-free scatter of
enclosure midpoints with vertical bars spanning each enclosure.
"""

from __future__ import annotations

import argparse
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .interval import Interval
from .oracle import BranchJump, OracleRoot, scan_resonances
from .params import PRESET_COUNT, MaterialParams, load_preset
from .params import FieldDirection
from .solver import ListOverflow, ResonanceResult, SolverConfig, Status, solve_orientation

__all__ = [
    "SweepSpec",
    "SweepReport",
    "CsvRow",
    "run_sweep",
    "emit_csv",
    "parse_csv",
    "emit_svg",
    "parse_args",
    "main",
]

CSV_HEADER = "theta_ext_deg,branch_index,h_lo_oe,h_hi_oe,status,boxes_merged"
ORACLE_STEP_OE = 0.5


@dataclass(frozen=True, slots=True)
class SweepSpec:
    """One sweep request: orientation grid plus material and solver setup.

    Angles are in degrees (theta_ext is the field's polar angle, phi_ext
    its azimuth); run_oracle additionally tracks classical branches for
    every orientation so reports can be cross-checked.
    """

    theta_start: float = 0.0
    theta_stop: float = 180.0
    theta_step: float = 2.0
    phi_ext: float = 0.0
    params: MaterialParams = field(default_factory=MaterialParams)
    cfg: SolverConfig = field(default_factory=SolverConfig)
    run_oracle: bool = False

    def __post_init__(self) -> None:
        for name in ("theta_start", "theta_stop", "theta_step", "phi_ext"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.theta_step <= 0:
            raise ValueError("theta_step must be positive")
        if self.theta_start > self.theta_stop:
            raise ValueError("theta_start must not exceed theta_stop")

    def orientations(self) -> list[float]:
        """Orientation grid in degrees, endpoints included."""
        out = []
        k = 0
        while True:
            deg = self.theta_start + k * self.theta_step
            if deg > self.theta_stop + 1e-9:
                break
            out.append(deg)
            k += 1
        return out


@dataclass(frozen=True, slots=True)
class SweepReport:
    """Results of one sweep, in orientation order."""

    spec: SweepSpec
    theta_ext_deg: tuple[float, ...]
    results: tuple[tuple[ResonanceResult, ...], ...]
    oracle_roots: tuple[tuple[OracleRoot, ...], ...] | None
    elapsed_s: float

    def rows(self) -> list["CsvRow"]:
        out = []
        for deg, results in zip(self.theta_ext_deg, self.results):
            for bi, r in enumerate(results):
                out.append(CsvRow(deg, bi, r.h_res, r.status, r.boxes_merged))
        return out


@dataclass(frozen=True, slots=True)
class CsvRow:
    """One CSV data row; the round-trip unit for serialization tests."""

    theta_ext_deg: float
    branch_index: int
    h_res: Interval
    status: Status
    boxes_merged: int


def _solve_one(deg: float, spec: SweepSpec):
    direction = FieldDirection(math.radians(deg), math.radians(spec.phi_ext))
    results = solve_orientation(direction, spec.params, spec.cfg)
    oracle = None
    if spec.run_oracle:
        oracle = tuple(
            scan_resonances(direction, spec.params, spec.cfg.h_max, ORACLE_STEP_OE)
        )
    return tuple(results), oracle


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepReport:
    """Solve every orientation of the sweep, optionally in parallel.

    Results are gathered back into orientation order regardless of
    completion order, so reports are deterministic for a fixed spec.
    ListOverflow from any orientation is re-raised with that
    orientation attached.
    """
    degs = spec.orientations()
    if workers is None:
        workers = min(len(degs), os.cpu_count() or 1)
    t0 = time.perf_counter()
    gathered: list[tuple[tuple[ResonanceResult, ...], tuple[OracleRoot, ...] | None]]
    if workers <= 1:
        gathered = []
        for deg in degs:
            try:
                gathered.append(_solve_one(deg, spec))
            except ListOverflow as exc:
                raise ListOverflow(exc.size, f"theta_ext_deg={deg!r}") from exc
    else:
        gathered = [None] * len(degs)  # type: ignore[list-item]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_solve_one, deg, spec): k for k, deg in enumerate(degs)
            }
            for fut in futures:
                k = futures[fut]
                try:
                    gathered[k] = fut.result()
                except ListOverflow as exc:
                    raise ListOverflow(
                        exc.size, f"theta_ext_deg={degs[k]!r}"
                    ) from exc
    elapsed = time.perf_counter() - t0
    results = tuple(r for (r, _o) in gathered)
    oracle = tuple(o for (_r, o) in gathered) if spec.run_oracle else None
    return SweepReport(spec, tuple(degs), results, oracle, elapsed)


# ---------------------------------------------------------------------------
# CSV


def emit_csv(report: SweepReport, path: str) -> None:
    """Write the report's rows; float columns use shortest round-trip repr."""
    lines = [CSV_HEADER]
    for row in report.rows():
        lines.append(
            f"{row.theta_ext_deg!r},{row.branch_index},"
            f"{row.h_res.lo!r},{row.h_res.hi!r},"
            f"{row.status.value},{row.boxes_merged}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path: str) -> list[CsvRow]:
    """Read rows back; exact inverse of emit_csv on the row data."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: missing or wrong CSV header")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 6:
            raise ValueError(f"{path}: malformed row {ln!r}")
        rows.append(
            CsvRow(
                float(parts[0]),
                int(parts[1]),
                Interval(float(parts[2]), float(parts[3])),
                Status(parts[4]),
                int(parts[5]),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# SVG


_SVG_W, _SVG_H = 800, 600
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 20, 50


def emit_svg(report: SweepReport, path: str) -> None:
    """Standalone SVG 1.1 scatter: one marker group per CSV row.

    Midpoint dots with vertical bars spanning each field enclosure;
    solid markers for resonances, open ones for indeterminate rows.
    """
    rows = report.rows()
    x_lo = report.spec.theta_start
    x_hi = max(report.spec.theta_stop, x_lo + 1e-9)
    if rows:
        y_lo = min(r.h_res.lo for r in rows)
        y_hi = max(r.h_res.hi for r in rows)
    else:
        y_lo, y_hi = 0.0, report.spec.cfg.h_max
    pad = 0.05 * (y_hi - y_lo) or 1.0
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(deg: float) -> float:
        return _MARGIN_L + (deg - x_lo) / (x_hi - x_lo) * (
            _SVG_W - _MARGIN_L - _MARGIN_R
        )

    def sy(h: float) -> float:
        return _SVG_H - _MARGIN_B - (h - y_lo) / (y_hi - y_lo) * (
            _SVG_H - _MARGIN_T - _MARGIN_B
        )

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
    ]
    ax = (
        f'M {_MARGIN_L} {_MARGIN_T} L {_MARGIN_L} {_SVG_H - _MARGIN_B} '
        f'L {_SVG_W - _MARGIN_R} {_SVG_H - _MARGIN_B}'
    )
    parts.append(f'<path d="{ax}" stroke="black" fill="none" stroke-width="1"/>')
    for k in range(7):
        deg = x_lo + k * (x_hi - x_lo) / 6.0
        x = sx(deg)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_SVG_H - _MARGIN_B}" '
            f'x2="{x:.2f}" y2="{_SVG_H - _MARGIN_B + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_SVG_H - _MARGIN_B + 18}" font-size="11" '
            f'text-anchor="middle">{deg:g}</text>'
        )
    for k in range(6):
        h = y_lo + k * (y_hi - y_lo) / 5.0
        y = sy(h)
        parts.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{y:.2f}" '
            f'x2="{_MARGIN_L}" y2="{y:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{y + 4:.2f}" font-size="11" '
            f'text-anchor="end">{h:.0f}</text>'
        )
    parts.append(
        f'<text x="{(_MARGIN_L + _SVG_W - _MARGIN_R) / 2:.0f}" '
        f'y="{_SVG_H - 10}" font-size="13" text-anchor="middle">'
        f"theta_ext (deg)</text>"
    )
    parts.append(
        f'<text x="16" y="{(_MARGIN_T + _SVG_H - _MARGIN_B) / 2:.0f}" '
        f'font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_MARGIN_T + _SVG_H - _MARGIN_B) / 2:.0f})">'
        f"resonance field (Gs)</text>"
    )
    for row in rows:
        x = sx(row.theta_ext_deg)
        y1, y2 = sy(row.h_res.lo), sy(row.h_res.hi)
        ym = sy(row.h_res.midpoint)
        solid = row.status is Status.RESONANCE
        fill = "#1f5fa8" if solid else "none"
        stroke = "#1f5fa8" if solid else "#c05f1f"
        parts.append(
            f'<g class="pt">'
            f'<line x1="{x:.2f}" y1="{y1:.2f}" x2="{x:.2f}" y2="{y2:.2f}" '
            f'stroke="{stroke}" stroke-width="1.2"/>'
            f'<circle cx="{x:.2f}" cy="{ym:.2f}" r="2.4" '
            f'fill="{fill}" stroke="{stroke}"/>'
            f"</g>"
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# CLI


class _Parser(argparse.ArgumentParser):
    # usage failures must exit 1, not argparse's default 2
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


@dataclass(frozen=True, slots=True)
class _CliRequest:
    spec: SweepSpec
    out: str
    plot: str | None
    seed: int | None


_CONFIG_KEYS = {
    "freq_ghz": float,
    "g": float,
    "ms4pi": float,
    "ku": float,
    "k4": float,
    "theta_start": float,
    "theta_stop": float,
    "theta_step": float,
    "phi_ext": float,
    "hmax": float,
    "tol_angle": float,
    "tol_field": float,
    "preset": int,
    "seed": int,
    "oracle": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "out": str,
    "plot": str,
}


def _read_config(path: str) -> dict:
    out = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"line {lineno}: expected key=value")
                key, value = (s.strip() for s in line.split("=", 1))
                if key not in _CONFIG_KEYS:
                    raise ValueError(f"line {lineno}: unknown key {key!r}")
                out[key] = _CONFIG_KEYS[key](value)
    except OSError as exc:
        raise ValueError(f"cannot read config {path!r}: {exc}") from exc
    return out


def _build_parser() -> _Parser:
    p = _Parser(
        prog="fmrbound",
        description="Guaranteed-enclosure ferromagnetic-resonance field sweep.",
    )
    p.add_argument("--freq-ghz", type=float, help="drive frequency (GHz)")
    p.add_argument("--g", type=float, help="spectroscopic splitting factor")
    p.add_argument("--ms4pi", type=float, help="saturation 4*pi*M_s (Gs)")
    p.add_argument("--ku", type=float, help="uniaxial anisotropy (erg/cm^3)")
    p.add_argument("--k4", type=float, help="fourth-order anisotropy (erg/cm^3)")
    p.add_argument("--theta-start", type=float, help="first polar angle (deg)")
    p.add_argument("--theta-stop", type=float, help="last polar angle (deg)")
    p.add_argument("--theta-step", type=float, help="polar angle step (deg)")
    p.add_argument("--phi-ext", type=float, help="field azimuth (deg)")
    p.add_argument("--hmax", type=float, help="field search range upper end (Oe)")
    p.add_argument("--tol-angle", type=float, help="angular convergence tolerance (rad)")
    p.add_argument("--tol-field", type=float, help="field convergence tolerance (Oe)")
    p.add_argument("--preset", type=int, metavar="N",
                   help=f"anisotropy preset 1..{PRESET_COUNT}")
    p.add_argument("--config", metavar="PATH",
                   help="key=value settings file (flags override it)")
    p.add_argument("--out", metavar="PATH", help="CSV output path")
    p.add_argument("--plot", metavar="PATH", help="also write an SVG scatter")
    p.add_argument("--oracle", action="store_true", default=None,
                   help="run the classical reference scan per orientation")
    p.add_argument("--seed", type=int, help="seed for randomized test hooks")
    return p


_DEFAULTS = {
    "freq_ghz": 9.243,
    "g": 2.00,
    "ms4pi": 6400.0,
    "ku": 0.0,
    "k4": 0.0,
    "theta_start": 0.0,
    "theta_stop": 180.0,
    "theta_step": 2.0,
    "phi_ext": 0.0,
    "hmax": 10000.0,
    "tol_angle": 2e-6,
    "tol_field": 0.005,
    "preset": None,
    "seed": None,
    "oracle": False,
    "out": "fmr_sweep.csv",
    "plot": None,
}


def _parse_cli(argv) -> _CliRequest:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    settings = dict(_DEFAULTS)
    if ns.config is not None:
        try:
            settings.update(_read_config(ns.config))
        except ValueError as exc:
            parser.error(str(exc))
    for key in _CONFIG_KEYS:
        flag = getattr(ns, key, None)
        if flag is not None:
            settings[key] = flag

    ku, k4 = settings["ku"], settings["k4"]
    if settings["preset"] is not None:
        try:
            preset = load_preset(settings["preset"])
        except (KeyError, ValueError) as exc:
            parser.error(str(exc))
        ku, k4 = preset.k_u, preset.k_4
        if ns.ku is not None:
            ku = ns.ku
        if ns.k4 is not None:
            k4 = ns.k4
    try:
        params = MaterialParams(
            g=settings["g"],
            four_pi_ms=settings["ms4pi"],
            k_u=ku,
            k_4=k4,
            omega_exp=2.0 * math.pi * settings["freq_ghz"] * 1e9,
        )
        cfg = SolverConfig(
            h_max=settings["hmax"],
            tol_angle=settings["tol_angle"],
            tol_field=settings["tol_field"],
        )
        spec = SweepSpec(
            theta_start=settings["theta_start"],
            theta_stop=settings["theta_stop"],
            theta_step=settings["theta_step"],
            phi_ext=settings["phi_ext"],
            params=params,
            cfg=cfg,
            run_oracle=bool(settings["oracle"]),
        )
    except ValueError as exc:
        parser.error(str(exc))
    return _CliRequest(spec, settings["out"], settings["plot"], settings["seed"])


def parse_args(argv=None) -> SweepSpec:
    """Parse CLI flags (and --config file) into a validated SweepSpec."""
    return _parse_cli(argv).spec


def _oracle_summary(report: SweepReport) -> str:
    lines = []
    total = len(report.theta_ext_deg)
    mismatches = 0
    for deg, results, roots in zip(
        report.theta_ext_deg, report.results, report.oracle_roots or ()
    ):
        n_solver = len(results)
        n_oracle = len(roots)
        missing = [
            r.h_res for r in roots
            if not any(res.h_res.contains(r.h_res) for res in results)
        ]
        note = ""
        if n_solver != n_oracle or missing:
            mismatches += 1
            note = "  <- mismatch"
            if missing:
                note += f" (uncovered roots at {missing})"
        lines.append(
            f"theta_ext={deg:7.2f} deg: solver {n_solver}, oracle {n_oracle}{note}"
        )
    lines.append(f"orientation agreement: {total - mismatches}/{total}")
    return "\n".join(lines)


def main(argv=None) -> int:
    try:
        request = _parse_cli(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if request.seed is not None:
        random.seed(request.seed)
    try:
        report = run_sweep(request.spec)
        emit_csv(report, request.out)
        if request.plot is not None:
            emit_svg(report, request.plot)
    except ListOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BranchJump as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    n_rows = len(report.rows())
    print(
        f"{len(report.theta_ext_deg)} orientations, {n_rows} enclosures, "
        f"{report.elapsed_s:.2f} s -> {request.out}"
    )
    if request.spec.run_oracle and report.oracle_roots is not None:
        print(_oracle_summary(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())

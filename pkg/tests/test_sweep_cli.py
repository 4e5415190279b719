"""Sweep orchestration, CSV/SVG serialization, and the command line."""

import math

import pytest

from fmrbound.interval import Interval
from fmrbound.params import MaterialParams
from fmrbound.solver import ListOverflow, ResonanceResult, SolverConfig, Status
from fmrbound.sweep import (
    CSV_HEADER,
    CsvRow,
    SweepReport,
    SweepSpec,
    emit_csv,
    emit_svg,
    main,
    parse_args,
    parse_csv,
    run_sweep,
)


def _small_spec(**kw) -> SweepSpec:
    kw.setdefault("theta_start", 86.0)
    kw.setdefault("theta_stop", 94.0)
    kw.setdefault("theta_step", 4.0)
    return SweepSpec(**kw)


# -- spec -----------------------------------------------------------------------------


def test_spec_validates_grid():
    with pytest.raises(ValueError):
        SweepSpec(theta_step=0.0)
    with pytest.raises(ValueError):
        SweepSpec(theta_start=90.0, theta_stop=10.0)
    with pytest.raises(ValueError):
        SweepSpec(phi_ext=math.nan)


def test_default_grid_has_91_orientations():
    degs = SweepSpec().orientations()
    assert len(degs) == 91
    assert degs[0] == 0.0 and degs[-1] == 180.0
    assert degs[1] == 2.0


def test_grid_includes_inexact_endpoint():
    degs = SweepSpec(theta_start=0.0, theta_stop=1.0, theta_step=0.1).orientations()
    assert len(degs) == 11 and abs(degs[-1] - 1.0) < 1e-12


# -- run_sweep ------------------------------------------------------------------------


def test_sweep_collects_rows_in_orientation_order():
    report = run_sweep(_small_spec())
    assert report.theta_ext_deg == (86.0, 90.0, 94.0)
    assert len(report.results) == 3
    assert all(len(r) == 1 for r in report.results)
    rows = report.rows()
    assert [r.theta_ext_deg for r in rows] == [86.0, 90.0, 94.0]
    assert report.elapsed_s >= 0.0


def test_sweep_overflow_names_the_orientation():
    spec = _small_spec(cfg=SolverConfig(max_list=4))
    with pytest.raises(ListOverflow) as exc:
        run_sweep(spec)
    assert "theta_ext_deg" in exc.value.context


# -- CSV ------------------------------------------------------------------------------


def test_csv_round_trip_is_exact(tmp_path):
    report = run_sweep(_small_spec(run_oracle=False))
    path = str(tmp_path / "sweep.csv")
    emit_csv(report, path)
    assert parse_csv(path) == report.rows()


def test_csv_is_byte_identical_across_runs(tmp_path):
    p1, p2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    emit_csv(run_sweep(_small_spec()), p1)
    emit_csv(run_sweep(_small_spec()), p2)
    with open(p1, "rb") as f1, open(p2, "rb") as f2:
        assert f1.read() == f2.read()


def test_csv_row_format_is_stable(tmp_path):
    spec = _small_spec()
    result = ResonanceResult(
        Interval(102.1, 102.3), Interval(0.0, 1e-6), Interval(0.0, 1e-6),
        Status.RESONANCE, 1,
    )
    report = SweepReport(spec, (0.0,), ((result,),), None, 0.0)
    path = str(tmp_path / "row.csv")
    emit_csv(report, path)
    with open(path, "r", encoding="utf-8") as fh:
        assert fh.read() == CSV_HEADER + "\n" + "0.0,0,102.1,102.3,resonance,1\n"


def test_csv_floats_survive_shortest_repr(tmp_path):
    h = Interval(101.95709590867273, 101.95709590867299)
    result = ResonanceResult(h, Interval(0.0, 1e-6), Interval(0.0, 1e-6),
                             Status.INDETERMINATE, 7)
    report = SweepReport(_small_spec(), (13.5,), ((result,),), None, 0.0)
    path = str(tmp_path / "rt.csv")
    emit_csv(report, path)
    row = parse_csv(path)[0]
    assert row.h_res == h and row.status is Status.INDETERMINATE
    assert row.theta_ext_deg == 13.5 and row.boxes_merged == 7


def test_empty_report_gives_header_only_csv(tmp_path):
    spec = _small_spec(cfg=SolverConfig(h_max=1.0))
    report = run_sweep(spec)
    path = str(tmp_path / "empty.csv")
    emit_csv(report, path)
    with open(path, "r", encoding="utf-8") as fh:
        assert fh.read() == CSV_HEADER + "\n"
    assert parse_csv(path) == []


def test_csv_parser_rejects_malformed_files(tmp_path):
    bad_header = tmp_path / "bad1.csv"
    bad_header.write_text("nope\n0.0,0,1.0,2.0,resonance,1\n")
    with pytest.raises(ValueError):
        parse_csv(str(bad_header))
    bad_row = tmp_path / "bad2.csv"
    bad_row.write_text(CSV_HEADER + "\n0.0,0,1.0\n")
    with pytest.raises(ValueError):
        parse_csv(str(bad_row))


# -- SVG ------------------------------------------------------------------------------


def test_svg_has_one_marker_group_per_row(tmp_path):
    report = run_sweep(_small_spec())
    path = str(tmp_path / "plot.svg")
    emit_svg(report, path)
    with open(path, "r", encoding="utf-8") as fh:
        svg = fh.read()
    assert svg.startswith('<?xml version="1.0"')
    assert 'version="1.1"' in svg and 'width="800" height="600"' in svg
    assert svg.count('<g class="pt">') == len(report.rows())
    assert svg.rstrip().endswith("</svg>")


def test_svg_for_empty_report_is_still_a_plot(tmp_path):
    report = run_sweep(_small_spec(cfg=SolverConfig(h_max=1.0)))
    path = str(tmp_path / "empty.svg")
    emit_svg(report, path)
    with open(path, "r", encoding="utf-8") as fh:
        svg = fh.read()
    assert svg.count('<g class="pt">') == 0
    assert "theta_ext (deg)" in svg and "resonance field (Gs)" in svg


# -- CLI parsing ----------------------------------------------------------------------


def test_cli_defaults():
    spec = parse_args([])
    assert spec.theta_start == 0.0 and spec.theta_stop == 180.0
    assert spec.theta_step == 2.0 and spec.phi_ext == 0.0
    assert spec.params == MaterialParams()
    assert spec.cfg == SolverConfig()
    assert spec.run_oracle is False


def test_cli_flags_override_defaults():
    spec = parse_args(
        ["--freq-ghz", "10.0", "--ku", "-111000", "--theta-step", "5",
         "--hmax", "8000", "--tol-field", "0.01"]
    )
    assert spec.params.omega_exp == 2.0 * math.pi * 10.0e9
    assert spec.params.k_u == -111000.0
    assert spec.theta_step == 5.0
    assert spec.cfg.h_max == 8000.0 and spec.cfg.tol_field == 0.01


def test_cli_preset_sets_both_anisotropies():
    spec = parse_args(["--preset", "4"])
    assert spec.params.k_u == 200000.0 and spec.params.k_4 == 441000.0


def test_cli_explicit_flag_beats_preset():
    spec = parse_args(["--preset", "4", "--ku", "0"])
    assert spec.params.k_u == 0.0 and spec.params.k_4 == 441000.0


def test_cli_config_file_between_defaults_and_flags(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text(
        "# comment line\n"
        "theta_step = 10\n"
        "ku = 20000\n"
        "oracle = yes\n"
    )
    spec = parse_args(["--config", str(cfgfile), "--ku", "30000"])
    assert spec.theta_step == 10.0
    assert spec.params.k_u == 30000.0  # flag wins over file
    assert spec.run_oracle is True


def test_cli_usage_errors_exit_one(tmp_path):
    for argv in (
        ["--theta-step", "0"],
        ["--preset", "13"],
        ["--hmax", "-5"],
        ["--config", str(tmp_path / "missing.cfg")],
        ["--no-such-flag"],
    ):
        with pytest.raises(SystemExit) as exc:
            parse_args(argv)
        assert exc.value.code == 1


def test_cli_rejects_unknown_config_keys(tmp_path):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("frobnicate = 1\n")
    with pytest.raises(SystemExit) as exc:
        parse_args(["--config", str(cfgfile)])
    assert exc.value.code == 1


# -- main -----------------------------------------------------------------------------


def test_main_writes_csv_and_reports_counts(tmp_path, capsys):
    out = str(tmp_path / "run.csv")
    code = main(
        ["--theta-start", "86", "--theta-stop", "94", "--theta-step", "4",
         "--out", out]
    )
    assert code == 0
    captured = capsys.readouterr()
    assert "3 orientations, 3 enclosures" in captured.out
    assert len(parse_csv(out)) == 3


def test_main_with_oracle_prints_agreement(tmp_path, capsys):
    out = str(tmp_path / "run.csv")
    code = main(
        ["--theta-start", "90", "--theta-stop", "90", "--theta-step", "2",
         "--oracle", "--out", out]
    )
    assert code == 0
    captured = capsys.readouterr()
    assert "orientation agreement: 1/1" in captured.out


def test_main_plot_flag_writes_svg(tmp_path):
    out, plot = str(tmp_path / "r.csv"), str(tmp_path / "r.svg")
    code = main(
        ["--theta-start", "88", "--theta-stop", "92", "--theta-step", "4",
         "--out", out, "--plot", plot]
    )
    assert code == 0
    with open(plot, "r", encoding="utf-8") as fh:
        assert "<svg" in fh.read()


def test_main_usage_error_returns_one(capsys):
    assert main(["--theta-step", "-1"]) == 1
    capsys.readouterr()  # swallow the usage text


def test_main_unwritable_output_returns_two(tmp_path, capsys):
    out = str(tmp_path / "no" / "such" / "dir" / "x.csv")
    code = main(
        ["--theta-start", "90", "--theta-stop", "90", "--out", out]
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err

import shutil
import subprocess

import matplotlib.pyplot as plt
import pytest

from adia_plotkit import SchemaMismatch, load_spec, read_sweep_csv, render
from adia_plotkit.render import _draw_panel
from adia_plotkit.spec import CurveSelection, FigureSpec, PanelSpec

VERSION = "# adia-tradeoff csv v1"
HEADER = (
    "N,schedule,p,C,T,eps_numeric,eps_leading,eps_upper,eps_lower,"
    "T_val,eps_tilde,jansen,roland_T,flags"
)


def sample_csv(tmp_path, name="sweep.csv", rows=None):
    rows = rows or [
        "32,optimal,0,9.5,80.0,0.03,0.031,0.034,0.0,73.7,0.0378,0.87,230.0,",
        "32,optimal,0,9.5,160.0,0.014,0.015,0.017,0.0,73.7,0.0378,0.44,450.0,",
        "32,optimal,0,9.5,320.0,0.007,0.0075,0.0086,0.0,73.7,0.0378,0.22,890.0,resonance-near",
    ]
    path = tmp_path / name
    path.write_text("\n".join([VERSION, HEADER] + rows) + "\n")
    return path


class TestCsvSchema:
    def test_reads_valid_file(self, tmp_path):
        data = read_sweep_csv(str(sample_csv(tmp_path)))
        assert len(data.rows) == 3
        assert data.numbers("T") == [80.0, 160.0, 320.0]

    def test_version_line_required(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(HEADER + "\n1,linear,0,50,10,,,,,5,0.1,,,\n")
        with pytest.raises(SchemaMismatch, match="version line"):
            read_sweep_csv(str(path))

    def test_header_diff_reported(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(VERSION + "\nN,schedule,T\n32,linear,10\n")
        with pytest.raises(SchemaMismatch, match="missing.*eps_numeric"):
            read_sweep_csv(str(path))


class TestSpec:
    def test_empty_curve_selection_rejected(self):
        with pytest.raises(SchemaMismatch, match="no curves"):
            CurveSelection(curves=(), markers=())

    def test_unknown_curve_rejected(self):
        with pytest.raises(SchemaMismatch, match="unknown curves"):
            CurveSelection(curves=("wiggly",), markers=())

    def test_load_single_panel(self, tmp_path):
        csv = sample_csv(tmp_path)
        spec_file = tmp_path / "fig.ini"
        spec_file.write_text(
            f"[figure]\ncsv = {csv}\ncurves = numeric, upper\n"
            f"markers = T_val\noutputs = {tmp_path/'fig.png'}\n"
        )
        spec = load_spec(str(spec_file))
        assert len(spec.panels) == 1
        assert spec.panels[0].selection.curves == ("numeric", "upper")
        assert spec.scale == "loglog"

    def test_missing_csv_rejected(self, tmp_path):
        spec_file = tmp_path / "fig.ini"
        spec_file.write_text("[figure]\ncurves = numeric\noutputs = x.png\n")
        with pytest.raises(SchemaMismatch, match="csv"):
            load_spec(str(spec_file))


class TestRendering:
    def _spec(self, tmp_path, outputs, curves=("numeric", "leading", "upper", "jansen")):
        csv = sample_csv(tmp_path)
        return FigureSpec(
            panels=(
                PanelSpec(csv_path=str(csv), selection=CurveSelection(curves, ("T_val",))),
            ),
            outputs=tuple(outputs),
            scale="loglog",
        )

    def test_raster_and_vector_outputs(self, tmp_path):
        spec = self._spec(tmp_path, [str(tmp_path / "f.png"), str(tmp_path / "f.svg")])
        written = render(spec)
        assert [p.endswith((".png", ".svg")) for p in written] == [True, True]
        assert (tmp_path / "f.png").stat().st_size > 0
        assert (tmp_path / "f.svg").stat().st_size > 0

    def test_rerender_idempotent(self, tmp_path):
        spec = self._spec(tmp_path, [str(tmp_path / "f.png")])
        render(spec)
        first = (tmp_path / "f.png").read_bytes()
        render(spec)
        assert (tmp_path / "f.png").read_bytes() == first

    def test_curve_count_on_axes(self, tmp_path):
        csv = sample_csv(tmp_path)
        panel = PanelSpec(
            csv_path=str(csv),
            selection=CurveSelection(("numeric", "leading", "upper", "jansen"), ()),
        )
        fig, ax = plt.subplots()
        _draw_panel(ax, panel, "loglog")
        assert len(ax.lines) == 4
        assert ax.get_xscale() == "log" and ax.get_yscale() == "log"
        plt.close(fig)

    def test_oscillation_clamp(self, tmp_path):
        csv = sample_csv(tmp_path)
        panel = PanelSpec(
            csv_path=str(csv),
            selection=CurveSelection(("numeric", "upper"), ()),
            clamp_oscillating_above=200.0,
        )
        fig, ax = plt.subplots()
        _draw_panel(ax, panel, "loglog")
        numeric_line, upper_line = ax.lines
        assert numeric_line.get_xdata().max() <= 200.0
        assert upper_line.get_xdata().max() == 320.0
        plt.close(fig)


@pytest.mark.skipif(
    shutil.which("adia-tradeoff") is None,
    reason="primary CLI not installed",
)
class TestAgainstPrimarySweeps:
    """End-to-end regeneration from real sweep CSVs."""

    def _sweep(self, tmp_path, name, *args):
        csv = tmp_path / name
        subprocess.run(
            ["adia-tradeoff", "sweep", "--csv_path", str(csv), *args],
            check=True,
            capture_output=True,
        )
        return csv

    def test_optimal_overlay_figure(self, tmp_path):
        csv = self._sweep(
            tmp_path, "opt.csv", "--N", "32", "--schedule", "optimal",
            "--C", "9.5", "--T_range", "auto:10",
        )
        spec_file = tmp_path / "fig1.ini"
        spec_file.write_text(
            f"[figure]\ncsv = {csv}\ncurves = numeric, leading, upper, jansen\n"
            f"markers = T_val, eps_tilde\noutputs = {tmp_path/'fig1.png'}\n"
        )
        assert render(load_spec(str(spec_file))) == [str(tmp_path / "fig1.png")]

    def test_schedule_comparison_figure(self, tmp_path):
        lin = self._sweep(
            tmp_path, "lin.csv", "--N", "8", "--schedule", "linear",
            "--C", "50", "--T_range", "auto:8",
        )
        opt = self._sweep(
            tmp_path, "opt.csv", "--N", "8", "--schedule", "optimal",
            "--C", "9.5", "--T_range", "auto:8",
        )
        spec_file = tmp_path / "fig2.ini"
        spec_file.write_text(
            "[figure]\ncurves = numeric, leading, upper\n"
            f"outputs = {tmp_path/'fig2.png'}, {tmp_path/'fig2.svg'}\n"
            f"[panel:linear]\ncsv = {lin}\nclamp_oscillating_above = 300\n"
            f"[panel:constant-speed]\ncsv = {opt}\n"
        )
        written = render(load_spec(str(spec_file)))
        assert len(written) == 2

    def test_boundary_cancelation_two_panel_figure(self, tmp_path):
        p1 = self._sweep(
            tmp_path, "p1.csv", "--N", "8", "--schedule", "beta", "--p", "1",
            "--C", "50", "--T_range", "auto:6",
        )
        p2 = self._sweep(
            tmp_path, "p2.csv", "--N", "8", "--schedule", "beta", "--p", "2",
            "--C", "70", "--T_range", "auto:6",
        )
        spec_file = tmp_path / "fig3.ini"
        spec_file.write_text(
            "[figure]\ncurves = numeric, upper\nmarkers = T_val, eps_tilde\n"
            f"outputs = {tmp_path/'fig3.png'}\n"
            f"[panel:first order]\ncsv = {p1}\n"
            f"[panel:second order]\ncsv = {p2}\n"
        )
        assert render(load_spec(str(spec_file)))[0].endswith("fig3.png")

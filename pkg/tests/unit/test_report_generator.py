"""Unit tests for result, diagnostics and plot generation."""

import csv
import math
import xml.etree.ElementTree as ET

import pytest

from src.phase_only_cs.application.services.report_generator_service import (
    DIAGNOSTICS_HEADER,
    RESULTS_HEADER,
    TRIALS_HEADER,
    DiagnosticRow,
    ReportGeneratorService,
)
from src.phase_only_cs.domain.exceptions import FormatError, ParameterError, ResultIOError
from src.phase_only_cs.domain.models import CurveRow, SuccessCurve, TrialRecord

SVG_NS = "{http://www.w3.org/2000/svg}"


def _data_lines(path):
    return [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]


class TestReportGeneratorService:
    """Test cases for report generation."""

    @pytest.fixture
    def generator(self, temp_output_dir):
        """Create a report generator writing below the temp dir."""
        return ReportGeneratorService(temp_output_dir)

    @pytest.fixture
    def curve(self):
        rows = [
            CurveRow(m=6, trials=10, successes=1, rate=0.1, mean_error=0.4123456789012345, median_iterations=812.5),
            CurveRow(m=12, trials=10, successes=7, rate=0.7, mean_error=1.0 / 3.0, median_iterations=401.0),
            CurveRow(m=18, trials=10, successes=10, rate=1.0, mean_error=2.5e-9, median_iterations=120.0),
        ]
        return SuccessCurve(rows=rows, label="pocs-nonuniform", sparsity=3, header=["mode pocs-nonuniform", "m_grid 6 12 18"])

    def test_results_csv_layout(self, generator, curve, temp_output_dir):
        generator.write_results_csv(curve, "results.csv")
        path = temp_output_dir / "results.csv"
        text = path.read_text(encoding="utf-8")
        assert text.startswith("# mode pocs-nonuniform\n")
        assert "# label pocs-nonuniform\n" in text
        rows = list(csv.reader(_data_lines(path)))
        assert rows[0] == RESULTS_HEADER
        assert len(rows) == 4
        assert all(0.0 <= float(row[3]) <= 1.0 for row in rows[1:])

    def test_round_trip_is_exact(self, generator, curve):
        generator.write_results_csv(curve, "results.csv")
        read = generator.read_results_csv("results.csv")
        assert read.rows == curve.rows
        assert read.label == curve.label
        assert read.sparsity == 3
        assert read.header == curve.header

    def test_nan_mean_error_round_trips(self, generator):
        curve = SuccessCurve(rows=[CurveRow(m=6, trials=2, successes=0, rate=0.0, mean_error=math.nan, median_iterations=0.0)])
        generator.write_results_csv(curve, "nan.csv")
        assert math.isnan(generator.read_results_csv("nan.csv").rows[0].mean_error)

    def test_empty_curve_writes_header_only(self, generator, temp_output_dir):
        generator.write_results_csv(SuccessCurve(), "empty.csv")
        assert _data_lines(temp_output_dir / "empty.csv") == [",".join(RESULTS_HEADER)]

    def test_statistics_returned(self, generator, curve):
        stats = generator.write_results_csv(curve, "results.csv")
        assert stats["success"] is True
        assert stats["rows_written"] == 3
        assert stats["file_size"] > 0

    def test_unwritable_path(self, generator, curve, temp_output_dir):
        blocker = temp_output_dir / "blocker"
        blocker.write_text("x", encoding="utf-8")
        with pytest.raises(ResultIOError) as exc_info:
            generator.write_results_csv(curve, blocker / "results.csv")
        assert str(blocker) in exc_info.value.path

    def test_read_bad_header(self, generator, temp_output_dir):
        (temp_output_dir / "bad.csv").write_text("m,rate\n6,0.5\n", encoding="utf-8")
        with pytest.raises(FormatError):
            generator.read_results_csv("bad.csv")

    def test_read_bad_row(self, generator, temp_output_dir):
        (temp_output_dir / "bad.csv").write_text(",".join(RESULTS_HEADER) + "\n6,10,x,0.5,0.1,3\n", encoding="utf-8")
        with pytest.raises(FormatError):
            generator.read_results_csv("bad.csv")

    def test_read_missing_file(self, generator):
        with pytest.raises(ResultIOError):
            generator.read_results_csv("absent.csv")

    def test_trials_csv_is_ordered(self, generator, temp_output_dir):
        records = [
            TrialRecord(m=12, trial_index=0, seed=5, success=True, error=1e-6, iterations=300, wall_time=0.1),
            TrialRecord(m=6, trial_index=1, seed=4, success=False, error=math.inf, iterations=0, wall_time=0.0,
                        status="numerical-error", failure="SolverError"),
            TrialRecord(m=6, trial_index=0, seed=3, success=False, error=0.5, iterations=900, wall_time=0.2),
        ]
        generator.write_trials_csv(records, "trials.csv", comments=["mode pocs-nonuniform"])
        rows = list(csv.reader(_data_lines(temp_output_dir / "trials.csv")))
        assert rows[0] == TRIALS_HEADER
        assert [(row[0], row[1]) for row in rows[1:]] == [("6", "0"), ("6", "1"), ("12", "0")]
        assert rows[2][4] == "inf"
        assert rows[2][8] == "SolverError"

    def test_diagnostics_csv(self, generator, temp_output_dir):
        rows = [DiagnosticRow("kappa", "", 1.2533, 1000, 7)]
        generator.write_diagnostics_csv(rows, "diag.csv")
        parsed = list(csv.reader(_data_lines(temp_output_dir / "diag.csv")))
        assert parsed[0] == DIAGNOSTICS_HEADER
        assert parsed[1] == ["kappa", "", "1.2533", "1000", "7"]


class TestPlot:
    """Test cases for the SVG chart."""

    @pytest.fixture
    def generator(self, temp_output_dir):
        return ReportGeneratorService(temp_output_dir)

    def _two_point_curve(self, label, sparsity=3):
        rows = [
            CurveRow(m=6, trials=4, successes=1, rate=0.25, mean_error=0.3, median_iterations=10.0),
            CurveRow(m=12, trials=4, successes=4, rate=1.0, mean_error=0.0, median_iterations=5.0),
        ]
        return SuccessCurve(rows=rows, label=label, sparsity=sparsity)

    def test_single_curve_is_one_polyline(self, generator, temp_output_dir):
        generator.emit_plot([self._two_point_curve("PO-CS")], "plot.svg")
        root = ET.parse(temp_output_dir / "plot.svg").getroot()
        groups = [el for el in root.iter(f"{SVG_NS}g") if el.get("id") == "curve-0"]
        assert groups
        paths = list(groups[0].iter(f"{SVG_NS}path"))
        assert len(paths) == 1
        d = paths[0].get("d")
        assert d.count("M") == 1
        assert d.count("L") == 1

    def test_legend_labels_verbatim(self, generator, temp_output_dir):
        curves = [self._two_point_curve("PO-CS (uniform)"), self._two_point_curve("linear CS")]
        generator.emit_plot(curves, "plot.svg", title="Success rate")
        root = ET.parse(temp_output_dir / "plot.svg").getroot()
        texts = {"".join(el.itertext()).strip() for el in root.iter(f"{SVG_NS}text")}
        assert "PO-CS (uniform)" in texts
        assert "linear CS" in texts
        assert "m/s" in texts

    def test_mismatched_sparsity(self, generator):
        with pytest.raises(ParameterError):
            generator.emit_plot([self._two_point_curve("a", 3), self._two_point_curve("b", 4)], "plot.svg")

    def test_no_curves(self, generator):
        with pytest.raises(ParameterError):
            generator.emit_plot([], "plot.svg")

    def test_output_is_reproducible(self, generator, temp_output_dir):
        generator.emit_plot([self._two_point_curve("a")], "one.svg")
        generator.emit_plot([self._two_point_curve("a")], "two.svg")
        assert (temp_output_dir / "one.svg").read_bytes() == (temp_output_dir / "two.svg").read_bytes()

"""Service for writing experiment results, diagnostics and plots.

Results files start with ``#`` comment lines recording the configuration,
followed by the header ``m,trials,successes,rate,mean_error,median_iters``
and one row per m. Floats are written with 17 significant digits, so a
file read back reproduces the aggregates exactly.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from ...domain.exceptions import ErrorCode, FormatError, ParameterError, ResultIOError
from ...domain.models import CurveRow, SuccessCurve, TrialRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

RESULTS_HEADER = ["m", "trials", "successes", "rate", "mean_error", "median_iters"]
TRIALS_HEADER = [
    "m", "trial_index", "seed", "success", "error", "iterations", "wall_time", "status", "failure",
]
DIAGNOSTICS_HEADER = ["probe", "parameters", "value", "samples", "seed"]


def _fmt(value: float) -> str:
    return f"{value:.17g}"


@dataclass(frozen=True)
class DiagnosticRow:
    """One line of a diagnostics CSV."""

    probe: str
    parameters: str
    value: float
    samples: int
    seed: int


class ReportGeneratorService:
    """Service for writing result tables and figures.

    This service provides:
    - Success-curve CSV files with configuration comments, and reading them back
    - Per-trial CSV dumps
    - Diagnostics CSV files
    - An SVG success-rate chart
    """

    def __init__(self, output_dir: Optional[Path] = None):
        """Initialize the report generator service.

        Args:
            output_dir: Directory relative paths are resolved against (default: cwd)
        """
        self.output_dir = Path(output_dir) if output_dir else Path.cwd()
        logger.debug(f"Initialized ReportGeneratorService with output dir: {self.output_dir}")

    def _resolve(self, path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.output_dir / path

    def _stats(self, path: Path, rows: int) -> Dict[str, Any]:
        return {
            "success": True,
            "output_file": str(path),
            "rows_written": rows,
            "file_size": path.stat().st_size,
            "timestamp": datetime.now().isoformat(),
        }

    def _write_table(
        self,
        path: PathLike,
        comments: Sequence[str],
        header: Sequence[str],
        rows: Iterable[Sequence[Any]],
    ) -> Dict[str, Any]:
        output_path = self._resolve(path)
        written = 0
        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, "w", newline="", encoding="utf-8") as handle:
                for line in comments:
                    handle.write(f"# {line}\n")
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(header)
                for row in rows:
                    writer.writerow(row)
                    written += 1
        except OSError as exc:
            logger.error(f"Failed to write {output_path}: {exc}")
            raise ResultIOError(str(output_path), exc) from exc
        logger.info(f"CSV written: {output_path} ({written} rows)")
        return self._stats(output_path, written)

    def write_results_csv(self, curve: SuccessCurve, path: PathLike) -> Dict[str, Any]:
        """Write a success curve.

        Raises:
            ResultIOError: The file cannot be written
        """
        comments = list(curve.header)
        if curve.label:
            comments.append(f"label {curve.label}")
        comments.append(f"sparsity {curve.sparsity}")
        rows = (
            [
                row.m,
                row.trials,
                row.successes,
                _fmt(row.rate),
                _fmt(row.mean_error),
                _fmt(row.median_iterations),
            ]
            for row in curve.rows
        )
        return self._write_table(path, comments, RESULTS_HEADER, rows)

    def read_results_csv(self, path: PathLike) -> SuccessCurve:
        """Read a file written by :meth:`write_results_csv`.

        Raises:
            ResultIOError: The file cannot be read
            FormatError: Header or rows malformed
        """
        input_path = self._resolve(path)
        try:
            with open(input_path, "r", encoding="utf-8") as handle:
                lines = [line.rstrip("\n") for line in handle if line.strip()]
        except OSError as exc:
            raise ResultIOError(str(input_path), exc, write=False) from exc

        comments = [line[1:].strip() for line in lines if line.startswith("#")]
        body = [line for line in lines if not line.startswith("#")]
        if not body or next(csv.reader([body[0]])) != RESULTS_HEADER:
            raise FormatError(f"expected header {','.join(RESULTS_HEADER)}", path=str(input_path))

        label, sparsity, header = "", 1, []
        for comment in comments:
            if comment.startswith("label "):
                label = comment[len("label "):]
            elif comment.startswith("sparsity "):
                sparsity = int(comment.split()[1])
            else:
                header.append(comment)

        rows = []
        for index, record in enumerate(csv.reader(body[1:]), start=2):
            try:
                m, trials, successes, rate, mean_error, median = record
                rows.append(
                    CurveRow(
                        m=int(m),
                        trials=int(trials),
                        successes=int(successes),
                        rate=float(rate),
                        mean_error=float(mean_error),
                        median_iterations=float(median),
                    )
                )
            except ValueError as exc:
                raise FormatError(
                    f"malformed results row {record}",
                    path=str(input_path),
                    line=index,
                    error_code=ErrorCode.FORMAT_MALFORMED_ROW,
                ) from exc
        return SuccessCurve(rows=rows, label=label, sparsity=sparsity, header=header)

    def write_trials_csv(
        self,
        records: Sequence[TrialRecord],
        path: PathLike,
        comments: Sequence[str] = (),
    ) -> Dict[str, Any]:
        """Dump per-trial records in (m, trial_index) order."""
        ordered = sorted(records, key=lambda rec: (rec.m, rec.trial_index))
        rows = (
            [
                rec.m,
                rec.trial_index,
                rec.seed,
                int(rec.success),
                _fmt(rec.error),
                rec.iterations,
                f"{rec.wall_time:.6f}",
                rec.status,
                rec.failure or "",
            ]
            for rec in ordered
        )
        return self._write_table(path, comments, TRIALS_HEADER, rows)

    def write_diagnostics_csv(
        self,
        rows: Sequence[DiagnosticRow],
        path: PathLike,
        comments: Sequence[str] = (),
    ) -> Dict[str, Any]:
        """Write probe results with columns probe,parameters,value,samples,seed."""
        return self._write_table(
            path,
            comments,
            DIAGNOSTICS_HEADER,
            ([row.probe, row.parameters, _fmt(row.value), row.samples, row.seed] for row in rows),
        )

    def emit_plot(
        self,
        curves: Sequence[SuccessCurve],
        path: PathLike,
        title: Optional[str] = None,
    ) -> Dict[str, Any]:
        """Write an SVG line chart of success rate against m/s, one line per curve.

        Each curve is a group with the id ``curve-<index>`` holding a single
        ``<path>`` (one moveto, then linetos), which is how matplotlib writes a
        polyline. Text stays text in the SVG so labels can be searched.

        Raises:
            ParameterError: Curves disagree on s, or no curves given
            ResultIOError: The file cannot be written
        """
        if not curves:
            raise ParameterError("emit_plot needs at least one curve", parameter="curves")
        sparsities = {curve.sparsity for curve in curves}
        if len(sparsities) != 1:
            raise ParameterError(
                f"curves must share s, got {sorted(sparsities)}", parameter="curves", value=sorted(sparsities)
            )
        sparsity = sparsities.pop()

        # Imported lazily so the numerical services do not pull in matplotlib
        import matplotlib
        from matplotlib.backends.backend_svg import FigureCanvasSVG
        from matplotlib.figure import Figure

        output_path = self._resolve(path)
        fig = Figure(figsize=(6.4, 4.4))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        for index, curve in enumerate(curves):
            (line,) = ax.plot(
                [m / sparsity for m in curve.m_values],
                curve.rates,
                linestyle="-",
                linewidth=1.5,
                label=curve.label or f"curve {index}",
            )
            line.set_gid(f"curve-{index}")
        ax.set_xlabel("m/s")
        ax.set_ylabel("success rate")
        ax.set_ylim(-0.02, 1.02)
        ax.grid(True, alpha=0.3)
        if title:
            ax.set_title(title)
        ax.legend(loc="lower right")

        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            with matplotlib.rc_context({"svg.fonttype": "none", "svg.hashsalt": "success-curves"}):
                fig.savefig(output_path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise ResultIOError(str(output_path), exc) from exc
        logger.info(f"Plot written: {output_path} ({len(curves)} curves)")
        return self._stats(output_path, len(curves))

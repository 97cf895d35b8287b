"""CSV and figure emission for trial results."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

from ..errors import InvalidInputError
from .runner import ALGORITHMS, TrialResult, aggregate

CSV_HEADER = (
    "seed", "swept_var", "swept_value", "algorithm", "sum_rate_bps_hz",
    "throughput_bps", "proposals", "candidates", "wall_ms",
)

_AXIS_LABELS = {
    "tx_power": "Transmit power per source [dBm]",
    "elements_per_irs": "Elements per IRS",
}


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def csv_rows(results: Sequence[TrialResult], timing: bool = False):
    """Rows ordered by swept value (as given), then seed, then algorithm."""
    value_order = {v: i for i, v in enumerate(dict.fromkeys(r.swept_value for r in results))}
    ordered = sorted(results, key=lambda r: (value_order[r.swept_value], r.seed))
    for r in ordered:
        for algo in ALGORITHMS:
            out = r.outcomes.get(algo)
            if out is None:
                continue
            yield (
                r.seed, r.swept_var, _fmt(r.swept_value), algo, _fmt(out.sum_rate),
                _fmt(out.throughput), out.proposals, out.candidates,
                f"{out.wall_ms:.3f}" if timing else "",
            )


def emit_csv(results: Sequence[TrialResult], path, timing: bool = False) -> Path:
    """Write one row per (trial, algorithm).

    ``wall_ms`` is left empty unless ``timing`` is set, so that identical
    inputs produce byte-identical files.
    """
    if not results:
        raise InvalidInputError("no results to write")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(csv_rows(results, timing))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def plot_series(results: Sequence[TrialResult]) -> dict:
    """``{algorithm: (x, mean, stderr)}`` as drawn by :func:`emit_plot`."""
    series: dict = {}
    for s in aggregate(results):
        xs, ms, es = series.setdefault(s.algorithm, ([], [], []))
        xs.append(s.swept_value)
        ms.append(s.mean)
        es.append(s.stderr)
    return series


def emit_plot(results: Sequence[TrialResult], path) -> dict:
    """Line chart of mean sum rate with standard-error bars, one series per algorithm.

    The format follows the file suffix (``.svg`` by default for a bare stem).
    """
    if not results:
        raise InvalidInputError("no results to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    if not path.suffix:
        path = path.with_suffix(".svg")
    series = plot_series(results)
    swept_var = results[0].swept_var
    with matplotlib.rc_context({"svg.hashsalt": "irsassoc", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for algo, (xs, ms, es) in series.items():
            ax.errorbar(xs, ms, yerr=es, marker="o", capsize=3, label=algo.upper())
        ax.set_xlabel(_AXIS_LABELS.get(swept_var, swept_var))
        ax.set_ylabel("Sum rate [bit/s/Hz]")
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        except OSError as exc:
            raise OSError(f"cannot write plot to {path}: {exc}") from exc
        finally:
            plt.close(fig)
    return series

"""Results CSV and plot-data tables."""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import fields
from pathlib import Path

from .harness import BenchmarkRecord

COLUMNS = tuple(f.name for f in fields(BenchmarkRecord))
PLOT_METRICS = ("norm_gates", "norm_depth", "norm_score", "t_trans_s", "norm_t_sim")
LOG_METRICS = ("t_trans_s", "norm_t_sim")
_INT_COLS = {"opt_level", "trial", "seed", "n_gate_orig", "n_gate", "depth_orig", "depth"}
_FLOAT_COLS = {"c", "score_orig", "score", "norm_gates", "norm_depth", "norm_score",
               "t_trans_s", "t_sim_s", "norm_t_sim"}


class ReportError(RuntimeError):
    pass


def fmt_float(x: float | None) -> str:
    return "" if x is None else format(x, ".9g")


def _cell(name, value) -> str:
    if value is None:
        return ""
    if name == "selected":
        return "1" if value else "0"
    if name in _FLOAT_COLS:
        return fmt_float(value)
    return str(value)


def dumps_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_cell(name, getattr(r, name)) for name in COLUMNS])
    return buf.getvalue()


def write_csv(records, path) -> None:
    Path(path).write_text(dumps_csv(records), encoding="utf-8")


def _parse(name, text):
    if name == "selected":
        return text == "1"
    if text == "":
        return None
    if name in _INT_COLS:
        return int(text)
    if name in _FLOAT_COLS:
        return float(text)
    return text


def loads_csv(text: str) -> list[BenchmarkRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise ReportError(f"unexpected CSV header; expected {','.join(COLUMNS)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(COLUMNS):
            raise ReportError(f"line {lineno}: expected {len(COLUMNS)} fields, got {len(row)}")
        out.append(BenchmarkRecord(**{name: _parse(name, v) for name, v in zip(COLUMNS, row)}))
    return out


def read_csv(path) -> list[BenchmarkRecord]:
    return loads_csv(Path(path).read_text(encoding="utf-8"))


def plot_rows(records, metric: str, aggregate: str = "selected", log: bool = False):
    """(benchmark, arch, c, value) per pair, from the selected output or the mean of all outputs."""
    groups: dict[tuple, list] = defaultdict(list)
    order = []
    for r in records:
        if aggregate == "selected" and not r.selected:
            continue
        key = (r.benchmark, r.arch, r.c)
        if key not in groups:
            order.append(key)
        groups[key].append(getattr(r, metric))
    if aggregate not in ("selected", "mean"):
        raise ValueError(f"unknown aggregate {aggregate!r}")
    rows = []
    for key in order:
        vals = [v for v in groups[key] if v is not None]
        value = sum(vals) / len(vals) if vals else None
        if log and value is not None:
            value = math.log10(value) if value > 0 else None
        rows.append((*key, value))
    return rows


def write_report(records, out_dir, aggregate: str = "selected") -> list[Path]:
    records = list(records)
    if not records:
        raise ReportError("no records to report")
    if aggregate == "selected" and not any(r.selected for r in records):
        raise ReportError("no selected records to report")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create {out}: {exc}") from None
    written = [out / "results.csv"]
    write_csv(records, written[0])
    tables = [(m, False) for m in PLOT_METRICS] + [(m, True) for m in LOG_METRICS]
    for metric, log in tables:
        name = f"plot_log10_{metric}.csv" if log else f"plot_{metric}.csv"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("benchmark", "arch", "c", f"log10_{metric}" if log else metric))
        for b, a, c, v in plot_rows(records, metric, aggregate, log):
            w.writerow((b, a, fmt_float(c), fmt_float(v)))
        path = out / name
        path.write_text(buf.getvalue(), encoding="utf-8")
        written.append(path)
    return written

"""Timeseries CSV and summary JSON emission with round-trip-exact floats."""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .config import RunSummary
from .diagnostics import DiagnosticsRecord, DiagnosticsSink
from .state import State

_SCALAR_COLUMNS = (
    "t",
    "mass",
    "momentum_scalar",
    "energy",
    "entropy_total",
    "entropy_dissipation",
    "lyapunov",
    "shock_indicator",
)


def timeseries_header(max_k: int) -> str:
    """Fixed CSV header for a run with diagnostics order max_k."""
    columns = list(_SCALAR_COLUMNS)
    columns += [f"E{k}1" for k in range(max_k + 1)]
    columns += [f"E{k}2" for k in range(1, max_k + 1)]
    return ",".join(columns)


def format_record(record: DiagnosticsRecord) -> str:
    """One CSV row; repr gives the shortest digit string that round-trips."""
    values = [getattr(record, name) for name in _SCALAR_COLUMNS]
    values += list(record.e_k1)
    values += list(record.e_k2)
    return ",".join(repr(float(v)) for v in values)


class CsvSink(DiagnosticsSink):
    """Stream records to a CSV file as the run produces them."""

    def __init__(self, path: str | Path, max_k: int) -> None:
        self.path = Path(path)
        self.max_k = max_k
        self._fh = open(self.path, "w")
        self._fh.write(timeseries_header(max_k) + "\n")

    def on_record(self, record: DiagnosticsRecord) -> None:
        self._fh.write(format_record(record) + "\n")

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self) -> "CsvSink":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class BreachDumpSink(DiagnosticsSink):
    """Dump the full offending state to an .npz file on a positivity breach."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    def on_breach(self, state: State, report) -> None:
        np.savez(
            self.path,
            a=state.a,
            u=state.u,
            theta=state.theta,
            t=state.t,
            kappa=state.params.kappa,
        )


class CompositeSink(DiagnosticsSink):
    def __init__(self, *sinks: DiagnosticsSink) -> None:
        self.sinks = sinks

    def on_record(self, record: DiagnosticsRecord) -> None:
        for sink in self.sinks:
            sink.on_record(record)

    def on_breach(self, state: State, report) -> None:
        for sink in self.sinks:
            sink.on_breach(state, report)


def emit_timeseries(
    records: Iterable[DiagnosticsRecord],
    path: str | Path,
    max_k: int,
    summary: RunSummary | None = None,
) -> None:
    """Write a batch of records as CSV; optionally write the sibling summary."""
    path = Path(path)
    with open(path, "w") as fh:
        fh.write(timeseries_header(max_k) + "\n")
        for record in records:
            fh.write(format_record(record) + "\n")
    if summary is not None:
        write_summary(summary, path.with_name("summary.json"))


def write_summary(summary: RunSummary, path: str | Path) -> None:
    """Serialize a RunSummary as JSON with lower_snake_case keys."""
    payload = dataclasses.asdict(summary)
    payload["final_e_k1"] = list(summary.final_e_k1)
    payload["final_e_k2"] = list(summary.final_e_k2)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_timeseries(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a timeseries CSV back into (column names, row array)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [
            [float(tok) for tok in line.strip().split(",")]
            for line in fh
            if line.strip()
        ]
    return header, np.asarray(rows)

"""Parameter sweeps: run a base config across one axis, optionally in parallel."""

from __future__ import annotations

import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .config import ConfigError, RunConfig, RunSummary
from .integrator import run
from .output import BreachDumpSink, CompositeSink, CsvSink, write_summary

SWEEP_AXES = ("eps", "kappa", "n_cells")


def _format_value(axis: str, value: float | int) -> str:
    if axis == "n_cells":
        return str(int(value))
    return repr(float(value))


def _execute_single(config: RunConfig, out_dir: str | None) -> RunSummary:
    """Run one sweep member; unexpected failures become an error summary."""
    try:
        if out_dir is None:
            return run(config)
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        csv_sink = CsvSink(directory / "timeseries.csv", config.diag_max_k)
        sink = CompositeSink(csv_sink, BreachDumpSink(directory / "state_dump.npz"))
        try:
            summary = run(config, sink)
        finally:
            csv_sink.close()
        write_summary(summary, directory / "summary.json")
        return summary
    except Exception as exc:  # noqa: BLE001 - isolate per-run failures
        return RunSummary(
            run_id=config.run_id,
            termination_reason="error",
            steps=0,
            t_final=0.0,
            wall_clock_seconds=0.0,
            error="".join(traceback.format_exception_only(type(exc), exc)).strip(),
        )


def sweep(
    base: RunConfig,
    axis: str,
    values: Sequence[float | int],
    parallelism: int = 1,
    out_root: str | Path | None = None,
) -> list[RunSummary]:
    """Run the base config once per value of the given axis.

    Results come back in input order.  Each member gets a derived run_id
    (and, when out_root is given, its own output directory keyed by it).
    A member that fails is reported through its summary; the sweep carries on.
    Numeric results are identical whether the members run sequentially or in
    parallel worker processes.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    if parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {parallelism}")

    jobs: list[tuple[RunConfig, str | None]] = []
    for value in values:
        cast = int(value) if axis == "n_cells" else float(value)
        run_id = f"{base.run_id}-{axis}-{_format_value(axis, cast)}"
        config = replace(base, **{axis: cast}, run_id=run_id)
        config.validate()
        out_dir = None if out_root is None else str(Path(out_root) / run_id)
        jobs.append((config, out_dir))

    if not jobs:
        return []
    if parallelism == 1 or len(jobs) == 1:
        return [_execute_single(config, out_dir) for config, out_dir in jobs]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        futures = [pool.submit(_execute_single, c, d) for c, d in jobs]
        return [future.result() for future in futures]

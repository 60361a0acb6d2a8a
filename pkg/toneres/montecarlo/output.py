# Copyright (c) 2026 The toneres developers

import csv
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

from toneres.errors import ConfigurationError
from toneres.util.log import logger
from .campaign import CampaignResult

PathLike = Union[str, Path]

TRIALS_HEADER = ("trial", "method", "papr_db", "active_prt", "status", "millis")
ECDF_HEADER = ("papr_db", "cdf")
PMF_HEADER = ("count", "prob")
SUMMARY_HEADER = ("method", "trials", "success_rate", "mean_active", "mode_active")
SWEEP_HEADER = ("n_total", "n_prt", "method", "trials", "success_rate", "mean_active", "mode_active")


def _fmt(value: float) -> str:
    return format(value, ".12g")


def _optional(value: Optional[int]) -> str:
    return "" if value is None else str(value)


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def prepare_output_dir(path: PathLike) -> Path:
    """Create the directory if needed and make sure it is writable"""
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        marker = out / ".toneres-write-check"
        marker.touch()
        marker.unlink()
    except OSError as e:
        raise ConfigurationError(f"Output directory {out} is not writable: {e}") from e
    return out


def write_campaign(result: CampaignResult, out_dir: PathLike) -> List[Path]:
    """Write trials.csv, summary.csv and per-method ECDF and PMF files

    Rows are ordered by trial and then by the configured method order, so the
    files are byte-identical for identical configurations.
    """
    out = prepare_output_dir(out_dir)
    written = []

    path = out / "trials.csv"
    _write_rows(
        path,
        TRIALS_HEADER,
        (
            (
                record.trial,
                method.value,
                _fmt(record.outcomes[method].papr_db),
                record.outcomes[method].active_prt,
                record.outcomes[method].status,
                _fmt(record.outcomes[method].millis),
            )
            for record in result.records
            for method in result.methods
        ),
    )
    written.append(path)

    for method in result.methods:
        path = out / f"ecdf_{method.value}.csv"
        _write_rows(path, ECDF_HEADER, ((_fmt(v), _fmt(p)) for v, p in result.ecdf[method]))
        written.append(path)

        path = out / f"pmf_{method.value}.csv"
        _write_rows(path, PMF_HEADER, ((count, _fmt(p)) for count, p in result.pmf[method]))
        written.append(path)

    path = out / "summary.csv"
    _write_rows(path, SUMMARY_HEADER, _summary_rows(result))
    written.append(path)

    logger.info("Wrote %d files to %s", len(written), out)
    return written


def _summary_rows(result: CampaignResult) -> List[tuple]:
    return [
        (
            method.value,
            len(result.records),
            _fmt(result.success_rate[method]),
            _fmt(result.mean_active(method)),
            _optional(result.mode_active(method)),
        )
        for method in result.methods
    ]


def write_sweep_summary(results: Sequence[CampaignResult], out_dir: PathLike) -> Path:
    """One summary row per (system size, method)"""
    out = prepare_output_dir(out_dir)
    rows = [
        (result.config.n_total, result.config.n_prt) + row
        for result in results
        for row in _summary_rows(result)
    ]
    path = out / "sweep_summary.csv"
    _write_rows(path, SWEEP_HEADER, rows)
    return path

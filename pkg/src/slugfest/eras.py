"""Era partitioning, per-era fitting, and worst-fit ranking.

Eras are contiguous year spans (the last may be open-ended).  Events are
assigned by calendar year; the gap between two consecutive events
belongs to the era of the *later* event by default, so that per-era gap
counts sum to n-1 over the whole stream.  The alternative of dropping
era-spanning gaps entirely is available as ``boundary_gap="drop"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import Era, EventOccurrence, ExponentialFit, IatSeries
from .errors import DataError, FormatError
from .model import fit_mle

ERA_CSV_HEADER = "name,start_year,end_year"
ERA_SUMMARY_CSV_HEADER = "era,count,mean_iat,sd_iat,rate"

_BOUNDARY_GAP_MODES = ("later", "drop")


def default_eras() -> tuple[Era, ...]:
    """The standard six-era segmentation of seasons since 1901."""
    return (
        Era("Dead Ball", 1901, 1919),
        Era("Lively Ball", 1920, 1941),
        Era("Integration", 1942, 1960),
        Era("Expansion", 1961, 1976),
        Era("Free Agency", 1977, 1993),
        Era("Long Ball", 1994, None),
    )


def validate_era_partition(eras) -> tuple[Era, ...]:
    """Check that eras are contiguous, non-overlapping, and ordered."""
    eras = tuple(eras)
    if not eras:
        raise DataError("era list is empty")
    ordered = sorted(eras, key=lambda e: e.start_year)
    for earlier, later in zip(ordered, ordered[1:]):
        if earlier.end_year is None:
            raise DataError(f"era {earlier.name!r} is open-ended but not last")
        if later.start_year != earlier.end_year + 1:
            raise DataError(
                f"eras {earlier.name!r} and {later.name!r} do not meet: "
                f"{earlier.end_year} then {later.start_year}"
            )
    return tuple(ordered)


def era_for_year(year: int, eras) -> Era:
    for era in eras:
        if era.contains(year):
            return era
    raise DataError(f"year {year} precedes the first era")


def load_eras(source) -> tuple[Era, ...]:
    """Read an era definition CSV: ``name,start_year,end_year``.

    An empty ``end_year`` means open-ended.
    """
    from .ingest import _read_text

    text = _read_text(source)
    lines = [line.rstrip("\r") for line in text.split("\n")]
    if not lines or lines[0] != ERA_CSV_HEADER:
        raise FormatError(f"missing or malformed header; expected {ERA_CSV_HEADER!r}")
    eras = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise FormatError(f"line {line_no}: expected 3 fields, got {len(parts)}")
        name, raw_start, raw_end = parts
        try:
            start = int(raw_start)
            end = int(raw_end) if raw_end else None
        except ValueError as exc:
            raise FormatError(f"line {line_no}: years must be integers") from exc
        try:
            eras.append(Era(name, start, end))
        except ValueError as exc:
            raise FormatError(f"line {line_no}: {exc}") from exc
    return validate_era_partition(eras)


def eras_to_csv(eras) -> str:
    rows = [ERA_CSV_HEADER]
    for era in eras:
        end = "" if era.end_year is None else str(era.end_year)
        rows.append(f"{era.name},{era.start_year},{end}")
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class EraFit:
    """Per-era gap series and its exponential fit (None if no gaps)."""

    era: Era
    iats: IatSeries
    fit: ExponentialFit | None
    event_count: int

    @property
    def count(self) -> int:
        """Number of gaps summarized (the sample size of the fit)."""
        return len(self.iats)

    @property
    def mean(self) -> float | None:
        return self.fit.sample_mean if self.fit else None

    @property
    def sd(self) -> float | None:
        return self.fit.sample_sd if self.fit else None


def partition_and_fit(
    events,
    eras=None,
    boundary_gap: str = "later",
) -> dict[str, EraFit]:
    """Assign events to eras by year and fit each era's gap series.

    ``boundary_gap="later"`` (default) assigns the gap spanning an era
    boundary to the later event's era; ``"drop"`` discards such gaps.
    Returns a mapping from era name to :class:`EraFit`, in era order.
    """
    if boundary_gap not in _BOUNDARY_GAP_MODES:
        raise ValueError(f"boundary_gap must be one of {_BOUNDARY_GAP_MODES}")
    eras = validate_era_partition(eras if eras is not None else default_eras())
    events = list(events)

    assignments: list[Era] = [era_for_year(e.season, eras) for e in events]
    per_era_values: dict[str, list[int]] = {era.name: [] for era in eras}
    per_era_events: dict[str, list[EventOccurrence]] = {era.name: [] for era in eras}

    for event, era in zip(events, assignments):
        per_era_events[era.name].append(event)
    for (prev, prev_era), (cur, cur_era) in zip(
        zip(events, assignments), zip(events[1:], assignments[1:])
    ):
        if boundary_gap == "drop" and prev_era != cur_era:
            continue
        diff = cur.continuous_index - prev.continuous_index
        per_era_values[cur_era.name].append(diff if diff > 0 else 1)

    out: dict[str, EraFit] = {}
    for era in eras:
        values = tuple(per_era_values[era.name])
        era_events = per_era_events[era.name]
        span = (era_events[0].date, era_events[-1].date) if era_events else None
        series = IatSeries(values, source_span=span)
        fit = fit_mle(series) if values else None
        out[era.name] = EraFit(
            era=era, iats=series, fit=fit, event_count=len(era_events)
        )
    return out


def era_summary_csv(era_fits: dict[str, EraFit], sig: int = 9) -> str:
    """Per-era summary CSV: ``era,count,mean_iat,sd_iat,rate``."""
    rows = [ERA_SUMMARY_CSV_HEADER]
    for name, ef in era_fits.items():
        if ef.fit is None:
            rows.append(f"{name},0,,,")
            continue
        sd = "" if ef.sd is None else f"{ef.sd:.{sig}g}"
        rows.append(
            f"{name},{ef.count},{ef.mean:.{sig}g},{sd},{ef.fit.rate:.{sig}g}"
        )
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class WorstFitEntry:
    """One observation ranked by how improbable its gap is under the fit."""

    event: EventOccurrence
    iat: int
    survival: float


def worst_fit(events, fit: ExponentialFit, k: int) -> list[WorstFitEntry]:
    """Top-k events by smallest survival probability of their gap.

    Since the survival function is monotone, this is the same as ranking
    by gap length descending; ties are broken by event date.  Each gap
    is attached to the event that ends it, so the first event carries no
    entry.
    """
    events = list(events)
    n = max(len(events) - 1, 0)
    if k < 0 or k > n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    entries = []
    for prev, cur in zip(events, events[1:]):
        diff = cur.continuous_index - prev.continuous_index
        gap = diff if diff > 0 else 1
        entries.append(
            WorstFitEntry(event=cur, iat=gap, survival=math.exp(-fit.rate * gap))
        )
    entries.sort(key=lambda w: (-w.iat, w.event.date))
    return entries[:k]

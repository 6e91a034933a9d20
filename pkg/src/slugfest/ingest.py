"""Game-log parsing and schedule validation.

The canonical game-log format is CSV with the exact header
``date,day_game_ordinal,home_team,away_team,home_runs,away_runs``:
ISO-8601 dates, ordinal 1 or 2, 2-5 character uppercase team codes and
non-negative base-10 run counts.  LF and CRLF input are both accepted;
output is always LF.  Malformed lines are collected as line-numbered
diagnostics rather than aborting the parse; a duplicated game is a hard
error.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from datetime import date as _date
from functools import lru_cache
from pathlib import Path

from .domain import GameRecord
from .errors import DuplicateRecordError, FormatError

HEADER = "date,day_game_ordinal,home_team,away_team,home_runs,away_runs"

_TEAM_RE = re.compile(r"^[A-Z][A-Z0-9]{1,4}$")


@dataclass(frozen=True)
class Diagnostic:
    """One skipped input line and the reason it was skipped."""

    line_no: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line_no}: {self.message}"


@dataclass(frozen=True)
class GameLogFile:
    """Result of parsing a game log: sorted records plus diagnostics."""

    records: tuple[GameRecord, ...]
    diagnostics: tuple[Diagnostic, ...]

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def _read_text(source) -> str:
    """Accept a path, an open text stream, or a ``StringIO``."""
    if hasattr(source, "read"):
        return source.read()
    return Path(source).read_text(encoding="utf-8")


def _parse_line(line_no: int, line: str):
    parts = line.split(",")
    if len(parts) != 6:
        return None, Diagnostic(line_no, f"expected 6 fields, got {len(parts)}")
    raw_date, raw_ordinal, home, away, raw_hr, raw_ar = parts
    try:
        when = _date.fromisoformat(raw_date)
    except ValueError:
        return None, Diagnostic(line_no, f"date not ISO-8601: {raw_date!r}")
    if raw_ordinal not in ("1", "2"):
        return None, Diagnostic(line_no, f"day_game_ordinal must be 1 or 2: {raw_ordinal!r}")
    for team in (home, away):
        if not _TEAM_RE.match(team):
            return None, Diagnostic(
                line_no, f"team code must be 2-5 uppercase characters: {team!r}"
            )
    try:
        home_runs = int(raw_hr)
        away_runs = int(raw_ar)
    except ValueError:
        return None, Diagnostic(line_no, f"runs must be integers: {raw_hr!r},{raw_ar!r}")
    if home_runs < 0 or away_runs < 0:
        return None, Diagnostic(line_no, "runs must be non-negative")
    try:
        record = GameRecord(
            date=when,
            day_game_ordinal=int(raw_ordinal),
            home_team=home,
            away_team=away,
            home_runs=home_runs,
            away_runs=away_runs,
        )
    except ValueError as exc:
        return None, Diagnostic(line_no, str(exc))
    return record, None


def parse_game_log(source, format: str = "csv") -> GameLogFile:
    """Parse a game log into sorted records.

    Returns a :class:`GameLogFile`; iterate it for the records (sorted
    by date, then ordinal) and check ``.diagnostics`` for skipped lines.
    Raises :class:`FormatError` for a bad header and
    :class:`DuplicateRecordError` when the same matchup appears twice at
    one ordinal on one date.
    """
    if format != "csv":
        raise ValueError(f"unsupported format {format!r}")
    text = _read_text(source)
    lines = [line.rstrip("\r") for line in text.split("\n")]
    if not lines or lines[0] != HEADER:
        raise FormatError(f"missing or malformed header; expected {HEADER!r}")

    records: list[GameRecord] = []
    diagnostics: list[Diagnostic] = []
    seen: dict[tuple, int] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        record, diag = _parse_line(line_no, line)
        if diag is not None:
            diagnostics.append(diag)
            continue
        key = (
            record.date,
            frozenset((record.home_team, record.away_team)),
            record.day_game_ordinal,
        )
        if key in seen:
            raise DuplicateRecordError(
                f"line {line_no}: duplicate game "
                f"{record.date} {record.away_team} at {record.home_team} "
                f"(game {record.day_game_ordinal}; first seen on line {seen[key]})"
            )
        seen[key] = line_no
        records.append(record)

    records.sort(
        key=lambda r: (r.date, r.day_game_ordinal, r.home_team, r.away_team)
    )
    return GameLogFile(tuple(records), tuple(diagnostics))


def records_to_csv(records) -> str:
    """Serialize records back to the canonical format (LF line endings)."""
    rows = [HEADER]
    for r in records:
        rows.append(
            f"{r.date.isoformat()},{r.day_game_ordinal},"
            f"{r.home_team},{r.away_team},{r.home_runs},{r.away_runs}"
        )
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class ScheduleReport:
    """Per-season game totals plus scheduling anomalies (report-only)."""

    season_totals: tuple[tuple[int, int], ...]
    anomalies: tuple[str, ...]

    def total_for(self, year: int) -> int:
        for y, total in self.season_totals:
            if y == year:
                return total
        return 0


def validate_schedule(records) -> ScheduleReport:
    """Summarize per-season totals and flag schedule oddities.

    Flags a team playing two ordinal-1 games on one date, an ordinal-2
    game with no matching first game, and seasons missing entirely from
    the middle of the covered range.
    """
    totals: dict[int, int] = {}
    day_ordinal_teams: dict[tuple, list[str]] = {}
    pairs_seen: set[tuple] = set()
    anomalies: list[str] = []

    for r in records:
        totals[r.season] = totals.get(r.season, 0) + 1
        for team in (r.home_team, r.away_team):
            day_ordinal_teams.setdefault((r.date, r.day_game_ordinal), []).append(team)
        pairs_seen.add(
            (r.date, frozenset((r.home_team, r.away_team)), r.day_game_ordinal)
        )

    for (when, ordinal), teams in sorted(day_ordinal_teams.items()):
        for team in sorted(set(teams)):
            if teams.count(team) > 1:
                anomalies.append(
                    f"{when}: {team} appears in {teams.count(team)} games at ordinal {ordinal}"
                )

    for when, pair, ordinal in sorted(
        pairs_seen, key=lambda k: (k[0], sorted(k[1]), k[2])
    ):
        if ordinal == 2 and (when, pair, 1) not in pairs_seen:
            a, b = sorted(pair)
            anomalies.append(f"{when}: {a}/{b} have a second game but no first")

    if totals:
        years = sorted(totals)
        for year in range(years[0], years[-1] + 1):
            if year not in totals:
                anomalies.append(f"season {year} missing from the corpus")

    return ScheduleReport(
        season_totals=tuple(sorted(totals.items())),
        anomalies=tuple(anomalies),
    )


@lru_cache(maxsize=1)
def load_bundled_corpus() -> GameLogFile:
    """Parse the reference game-log corpus shipped with the package."""
    from importlib.resources import files

    text = files("slugfest.data").joinpath("games.csv").read_text(encoding="utf-8")
    return parse_game_log(io.StringIO(text))

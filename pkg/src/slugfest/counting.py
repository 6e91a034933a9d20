"""Event detection and continuous game counting.

The continuous index of a game is the cumulative count of games played,
carried across season boundaries.  An event in a day's first (or only)
game is treated as the first game played that day, so its index is the
count through the previous day plus one; an event in the second game of
a doubleheader is placed last among that day's games.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby

from .domain import EventOccurrence, GameRecord, IatSeries
from .errors import EventLookupError, InsufficientDataError, OrderingError

EVENTS_CSV_HEADER = "date,team,runs,continuous_index"
IATS_CSV_HEADER = "iat"


@dataclass(frozen=True)
class CountingConfig:
    """Event definition and counting rules."""

    threshold: int = 20
    first_season_year: int = 1901
    wrap_seasons: bool = True

    def __post_init__(self) -> None:
        if self.threshold < 1:
            raise ValueError("threshold must be >= 1")


def _check_sorted(records) -> None:
    prev = None
    for r in records:
        key = (r.date, r.day_game_ordinal)
        if prev is not None and key < prev:
            raise OrderingError(
                f"records not sorted by (date, ordinal) at {r.date} game "
                f"{r.day_game_ordinal}"
            )
        prev = key


def _walk_days(records, config: CountingConfig):
    """Yield (date, games_that_day, games_before_day) along the record stream.

    The running count restarts at season boundaries when
    ``wrap_seasons`` is off; records before ``first_season_year`` are
    ignored entirely.
    """
    counted = (r for r in records if r.season >= config.first_season_year)
    count_before = 0
    current_year = None
    for day, games in groupby(counted, key=lambda r: r.date):
        games = list(games)
        if not config.wrap_seasons and day.year != current_year:
            count_before = 0
        current_year = day.year
        yield day, games, count_before
        count_before += len(games)


def _sides_at_threshold(game: GameRecord, threshold: int):
    """Scoring sides meeting the threshold, higher-scoring side first."""
    sides = [
        (game.home_team, game.home_runs),
        (game.away_team, game.away_runs),
    ]
    qualifying = [(t, r) for t, r in sides if r >= threshold]
    qualifying.sort(key=lambda tr: (-tr[1], tr[0]))
    return qualifying


def _index_for(game: GameRecord, count_before: int, day_total: int) -> int:
    if game.day_game_ordinal == 1:
        return count_before + 1
    return count_before + day_total


def detect_events(records, config: CountingConfig | None = None) -> list[EventOccurrence]:
    """Find every (game, side) at or above the run threshold, with indices.

    A game in which both teams reach the threshold yields two
    occurrences sharing one continuous index.  Input must be sorted by
    (date, ordinal).
    """
    config = config or CountingConfig()
    _check_sorted(records)
    events: list[EventOccurrence] = []
    for day, games, count_before in _walk_days(records, config):
        day_total = len(games)
        for game in games:
            for team, runs in _sides_at_threshold(game, config.threshold):
                events.append(
                    EventOccurrence(
                        date=day,
                        scoring_team=team,
                        runs=runs,
                        continuous_index=_index_for(game, count_before, day_total),
                        game=game,
                    )
                )
    return events


def continuous_index(
    event_game: GameRecord,
    records,
    config: CountingConfig | None = None,
) -> int:
    """Continuous index of one game within a sorted record stream."""
    config = config or CountingConfig()
    _check_sorted(records)
    for day, games, count_before in _walk_days(records, config):
        if day != event_game.date:
            continue
        for game in games:
            if game == event_game:
                return _index_for(game, count_before, len(games))
    raise EventLookupError(
        f"game {event_game.date} {event_game.away_team} at "
        f"{event_game.home_team} not found in records"
    )


def compute_iats(events) -> IatSeries:
    """Differences of consecutive event indices.

    A pair of occurrences from one game (both teams at the threshold)
    shares an index; its gap is recorded as 1, the minimum positive lag,
    so the series stays valid for exponential modeling.  A negative gap
    means the events are out of order and is an error.
    """
    events = list(events)
    if len(events) < 2:
        raise InsufficientDataError("need at least 2 events to form gaps")
    values: list[int] = []
    for prev, cur in zip(events, events[1:]):
        diff = cur.continuous_index - prev.continuous_index
        if diff < 0:
            raise OrderingError(
                f"event at index {cur.continuous_index} follows "
                f"{prev.continuous_index}: events out of order"
            )
        values.append(diff if diff > 0 else 1)
    return IatSeries(tuple(values), source_span=(events[0].date, events[-1].date))


def events_to_csv(events) -> str:
    rows = [EVENTS_CSV_HEADER]
    for e in events:
        rows.append(f"{e.date.isoformat()},{e.scoring_team},{e.runs},{e.continuous_index}")
    return "\n".join(rows) + "\n"


def iats_to_csv(series: IatSeries) -> str:
    rows = [IATS_CSV_HEADER]
    rows.extend(str(v) for v in series.values)
    return "\n".join(rows) + "\n"


def load_iats(source) -> IatSeries:
    """Read an IAT series from CSV (the ``iat`` header is optional)."""
    from .errors import FormatError
    from .ingest import _read_text  # same path/stream handling as game logs

    text = _read_text(source)
    values: list[int] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.strip()
        if not line or (line_no == 1 and line == IATS_CSV_HEADER):
            continue
        try:
            value = int(line)
        except ValueError as exc:
            raise FormatError(
                f"line {line_no}: inter-arrival times must be integers, got {line!r}"
            ) from exc
        if value < 1:
            raise FormatError(f"line {line_no}: inter-arrival times must be >= 1")
        values.append(value)
    return IatSeries(tuple(values))

"""Core value types shared by every module.

Pure data: no I/O and no statistics.  All types are immutable and
hashable, so they are safe to share between threads and to use as
dictionary keys.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class GameRecord:
    """One completed game: the raw fact events are detected from."""

    date: dt.date
    day_game_ordinal: int
    home_team: str
    away_team: str
    home_runs: int
    away_runs: int

    def __post_init__(self) -> None:
        if self.day_game_ordinal not in (1, 2):
            raise ValueError(
                f"day_game_ordinal must be 1 or 2, got {self.day_game_ordinal!r}"
            )
        if self.home_runs < 0 or self.away_runs < 0:
            raise ValueError("runs must be non-negative")
        if not self.home_team or not self.away_team:
            raise ValueError("team identifiers must be non-empty")
        if self.home_team == self.away_team:
            raise ValueError("a team cannot play itself")

    @property
    def season(self) -> int:
        return self.date.year

    def runs_for(self, team: str) -> int:
        if team == self.home_team:
            return self.home_runs
        if team == self.away_team:
            return self.away_runs
        raise KeyError(f"{team!r} did not play in this game")


@dataclass(frozen=True, order=True)
class EventOccurrence:
    """A team reaching the run threshold in one game.

    ``continuous_index`` is the cumulative game count at which the event
    game sits, counted continuously across seasons.  A game in which both
    teams reach the threshold yields two occurrences sharing one index.
    """

    date: dt.date
    scoring_team: str
    runs: int
    continuous_index: int
    game: GameRecord = field(compare=False)

    def __post_init__(self) -> None:
        if self.continuous_index < 1:
            raise ValueError("continuous_index must be >= 1")
        if self.scoring_team not in (self.game.home_team, self.game.away_team):
            raise ValueError("scoring_team must be one of the game's teams")
        if self.runs != self.game.runs_for(self.scoring_team):
            raise ValueError("runs must match the game record")
        if self.date != self.game.date:
            raise ValueError("date must match the game record")

    @property
    def season(self) -> int:
        return self.date.year


@dataclass(frozen=True)
class IatSeries:
    """Ordered inter-arrival times (games between consecutive events)."""

    values: tuple[int, ...]
    source_span: tuple[dt.date, dt.date] | None = None

    def __post_init__(self) -> None:
        if any(v < 1 for v in self.values):
            raise ValueError("inter-arrival times must be >= 1")
        if self.source_span is not None and self.source_span[0] > self.source_span[1]:
            raise ValueError("span start must not be after span end")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True, order=True)
class Era:
    """A named span of seasons; ``end_year=None`` means open-ended."""

    name: str
    start_year: int
    end_year: int | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("era name must be non-empty")
        if self.end_year is not None and self.end_year < self.start_year:
            raise ValueError("end_year must not precede start_year")

    def contains(self, year: int) -> bool:
        if year < self.start_year:
            return False
        return self.end_year is None or year <= self.end_year


@dataclass(frozen=True)
class ExponentialFit:
    """Maximum-likelihood exponential fit of an IAT sample.

    The defining identity ``rate * sample_mean == 1`` is enforced on
    construction (to 1e-12 relative).  ``sample_sd`` uses the n-1
    denominator and is ``None`` for single-observation samples.
    """

    rate: float
    n: int
    sample_mean: float
    sample_sd: float | None

    def __post_init__(self) -> None:
        if self.rate <= 0.0:
            raise ValueError("rate must be positive")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if abs(self.rate * self.sample_mean - 1.0) > 1e-12:
            raise ValueError("rate must equal 1/sample_mean")
        if self.sample_sd is not None and self.sample_sd < 0.0:
            raise ValueError("sample_sd must be non-negative")

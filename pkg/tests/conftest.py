import datetime as dt

import pytest

from slugfest.domain import GameRecord, IatSeries
from slugfest.model import fit_mle


@pytest.fixture
def small_series():
    return IatSeries((3.0, 1.0, 4.0, 1.5, 9.0, 2.6, 5.3, 5.8), None)


@pytest.fixture
def small_fit(small_series):
    return fit_mle(small_series)


def make_game(
    date="1912-06-05",
    ordinal=1,
    home="BSN",
    away="PHI",
    home_runs=21,
    away_runs=5,
):
    return GameRecord(
        date=dt.date.fromisoformat(date),
        day_game_ordinal=ordinal,
        home_team=home,
        away_team=away,
        home_runs=home_runs,
        away_runs=away_runs,
    )


def schedule_rows(n_games, year=1912, start="04-15", per_day=4, runs=(4, 2),
                  start_date=None):
    """CSV rows for ``n_games`` uneventful games in one season."""
    teams = ["BSN", "PHI", "NYG", "CHN", "PIT", "CIN", "BRO", "SLN"]
    day = start_date or dt.date.fromisoformat(f"{year}-{start}")
    rows = []
    g = 0
    while g < n_games:
        for slot in range(per_day):
            if g >= n_games:
                break
            i = (slot % 4) * 2
            rows.append(
                f"{day.isoformat()},1,{teams[i]},{teams[i + 1]},{runs[0]},{runs[1]}"
            )
            g += 1
        day = day + dt.timedelta(days=1)
    return rows, day


# ---------------------------------------------------------------------------
# Acceptance summary: one PASS/FAIL line per criterion at the end of the run.
# ---------------------------------------------------------------------------

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call":
        _ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and (report.failed or report.skipped):
        _ACCEPTANCE_RESULTS[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        outcome = _ACCEPTANCE_RESULTS[name]
        label = name.removeprefix("test_")
        tr.write_line(f"{outcome}  {label}")

import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slugfest.errors import DuplicateRecordError, FormatError
from slugfest.ingest import (
    HEADER,
    parse_game_log,
    records_to_csv,
    validate_schedule,
)

GOOD = """\
date,day_game_ordinal,home_team,away_team,home_runs,away_runs
1912-06-05,1,BSN,PHI,21,5
1912-06-05,2,BSN,PHI,3,4
1912-06-06,1,NYG,CHN,2,0
"""


def test_parse_round_trip():
    log = parse_game_log(io.StringIO(GOOD))
    assert len(log) == 3
    assert not log.diagnostics
    assert records_to_csv(log.records) == GOOD


def test_parse_sorts_by_date_then_ordinal():
    shuffled = HEADER + "\n" + "\n".join(
        [
            "1912-06-06,1,NYG,CHN,2,0",
            "1912-06-05,2,BSN,PHI,3,4",
            "1912-06-05,1,BSN,PHI,21,5",
        ]
    ) + "\n"
    log = parse_game_log(io.StringIO(shuffled))
    assert records_to_csv(log.records) == GOOD


def test_parse_rejects_missing_header():
    with pytest.raises(FormatError):
        parse_game_log(io.StringIO("1912-06-05,1,BSN,PHI,21,5\n"))


def test_parse_rejects_unknown_format():
    with pytest.raises(ValueError):
        parse_game_log(io.StringIO(GOOD), format="tsv")


def test_parse_skips_blank_lines():
    log = parse_game_log(io.StringIO(GOOD.replace("1912-06-06", "\n1912-06-06")))
    assert len(log) == 3


def test_malformed_rows_become_diagnostics():
    bad = GOOD + "1912-06-07,x,NYG,CHN,2,0\n1912-06-08,1,NYG,CHN,-2,0\nshort,row\n"
    log = parse_game_log(io.StringIO(bad))
    assert len(log) == 3
    assert len(log.diagnostics) == 3
    lines = {d.line_no for d in log.diagnostics}
    assert lines == {5, 6, 7}


def test_duplicate_game_is_an_error():
    dup = GOOD + "1912-06-05,1,PHI,BSN,4,4\n"  # same pairing, date, ordinal
    with pytest.raises(DuplicateRecordError) as ei:
        parse_game_log(io.StringIO(dup))
    assert "line" in str(ei.value)


def test_doubleheader_is_not_a_duplicate():
    log = parse_game_log(io.StringIO(GOOD))  # ordinals 1 and 2 same pairing
    assert len(log) == 3


def test_validate_schedule_counts_per_season():
    log = parse_game_log(io.StringIO(GOOD))
    report = validate_schedule(log.records)
    assert report.season_totals == ((1912, 3),)
    assert report.total_for(1912) == 3
    assert report.total_for(1913) == 0


def test_validate_schedule_flags_team_playing_twice_at_ordinal_one():
    text = HEADER + "\n1912-06-05,1,BSN,PHI,2,1\n1912-06-05,1,BSN,NYG,2,1\n"
    report = validate_schedule(parse_game_log(io.StringIO(text)).records)
    assert any("BSN" in a for a in report.anomalies)


def test_validate_schedule_flags_orphan_second_game():
    text = HEADER + "\n1912-06-05,2,BSN,PHI,2,1\n"
    report = validate_schedule(parse_game_log(io.StringIO(text)).records)
    assert any("ordinal" in a.lower() or "second" in a.lower() for a in report.anomalies)


def test_validate_schedule_flags_gap_seasons():
    text = HEADER + "\n1912-06-05,1,BSN,PHI,2,1\n1914-06-05,1,BSN,PHI,2,1\n"
    report = validate_schedule(parse_game_log(io.StringIO(text)).records)
    assert any("1913" in a for a in report.anomalies)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.dates(min_value=__import__("datetime").date(1901, 4, 1),
                     max_value=__import__("datetime").date(2009, 10, 1)),
            st.sampled_from([1, 2]),
            st.integers(min_value=0, max_value=30),
            st.integers(min_value=0, max_value=30),
        ),
        min_size=1,
        max_size=30,
    )
)
def test_round_trip_is_permutation_invariant(rows):
    """Row order in the file never changes the parsed record list."""
    teams = ["AAA", "BBB", "CCC", "DDD", "EEE", "FFF"]
    seen = set()
    lines = []
    for k, (date, ordinal, hr, ar) in enumerate(rows):
        home, away = teams[k % 3 * 2], teams[k % 3 * 2 + 1]
        key = (date, home, away, ordinal)
        if key in seen:
            continue
        seen.add(key)
        lines.append(f"{date.isoformat()},{ordinal},{home},{away},{hr},{ar}")
    fwd = HEADER + "\n" + "\n".join(lines) + "\n"
    rev = HEADER + "\n" + "\n".join(reversed(lines)) + "\n"
    a = parse_game_log(io.StringIO(fwd))
    b = parse_game_log(io.StringIO(rev))
    assert a.records == b.records
    assert records_to_csv(a.records) == records_to_csv(b.records)

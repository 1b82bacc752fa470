import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from survscore import (
    DataFormatError,
    Subject,
    TrialDataset,
    build_risk_table,
    parse_dataset,
    split_by_arm,
)
from tests.conftest import TOY_CSV

subjects_st = st.lists(
    st.tuples(
        st.floats(min_value=0.1, max_value=50).map(lambda x: round(x, 1)),
        st.integers(0, 1),
        st.integers(0, 1),
    ),
    min_size=1,
    max_size=25,
).map(lambda rows: TrialDataset(tuple(Subject(*r) for r in rows)))


def test_parse_toy():
    ds = parse_dataset(TOY_CSV)
    assert ds.n == 12
    assert ds.n_arm1 == 6
    assert ds.subjects[0] == Subject(34.64, 0, 0)
    assert ds.subjects[1] == Subject(4.38, 0, 1)


def test_parse_single_row():
    ds = parse_dataset("time,arm,event\n5.0,1,1\n")
    assert (ds.n, ds.n_arm1) == (1, 1)


@pytest.mark.parametrize(
    "row, message",
    [
        ("0,0,1", "time must be positive"),
        ("-1,0,1", "time must be positive"),
        ("abc,0,1", "non-numeric time"),
        ("inf,0,1", "non-finite time"),
        ("5.0,2,1", "arm must be 0 or 1"),
        ("5.0,treated,1", "arm must be 0 or 1"),
        ("5.0,0,2", "event must be 0 or 1"),
        ("5.0,0", "expected 3 fields"),
        ("5.0,0,1,9", "expected 3 fields"),
    ],
)
def test_parse_bad_rows(row, message):
    with pytest.raises(DataFormatError, match=message) as exc:
        parse_dataset(f"time,arm,event\n1.0,0,1\n{row}\n")
    assert "line 3" in str(exc.value)


def test_parse_bad_header_and_empty():
    with pytest.raises(DataFormatError, match="header"):
        parse_dataset("t,a,e\n1,0,1\n")
    with pytest.raises(DataFormatError, match="empty input"):
        parse_dataset("")
    with pytest.raises(DataFormatError, match="no data rows"):
        parse_dataset("time,arm,event\n")


def test_subject_validation():
    with pytest.raises(ValueError):
        Subject(0.0, 0, 1)
    with pytest.raises(ValueError):
        Subject(1.0, 2, 1)
    with pytest.raises(ValueError):
        Subject(1.0, 0, -1)


def test_risk_table_toy():
    rt = build_risk_table(parse_dataset(TOY_CSV))
    assert len(rt.rows) == 7
    first, last = rt.rows[0], rt.rows[-1]
    assert (first.time, first.n, first.d) == (4.38, 12, 1)
    assert (last.time, last.n, last.d) == (24.98, 6, 1)
    # every subject accounted for: 7 events plus 5 interval-censored
    assert sum(r.d for r in rt.rows) == 7
    assert sum(sum(r.censored_after) for r in rt.rows) == 5
    assert rt.censored_before_first == (0, 0)


def test_risk_table_tied_events_collapse():
    ds = TrialDataset((Subject(1.0, 0, 1), Subject(1.0, 1, 1)))
    rt = build_risk_table(ds)
    assert len(rt.rows) == 1
    assert rt.rows[0].n == 2
    assert rt.rows[0].d == 2


def test_risk_table_censored_at_event_time_stays_at_risk():
    ds = TrialDataset((Subject(2.0, 0, 1), Subject(2.0, 1, 0), Subject(3.0, 1, 1)))
    rt = build_risk_table(ds)
    assert rt.rows[0].at_risk == (1, 2)  # the censored subject counts at t=2
    assert rt.rows[0].censored_after == (0, 1)
    assert rt.rows[1].at_risk == (0, 1)


def test_risk_table_no_events():
    with pytest.raises(ValueError, match="no event times"):
        build_risk_table(TrialDataset((Subject(1.0, 0, 0),)))


def test_split_by_arm_toy():
    arm0, arm1 = split_by_arm(parse_dataset(TOY_CSV))
    assert (arm0.n, arm1.n) == (6, 6)
    assert all(s.arm == 0 for s in arm0.subjects)
    assert all(s.arm == 1 for s in arm1.subjects)


def test_split_single_arm_gives_empty_subset():
    ds = TrialDataset((Subject(1.0, 0, 1), Subject(2.0, 0, 0)))
    arm0, arm1 = split_by_arm(ds)
    assert arm0.n == 2
    assert arm1.n == 0


@given(subjects_st)
@settings(max_examples=60, deadline=None)
def test_split_is_a_partition(ds):
    arm0, arm1 = split_by_arm(ds)
    assert sorted(arm0.subjects + arm1.subjects, key=lambda s: (s.time, s.arm, s.event)) == sorted(
        ds.subjects, key=lambda s: (s.time, s.arm, s.event)
    )


@given(subjects_st)
@settings(max_examples=60, deadline=None)
def test_conservation_of_subjects(ds):
    if ds.n_events == 0:
        with pytest.raises(ValueError):
            build_risk_table(ds)
        return
    rt = build_risk_table(ds)
    for arm in (0, 1):
        accounted = sum(r.events[arm] for r in rt.rows)
        accounted += sum(r.censored_after[arm] for r in rt.rows)
        accounted += rt.censored_before_first[arm]
        assert accounted == sum(1 for s in ds.subjects if s.arm == arm)


@given(subjects_st)
@settings(max_examples=60, deadline=None)
def test_at_risk_counts_match_definition(ds):
    if ds.n_events == 0:
        return
    rt = build_risk_table(ds)
    for row in rt.rows:
        for arm in (0, 1):
            expected = sum(1 for s in ds.subjects if s.arm == arm and s.time >= row.time)
            assert row.at_risk[arm] == expected
        # at-risk recursion between consecutive rows
    for cur, nxt in zip(rt.rows, rt.rows[1:]):
        for arm in (0, 1):
            assert nxt.at_risk[arm] == (
                cur.at_risk[arm] - cur.events[arm] - cur.censored_after[arm]
            )


@given(subjects_st, st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_risk_table_invariant_under_row_permutation(ds, rnd):
    if ds.n_events == 0:
        return
    shuffled = list(ds.subjects)
    rnd.shuffle(shuffled)
    a = build_risk_table(ds)
    b = build_risk_table(TrialDataset(tuple(shuffled)))
    assert a.rows == b.rows
    assert a.censored_before_first == b.censored_before_first

"""Two-arm right-censored trial data: CSV ingestion, validation, risk table."""

import csv
import io
import math
from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass

CSV_HEADER = ("time", "arm", "event")


class DataFormatError(ValueError):
    """Input CSV does not satisfy the documented layout."""


@dataclass(frozen=True)
class Subject:
    """One trial participant: follow-up time (months), arm 0/1, event 0/1."""

    time: float
    arm: int
    event: int

    def __post_init__(self):
        if not (isinstance(self.time, (int, float)) and math.isfinite(self.time)):
            raise ValueError(f"time must be a finite number, got {self.time!r}")
        if self.time <= 0:
            raise ValueError(f"time must be positive, got {self.time!r}")
        if self.arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {self.arm!r}")
        if self.event not in (0, 1):
            raise ValueError(f"event must be 0 or 1, got {self.event!r}")


@dataclass(frozen=True)
class TrialDataset:
    """Ordered collection of subjects. Immutable; order is meaningful."""

    subjects: tuple[Subject, ...]

    def __post_init__(self):
        object.__setattr__(self, "subjects", tuple(self.subjects))

    @property
    def n(self) -> int:
        return len(self.subjects)

    @property
    def n_arm1(self) -> int:
        return sum(s.arm for s in self.subjects)

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(s.time for s in self.subjects)

    @property
    def arms(self) -> tuple[int, ...]:
        return tuple(s.arm for s in self.subjects)

    @property
    def events(self) -> tuple[int, ...]:
        return tuple(s.event for s in self.subjects)

    @property
    def n_events(self) -> int:
        return sum(s.event for s in self.subjects)

    @property
    def follow_up(self) -> float:
        """Largest observed time (event or censoring)."""
        if not self.subjects:
            raise ValueError("empty dataset has no follow-up")
        return max(s.time for s in self.subjects)

    def without(self, k: int) -> "TrialDataset":
        """Copy with subject ``k`` removed (0-based index)."""
        if not 0 <= k < self.n:
            raise IndexError(f"subject index {k} out of range")
        return TrialDataset(self.subjects[:k] + self.subjects[k + 1 :])

    def subset(self, indices) -> "TrialDataset":
        return TrialDataset(tuple(self.subjects[i] for i in indices))

    def require_two_arms(self):
        n1 = self.n_arm1
        if not 1 <= n1 <= self.n - 1:
            raise ValueError("two-sample operation needs subjects on both arms")


@dataclass(frozen=True)
class RiskRow:
    """Counts at one distinct event time.

    ``at_risk`` counts subjects with time >= this row's time, so a subject
    censored exactly here is still in the risk set (and censored in the
    half-open interval starting here).
    """

    time: float
    at_risk: tuple[int, int]  # per arm, just prior to this time
    events: tuple[int, int]  # per arm, at this time
    censored_after: tuple[int, int]  # per arm, in [time, next event time)

    @property
    def n(self) -> int:
        return self.at_risk[0] + self.at_risk[1]

    @property
    def d(self) -> int:
        return self.events[0] + self.events[1]


@dataclass(frozen=True)
class RiskTable:
    """Distinct event times in ascending order, with per-arm counts.

    ``source`` keeps the generating dataset so per-subject quantities
    (scores, pseudo-values) can be broadcast back in dataset order.
    """

    rows: tuple[RiskRow, ...]
    censored_before_first: tuple[int, int]  # per arm, strictly before row 0
    source: TrialDataset

    @property
    def event_times(self) -> tuple[float, ...]:
        return tuple(r.time for r in self.rows)

    def interval_index(self, time: float) -> int:
        """Number of distinct event times <= ``time`` (0 = before the first)."""
        return bisect_right(self.event_times, time)


def parse_dataset(text: str) -> TrialDataset:
    """Parse CSV content with header ``time,arm,event`` into a dataset.

    Raises DataFormatError naming the offending 1-based line on any
    malformed row; arm and event labels other than 0/1 are rejected,
    never remapped.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("empty input: expected header 'time,arm,event'") from None
    if [h.strip() for h in header] != list(CSV_HEADER):
        raise DataFormatError(
            f"line 1: header must be 'time,arm,event', got {','.join(header)!r}"
        )
    subjects = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue  # tolerate a trailing blank line
        if len(row) != 3:
            raise DataFormatError(f"line {lineno}: expected 3 fields, got {len(row)}")
        raw_time, raw_arm, raw_event = (field.strip() for field in row)
        try:
            time = float(raw_time)
        except ValueError:
            raise DataFormatError(f"line {lineno}: non-numeric time {raw_time!r}") from None
        if not math.isfinite(time):
            raise DataFormatError(f"line {lineno}: non-finite time {raw_time!r}")
        if time <= 0:
            raise DataFormatError(f"line {lineno}: time must be positive, got {raw_time}")
        if raw_arm not in ("0", "1"):
            raise DataFormatError(f"line {lineno}: arm must be 0 or 1, got {raw_arm!r}")
        if raw_event not in ("0", "1"):
            raise DataFormatError(f"line {lineno}: event must be 0 or 1, got {raw_event!r}")
        subjects.append(Subject(time, int(raw_arm), int(raw_event)))
    if not subjects:
        raise DataFormatError("no data rows after the header")
    return TrialDataset(tuple(subjects))


def build_risk_table(ds: TrialDataset) -> RiskTable:
    """Scan the ordered distinct event times and tabulate per-arm counts."""
    event_times = sorted({s.time for s in ds.subjects if s.event == 1})
    if not event_times:
        raise ValueError("no event times: dataset contains only censored subjects")

    arm_times = (
        sorted(s.time for s in ds.subjects if s.arm == 0),
        sorted(s.time for s in ds.subjects if s.arm == 1),
    )
    event_counts = Counter((s.arm, s.time) for s in ds.subjects if s.event == 1)

    # Interval index of each censored subject: j means [t_j, t_{j+1}), 0 means
    # strictly before the first event time.
    censored_in = [Counter(), Counter()]
    for s in ds.subjects:
        if s.event == 0:
            censored_in[s.arm][bisect_right(event_times, s.time)] += 1

    rows = []
    for j, t in enumerate(event_times, start=1):
        at_risk = tuple(len(ts) - bisect_left(ts, t) for ts in arm_times)
        events = (event_counts.get((0, t), 0), event_counts.get((1, t), 0))
        censored = (censored_in[0].get(j, 0), censored_in[1].get(j, 0))
        rows.append(RiskRow(t, at_risk, events, censored))

    before_first = (censored_in[0].get(0, 0), censored_in[1].get(0, 0))
    return RiskTable(tuple(rows), before_first, ds)


def split_by_arm(ds: TrialDataset) -> tuple[TrialDataset, TrialDataset]:
    """Control-arm and experimental-arm subsets, each preserving order."""
    arm0 = tuple(s for s in ds.subjects if s.arm == 0)
    arm1 = tuple(s for s in ds.subjects if s.arm == 1)
    return TrialDataset(arm0), TrialDataset(arm1)

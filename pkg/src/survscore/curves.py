"""Survival-curve estimators and exact restricted-mean integration.

Two curve families: the Kaplan-Meier step function and constant/piecewise
constant-hazard fits.  All integrals use exact piecewise closed forms (no
quadrature), so repeated evaluation is reproducible to rounding error.
"""

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .dataset import TrialDataset, build_risk_table


@dataclass(frozen=True)
class StepSurvival:
    """Right-continuous step survival curve: S(t) = 1 before the first jump.

    ``follow_up`` is the last observed time of the generating data; the
    curve is undefined beyond it for integration purposes.
    """

    jump_times: tuple[float, ...]
    values: tuple[float, ...]  # survival just after each jump
    follow_up: float

    def __post_init__(self):
        if len(self.jump_times) != len(self.values):
            raise ValueError("jump_times and values must have equal length")
        if any(b <= a for a, b in zip(self.jump_times, self.jump_times[1:])):
            raise ValueError("jump times must be strictly ascending")
        prev = 1.0
        for v in self.values:
            if not 0.0 <= v <= prev:
                raise ValueError("survival values must be nonincreasing within [0, 1]")
            prev = v
        if self.jump_times and self.follow_up < self.jump_times[-1]:
            raise ValueError("follow_up precedes the last jump")

    def at(self, t: float) -> float:
        """S(t), right-continuous."""
        idx = bisect_right(self.jump_times, t)
        return 1.0 if idx == 0 else self.values[idx - 1]

    def left(self, t: float) -> float:
        """S(t-), the left limit."""
        idx = bisect_left(self.jump_times, t)
        return 1.0 if idx == 0 else self.values[idx - 1]


@dataclass(frozen=True)
class ParametricSurvival:
    """Constant-hazard survival, optionally piecewise over breakpoints.

    S(t) = exp(-H(t)) with H piecewise linear; continuous, S(0) = 1, and
    defined for every t >= 0 (extrapolates by construction).
    """

    breakpoints: tuple[float, ...]  # strictly ascending, all > 0; may be empty
    rates: tuple[float, ...]  # one per interval, len(breakpoints) + 1

    def __post_init__(self):
        if len(self.rates) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one rate per interval")
        if any(c <= 0 for c in self.breakpoints):
            raise ValueError("breakpoints must be positive")
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly ascending")
        if any(r < 0 or not math.isfinite(r) for r in self.rates):
            raise ValueError("rates must be finite and nonnegative")

    @property
    def kind(self) -> str:
        return "exponential" if not self.breakpoints else "piecewise-exponential"

    def cumulative_hazard(self, t: float) -> float:
        if t < 0:
            raise ValueError("time must be nonnegative")
        total = 0.0
        start = 0.0
        for cut, rate in zip(self.breakpoints, self.rates):
            if t <= cut:
                return total + rate * (t - start)
            total += rate * (cut - start)
            start = cut
        return total + self.rates[-1] * (t - start)

    def at(self, t: float) -> float:
        return math.exp(-self.cumulative_hazard(t))

    def left(self, t: float) -> float:
        return self.at(t)  # continuous


SurvivalCurve = StepSurvival | ParametricSurvival


def surv_at(curve: SurvivalCurve, t: float) -> float:
    """S(t), right-continuous."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return curve.at(t)


def surv_left(curve: SurvivalCurve, t: float) -> float:
    """S(t-), the left limit."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return curve.left(t)


def km_fit(ds: TrialDataset) -> StepSurvival:
    """Product-limit estimate over the dataset's risk table."""
    rt = build_risk_table(ds)  # raises when there are no events
    jumps, values = [], []
    surv = 1.0
    for row in rt.rows:
        surv *= 1.0 - row.d / row.n
        jumps.append(row.time)
        values.append(surv)
    return StepSurvival(tuple(jumps), tuple(values), ds.follow_up)


def km_loo(ds: TrialDataset, k: int) -> StepSurvival:
    """Kaplan-Meier refit with subject ``k`` removed.

    Kept as a plain refit on purpose: anything cleverer must match this
    result to 1e-12, so there is nothing to gain at these sample sizes.
    """
    if ds.n < 2:
        raise ValueError("leave-one-out needs at least 2 subjects")
    reduced = ds.without(k)
    if reduced.n_events == 0:
        raise ValueError(f"degenerate leave-one-out: removing subject {k} leaves no events")
    return km_fit(reduced)


def rmst(curve: SurvivalCurve, tau: float) -> float:
    """Exact integral of the survival curve over [0, tau].

    Step curves refuse tau beyond the generating data's follow-up rather
    than extrapolating; parametric curves integrate any horizon.
    """
    if tau < 0:
        raise ValueError("restriction time must be nonnegative")
    if tau == 0:
        return 0.0
    if isinstance(curve, StepSurvival):
        if tau > curve.follow_up:
            raise ValueError(
                f"restriction time beyond data: tau={tau:g} exceeds follow-up "
                f"{curve.follow_up:g}"
            )
        total = 0.0
        prev_t, surv = 0.0, 1.0
        for t, v in zip(curve.jump_times, curve.values):
            if t >= tau:
                break
            total += surv * (t - prev_t)
            prev_t, surv = t, v
        return total + surv * (tau - prev_t)
    return _rmst_parametric(curve, tau)


def _rmst_parametric(curve: ParametricSurvival, tau: float) -> float:
    total = 0.0
    surv = 1.0
    start = 0.0
    boundaries = curve.breakpoints + (math.inf,)
    for cut, rate in zip(boundaries, curve.rates):
        end = min(cut, tau)
        if end > start:
            dt = end - start
            if rate == 0.0:
                total += surv * dt
            else:
                total += surv * (1.0 - math.exp(-rate * dt)) / rate
                surv *= math.exp(-rate * dt)
        if cut >= tau:
            break
        start = cut
    return total


def fit_exponential(ds: TrialDataset) -> ParametricSurvival:
    """Constant-hazard MLE: events divided by total observed time."""
    if ds.n == 0:
        raise ValueError("cannot fit an empty dataset")
    total_time = sum(s.time for s in ds.subjects)
    return ParametricSurvival((), (ds.n_events / total_time,))


def fit_piecewise_exponential(ds: TrialDataset, breakpoints) -> ParametricSurvival:
    """Per-interval constant-hazard MLE over right-closed intervals.

    A subject contributes min(time, interval end) - interval start of
    person-time to every interval it enters; an event belongs to the
    interval containing its time.  Zero person-time gives rate 0.
    """
    if ds.n == 0:
        raise ValueError("cannot fit an empty dataset")
    cuts = tuple(float(c) for c in breakpoints)
    if any(c <= 0 for c in cuts) or any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ValueError("breakpoints must be positive and strictly ascending")
    n_intervals = len(cuts) + 1
    person_time = [0.0] * n_intervals
    events = [0] * n_intervals
    bounds = cuts + (math.inf,)
    for s in ds.subjects:
        start = 0.0
        for b, end in enumerate(bounds):
            if s.time > start:
                person_time[b] += min(s.time, end) - start
            if start < s.time <= end:
                events[b] += s.event
            start = end
    rates = tuple(
        events[b] / person_time[b] if person_time[b] > 0 else 0.0
        for b in range(n_intervals)
    )
    return ParametricSurvival(cuts, rates)

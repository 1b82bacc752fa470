"""Weighted log-rank tests and their per-subject score decomposition.

The statistic is a weighted sum of observed-minus-expected events over the
distinct event times; equivalently a sum of per-subject scores over the
experimental arm.  Scores rescaled onto [-1, 1] make different weight
choices directly comparable, and permutation moments give the matching
randomization variance.
"""

import math
from dataclasses import dataclass, replace

from .curves import StepSurvival, km_fit
from .dataset import RiskTable, TrialDataset, build_risk_table

WEIGHT_KINDS = ("logrank", "fleming_harrington", "modest")


@dataclass(frozen=True)
class WeightSpec:
    """Which event-time weight function to use.

    logrank: w = 1.  fleming_harrington: w = S(t-)^rho * (1 - S(t-))^gamma
    with 0^0 taken as 1.  modest: w = 1 / max(S(t-), s_star).
    """

    kind: str
    rho: float = 0.0
    gamma: float = 0.0
    s_star: float = 1.0

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "fleming_harrington":
            for name, value in (("rho", self.rho), ("gamma", self.gamma)):
                if not (math.isfinite(value) and value >= 0):
                    raise ValueError(f"{name} must be finite and nonnegative")
        if self.kind == "modest" and not 0.0 < self.s_star <= 1.0:
            raise ValueError("s_star must lie in (0, 1]")

    @classmethod
    def logrank(cls) -> "WeightSpec":
        return cls("logrank")

    @classmethod
    def fleming_harrington(cls, rho: float, gamma: float) -> "WeightSpec":
        return cls("fleming_harrington", rho=rho, gamma=gamma)

    @classmethod
    def modest(cls, s_star: float) -> "WeightSpec":
        return cls("modest", s_star=s_star)

    def describe(self) -> str:
        if self.kind == "logrank":
            return "log-rank"
        if self.kind == "fleming_harrington":
            return f"Fleming-Harrington({self.rho:g},{self.gamma:g})"
        return f"modest(s*={self.s_star:g})"


@dataclass(frozen=True)
class ScoreSet:
    """Per-subject raw scores in dataset order, plus the rescaling onto [-1, 1].

    ``scaled`` and the affine coefficients are filled by standardize();
    scale > 0, so subject ordering is preserved.
    """

    source: TrialDataset
    spec: WeightSpec | None
    weights: tuple[float, ...]  # one per distinct event time
    raw: tuple[float, ...]  # one per subject
    scaled: tuple[float, ...] | None = None
    scale: float | None = None
    offset: float | None = None

    @property
    def arm1_sum(self) -> float:
        """Sum of raw scores on arm 1 == the weighted log-rank statistic."""
        return sum(a for a, s in zip(self.raw, self.source.subjects) if s.arm == 1)


@dataclass(frozen=True)
class TestResult:
    """A test outcome: statistic, variance, z, and a one-sided p-value.

    The p-value is oriented so that benefit on arm 1 gives small p; the
    descriptor says which test produced it.  ``per_subject`` carries the
    ScoreSet or PseudoSet behind the statistic for plotting.
    """

    method: str
    statistic: float
    variance: float
    z: float
    p_one_sided: float
    warnings: tuple[str, ...] = ()
    per_subject: object | None = None


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def z_value(statistic: float, variance: float) -> float:
    """statistic / sqrt(variance), with the 0/0 case pinned to 0."""
    if variance > 0:
        return statistic / math.sqrt(variance)
    if statistic == 0:
        return 0.0
    return math.copysign(math.inf, statistic)


def _pow_00_is_1(base: float, exponent: float) -> float:
    return 1.0 if exponent == 0.0 else base**exponent


def compute_weights(rt: RiskTable, pooled: StepSurvival, spec: WeightSpec) -> tuple[float, ...]:
    """Weight at each distinct event time, from the pooled-sample curve."""
    if spec.kind == "logrank":
        return (1.0,) * len(rt.rows)
    left = [pooled.left(row.time) for row in rt.rows]
    if spec.kind == "fleming_harrington":
        return tuple(
            _pow_00_is_1(s, spec.rho) * _pow_00_is_1(1.0 - s, spec.gamma) for s in left
        )
    return tuple(1.0 / max(s, spec.s_star) for s in left)


def u_and_v(rt: RiskTable, weights) -> tuple[float, float]:
    """Observed-minus-expected statistic and its hypergeometric variance.

    The variance term at a row with a single subject at risk is 0 (the
    row carries no between-arm information).
    """
    if len(weights) != len(rt.rows):
        raise ValueError("need one weight per distinct event time")
    u = 0.0
    v = 0.0
    for w, row in zip(weights, rt.rows):
        n, d = row.n, row.d
        u += w * (row.events[1] - d * row.at_risk[1] / n)
        if n > 1:
            v += w * w * row.at_risk[0] * row.at_risk[1] * d * (n - d) / (n * n * (n - 1))
    return u, v


def compute_scores(rt: RiskTable, weights, spec: WeightSpec | None = None) -> ScoreSet:
    """Raw per-subject scores whose arm-1 sum equals the test statistic.

    Event at the j-th event time: a = w_j - sum_{i<=j} w_i d_i / n_i.
    Censored in [t_j, t_{j+1}): a = -sum_{i<=j} w_i d_i / n_i, which is
    the empty sum 0 for subjects censored before the first event time.
    """
    if len(weights) != len(rt.rows):
        raise ValueError("need one weight per distinct event time")
    cum = []
    running = 0.0
    for w, row in zip(weights, rt.rows):
        running += w * row.d / row.n
        cum.append(running)
    event_index = {row.time: j for j, row in enumerate(rt.rows)}

    raw = []
    for s in rt.source.subjects:
        if s.event == 1:
            j = event_index[s.time]
            raw.append(weights[j] - cum[j])
        else:
            j = rt.interval_index(s.time)
            raw.append(0.0 if j == 0 else -cum[j - 1])
    return ScoreSet(rt.source, spec, tuple(weights), tuple(raw))


def standardize(scores: ScoreSet) -> ScoreSet:
    """Affine map of raw scores onto [-1, 1], attaining both endpoints."""
    hi, lo = max(scores.raw), min(scores.raw)
    if hi == lo:
        raise ValueError("degenerate score range: all scores equal")
    scale = 2.0 / (hi - lo)
    offset = 1.0 - scale * hi
    scaled = tuple(scale * a + offset for a in scores.raw)
    return replace(scores, scaled=scaled, scale=scale, offset=offset)


def perm_moments(values, n_arm1: int) -> tuple[float, float]:
    """Permutation variance of the arm-1 sum and of the mean difference.

    Values are centered before the sum of squares, which matters for
    pseudo-values (scores already sum to zero).
    """
    n = len(values)
    if n < 2:
        raise ValueError("permutation moments need at least 2 subjects")
    if not 1 <= n_arm1 <= n - 1:
        raise ValueError("arm-1 count must leave both arms nonempty")
    mean = sum(values) / n
    ssq = sum((v - mean) ** 2 for v in values)
    var_sum = n_arm1 * (n - n_arm1) / (n * (n - 1)) * ssq
    factor = 1.0 / n_arm1 + 1.0 / (n - n_arm1)
    return var_sum, factor * factor * var_sum


def mean_score_diff(values, arms) -> float:
    """Mean over arm 1 minus mean over arm 0."""
    if len(values) != len(arms):
        raise ValueError("values and arms must have equal length")
    ones = [v for v, a in zip(values, arms) if a == 1]
    zeros = [v for v, a in zip(values, arms) if a == 0]
    if not ones or not zeros:
        raise ValueError("mean difference needs subjects on both arms")
    return sum(ones) / len(ones) - sum(zeros) / len(zeros)


def wlrt_test(ds: TrialDataset, spec: WeightSpec) -> TestResult:
    """Weighted log-rank test; negative statistic favors arm 1.

    The attached ScoreSet is already standardized for plotting.
    """
    ds.require_two_arms()
    rt = build_risk_table(ds)
    pooled = km_fit(ds)
    weights = compute_weights(rt, pooled, spec)
    u, v = u_and_v(rt, weights)
    scores = standardize(compute_scores(rt, weights, spec))
    z = z_value(u, v)
    return TestResult(
        method=spec.describe(),
        statistic=u,
        variance=v,
        z=z,
        p_one_sided=normal_cdf(z),
        per_subject=scores,
    )

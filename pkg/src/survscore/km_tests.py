"""Closed-form Kaplan-Meier tests: RMST difference and milestone survival.

Both compare the per-arm product-limit curves directly, with Greenwood-type
variances.  A variance term at an event time where everyone at risk dies
divides by zero; such terms are dropped and a warning is attached.
"""

from .curves import km_fit, rmst
from .dataset import TrialDataset, build_risk_table, split_by_arm
from .logrank import TestResult, normal_cdf, z_value


def _arm_fits(ds: TrialDataset, horizon: float, what: str):
    ds.require_two_arms()
    arm0, arm1 = split_by_arm(ds)
    curves = []
    for label, sub in (("arm 0", arm0), ("arm 1", arm1)):
        curve = km_fit(sub)
        if horizon > curve.follow_up:
            raise ValueError(
                f"{what} {horizon:g} beyond follow-up {curve.follow_up:g} on {label}"
            )
        curves.append((sub, curve))
    return curves


def _integrals_from(curve, event_times, tau):
    """integral of the curve from each event time (<= tau) up to tau.

    One sweep over the step representation; event times past tau map to 0.
    """
    total = rmst(curve, tau)
    out = []
    cum = 0.0  # integral of the curve over [0, t)
    prev_t, surv = 0.0, 1.0
    jumps = list(zip(curve.jump_times, curve.values))
    pos = 0
    for t in event_times:
        if t > tau:
            out.append(0.0)
            continue
        while pos < len(jumps) and jumps[pos][0] <= t:
            jt, jv = jumps[pos]
            cum += surv * (jt - prev_t)
            prev_t, surv = jt, jv
            pos += 1
        out.append(total - (cum + surv * (t - prev_t)))
    return out


def rmst_test(ds: TrialDataset, tau: float) -> TestResult:
    """Difference in restricted mean survival up to tau, arm 1 minus arm 0."""
    if tau <= 0:
        raise ValueError("restriction time must be positive")
    fits = _arm_fits(ds, tau, "restriction time")
    estimates = [rmst(curve, tau) for _, curve in fits]
    statistic = estimates[1] - estimates[0]

    variance = 0.0
    warnings = []
    for (sub, curve), label in zip(fits, ("arm 0", "arm 1")):
        rows = build_risk_table(sub).rows
        tail = _integrals_from(curve, [r.time for r in rows], tau)
        for row, integral in zip(rows, tail):
            if row.time > tau:
                continue
            n, d = row.n, row.d
            if n == d:
                warnings.append(
                    f"variance term at t={row.time:g} on {label} dropped: "
                    "all subjects at risk had events"
                )
                continue
            if integral != 0.0:
                variance += integral * integral * d / (n * (n - d))

    z = z_value(statistic, variance)
    return TestResult(
        method=f"RMST({tau:g}) difference [KM]",
        statistic=statistic,
        variance=variance,
        z=z,
        p_one_sided=normal_cdf(-z),
        warnings=tuple(warnings),
    )


def milestone_test(ds: TrialDataset, kappa: float) -> TestResult:
    """Difference in survival probability at time kappa, arm 1 minus arm 0."""
    if kappa <= 0:
        raise ValueError("milestone time must be positive")
    fits = _arm_fits(ds, kappa, "milestone time")
    survivals = [curve.at(kappa) for _, curve in fits]
    statistic = survivals[1] - survivals[0]

    variance = 0.0
    warnings = []
    for (sub, curve), surv_k, label in zip(fits, survivals, ("arm 0", "arm 1")):
        factor = surv_k * surv_k
        for row in build_risk_table(sub).rows:
            if row.time > kappa:
                continue
            n, d = row.n, row.d
            if n == d:
                warnings.append(
                    f"variance term at t={row.time:g} on {label} dropped: "
                    "all subjects at risk had events"
                )
                continue
            if factor != 0.0:
                variance += factor * d / (n * (n - d))

    z = z_value(statistic, variance)
    return TestResult(
        method=f"milestone({kappa:g}) difference [KM]",
        statistic=statistic,
        variance=variance,
        z=z,
        p_one_sided=normal_cdf(-z),
        warnings=tuple(warnings),
    )

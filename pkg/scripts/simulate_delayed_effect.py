#!/usr/bin/env python3
"""Simulate a two-arm trial with a delayed treatment effect.

Control events are exponential; the experimental arm shares the control
hazard until the delay, then drops to hazard-ratio times it.  Subjects
enter uniformly over the recruitment window and are censored at the
data cutoff.  Output is the standard time,arm,event CSV.
"""

import argparse
import csv
import math
import sys

from survscore.rng import SplitMix64


def draw_event_time(rng, rate, delay, hazard_ratio):
    target = -math.log(rng.next_uniform())  # cumulative hazard at the event
    if target <= rate * delay:
        return target / rate
    return delay + (target - rate * delay) / (rate * hazard_ratio)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-per-arm", type=int, default=150)
    parser.add_argument("--control-median", type=float, default=8.0,
                        help="median event time on control, months (default: 8)")
    parser.add_argument("--hazard-ratio", type=float, default=0.6,
                        help="post-delay hazard ratio (default: 0.6)")
    parser.add_argument("--delay", type=float, default=3.0,
                        help="months before the effect kicks in (default: 3)")
    parser.add_argument("--recruitment", type=float, default=8.0,
                        help="accrual window, months (default: 8)")
    parser.add_argument("--follow-up", type=float, default=30.0,
                        help="months from study start to data cutoff (default: 30)")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--output", default=None, help="CSV path (default: stdout)")
    args = parser.parse_args(argv)

    if args.follow_up <= args.recruitment:
        parser.error("--follow-up must exceed --recruitment")
    if args.hazard_ratio <= 0:
        parser.error("--hazard-ratio must be positive")

    rate = math.log(2.0) / args.control_median
    rng = SplitMix64(args.seed)
    rows = []
    for arm in (0, 1):
        hr = args.hazard_ratio if arm == 1 else 1.0
        for _ in range(args.n_per_arm):
            event_time = draw_event_time(rng, rate, args.delay, hr)
            cutoff = args.follow_up - args.recruitment * rng.next_uniform()
            time = min(event_time, cutoff)
            rows.append((f"{time:.6g}", arm, 1 if event_time <= cutoff else 0))

    handle = open(args.output, "w", newline="") if args.output else sys.stdout
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["time", "arm", "event"])
    writer.writerows(rows)
    if args.output:
        handle.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

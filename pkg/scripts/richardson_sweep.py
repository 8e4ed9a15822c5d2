#!/usr/bin/env python3
"""Sweep a family of sign-indefinite problems and tabulate its spectral
thresholds.

For each potential level q0 in the requested range the script scans a real
window, extracts the Richardson thresholds (lambda_plus / lambda_minus), the
empirical oscillation-count indices, and the eigenvalue count, and emits one
CSV row.  stdout carries data only; progress goes to stderr.

Examples:
    python3 scripts/richardson_sweep.py --family one_tp --q0-from -25 \
        --q0-to -2 --step 0.5
    python3 scripts/richardson_sweep.py --family two_tp --blocks -1 1 -1 \
        --q0-from -15 --q0-to 0 --step 1 --out sweep.csv
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from slindef import (
    application_problem,
    one_turning_point,
    richardson_numbers,
    two_turning_point,
)
from slindef.errors import SlindefError


@dataclass(frozen=True)
class SweepConfig:
    family: str
    q0_from: float
    q0_to: float
    step: float
    blocks: tuple[float, float, float]
    window_pad: float
    tol: float
    out: str | None


def _build(config: SweepConfig, q0: float):
    if config.family == "one_tp":
        return one_turning_point(q0)
    if config.family == "two_tp":
        a, b, c = config.blocks
        return two_turning_point(a, b, c, q0)
    if config.family == "application":
        return application_problem(q0)
    raise ValueError(f"unknown family {config.family!r}")


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(value)


def run(config: SweepConfig) -> str:
    rows = ["q0,lambda_plus,lambda_minus,n_r,n_h,n_eigenvalues,seconds"]
    q0 = config.q0_from
    while q0 <= config.q0_to + 1e-12:
        lim = abs(q0) + config.window_pad
        t0 = time.monotonic()
        try:
            rep = richardson_numbers(_build(config, q0), (-lim, lim),
                                     config.tol)
        except SlindefError as exc:
            print(f"q0={q0:g}: {exc}", file=sys.stderr)
            q0 += config.step
            continue
        dt = time.monotonic() - t0
        rows.append(",".join([
            repr(q0), _fmt(rep.lambda_plus), _fmt(rep.lambda_minus),
            _fmt(rep.n_r_empirical), _fmt(rep.n_h_empirical),
            str(len(rep.scan.records)),
            f"{dt:.3f}",
        ]))
        print(f"q0={q0:g}: lambda_plus={rep.lambda_plus} "
              f"lambda_minus={rep.lambda_minus} ({dt:.2f}s)", file=sys.stderr)
        q0 += config.step
    return "\n".join(rows) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--family", default="one_tp",
                        choices=["one_tp", "two_tp", "application"])
    parser.add_argument("--q0-from", type=float, default=-25.0)
    parser.add_argument("--q0-to", type=float, default=-2.0)
    parser.add_argument("--step", type=float, default=0.5)
    parser.add_argument("--blocks", type=float, nargs=3,
                        default=(-1.0, 1.0, -1.0),
                        metavar=("A", "B", "C"),
                        help="block weights for the two_tp family")
    parser.add_argument("--window-pad", type=float, default=50.0,
                        help="scan window is [-(|q0|+pad), |q0|+pad]")
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--out", default=None,
                        help="write CSV here instead of stdout")
    args = parser.parse_args(argv)

    config = SweepConfig(family=args.family, q0_from=args.q0_from,
                         q0_to=args.q0_to, step=args.step,
                         blocks=tuple(args.blocks),
                         window_pad=args.window_pad, tol=args.tol,
                         out=args.out)
    csv = run(config)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(csv)
        print(f"wrote {config.out}", file=sys.stderr)
    else:
        sys.stdout.write(csv)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

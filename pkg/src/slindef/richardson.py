"""Weighted norms, spectral asymmetry thresholds, and eigenfunction zero
drift.

For a real eigenvalue ``lambda`` with eigenfunction ``y`` the signed quantity
``int_a^b w y^2 dx`` classifies the eigenvalue as positive, negative, or
neutral type.  The two window thresholds reported here are

* ``lambda_plus``: the largest scanned eigenvalue of nonpositive type (all
  eigenvalues above it in the window have positive type), and
* ``lambda_minus``: the smallest scanned eigenvalue of nonnegative type,

with fallbacks to the extreme scanned eigenvalue when every norm has the
same sign.  Both are reported only when the window provides tail evidence
(at least two eigenvalues of the expected type beyond the threshold);
otherwise the entry is ``None``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .coefficients import ProblemSpec
from .errors import DriftUndefined, EmptyWindowError, InvalidProblemError
from .propagator import (initial_state, norm_kernels, rk45, solution_at,
                         transfer_across)
from .spectrum import (ScanResult, find_real_eigenvalues, interior_zeros,
                       records_to_csv)

__all__ = [
    "weighted_norm",
    "RichardsonReport",
    "richardson_numbers",
    "zero_drift",
    "report_to_dict",
    "report_to_json",
    "report_to_csv",
]


def _require_real(lam: complex | float, what: str) -> float:
    if isinstance(lam, complex):
        if lam.imag != 0.0:
            raise InvalidProblemError(f"{what} requires a real lambda")
        return lam.real
    return float(lam)


def _piece_weighted(piece, lam: float, y0: float, yp0: float,
                    x_hi: float | None = None) -> tuple[float, float, float]:
    """``(contribution, y_end, yp_end)`` of ``int w y^2`` over the piece,
    optionally clipped to ``[x0, x_hi]``."""
    x_hi = piece.x1 if x_hi is None else x_hi
    length = x_hi - piece.x0
    if length <= 0.0:
        return 0.0, y0, yp0
    if piece.has_constant_q:
        z = lam * piece.w + piece.q
        icc, ics, iss = norm_kernels(z, length)
        contrib = piece.w * (y0 * y0 * icc + 2.0 * y0 * yp0 * ics
                             + yp0 * yp0 * iss)
        t = transfer_across(piece, lam, piece.x0, x_hi)
        y1, yp1 = t.apply(y0, yp0)
        return contrib, y1, yp1
    w = piece.w
    q_at = piece.q_at

    def f(x: float, u: tuple) -> tuple:
        y, yp, _ = u
        k2 = lam * w + q_at(x)
        return (yp, -k2 * y, w * y * y)

    stops = [piece.x0]
    for xv, _ in piece.q:  # type: ignore[union-attr]
        if piece.x0 < xv < x_hi:
            stops.append(xv)
    stops.append(x_hi)
    u = (y0, yp0, 0.0)
    for xa, xb in zip(stops, stops[1:]):
        u = rk45(f, xa, xb, u, rtol=1e-11)
    return u[2], u[0], u[1]


def weighted_norm(spec: ProblemSpec, lam: complex | float) -> float:
    """``int_a^b w(x) y(x, lambda)^2 dx`` for the left solution at real
    ``lambda``.  Constant-potential pieces use closed-form kernel integrals
    (entire in ``lambda``); tabulated pieces use the adaptive integrator on
    the augmented system."""
    lam = _require_real(lam, "weighted_norm")
    state = initial_state(spec)
    y, yp = state.y, state.yp
    total = 0.0
    for piece in spec.pieces:
        contrib, y, yp = _piece_weighted(piece, lam, y, yp)
        total += contrib
    return total


def weighted_partial(spec: ProblemSpec, lam: float, x_hi: float) -> float:
    """``int_a^{x_hi} w y^2 dx`` for the left solution."""
    lam = _require_real(lam, "weighted_partial")
    if not (spec.a <= x_hi <= spec.b):
        raise InvalidProblemError(
            f"x_hi={x_hi!r} outside the interval [{spec.a!r}, {spec.b!r}]")
    state = initial_state(spec)
    y, yp = state.y, state.yp
    total = 0.0
    for piece in spec.pieces:
        if piece.x0 >= x_hi:
            break
        clip = min(piece.x1, x_hi)
        contrib, y, yp = _piece_weighted(piece, lam, y, yp, clip)
        total += contrib
    return total


@dataclass(frozen=True)
class RichardsonReport:
    """Window thresholds for the type of scanned eigenvalues."""

    lambda_plus: float | None
    lambda_minus: float | None
    n_r_empirical: int | None
    n_h_empirical: int | None
    scan: ScanResult
    tail_evidence: dict


def richardson_numbers(spec: ProblemSpec, window: tuple[float, float],
                       tol: float = 1e-9) -> RichardsonReport:
    """Scan ``window`` and derive the type thresholds with tail evidence.

    Raises :class:`EmptyWindowError` when the window holds no eigenvalues.
    """
    scan = find_real_eigenvalues(spec, window, tol)
    if not scan.records:
        raise EmptyWindowError(
            f"no eigenvalues found in window {window!r}; widen the window")
    lams = [r.re_lambda for r in scan.records]
    norms = [r.weighted_norm for r in scan.records]

    nonpos = [l for l, n in zip(lams, norms) if n is not None and n <= 0.0]
    nonneg = [l for l, n in zip(lams, norms) if n is not None and n >= 0.0]

    # The threshold is only reported when the window actually witnesses it:
    # a non-positive-norm eigenvalue with at least two positive-norm
    # eigenvalues above it (mirrored for lambda_minus).  A window whose norms
    # are all of one sign brackets no threshold.
    lambda_plus: float | None = None
    if nonpos:
        cand_plus = max(nonpos)
        above = [(l, n) for l, n in zip(lams, norms) if l > cand_plus]
        if len(above) >= 2 and all(n is not None and n > 0.0 for _, n in above):
            lambda_plus = cand_plus

    lambda_minus: float | None = None
    if nonneg:
        cand_minus = min(nonneg)
        below = [(l, n) for l, n in zip(lams, norms) if l < cand_minus]
        if len(below) >= 2 and all(n is not None and n < 0.0 for _, n in below):
            lambda_minus = cand_minus

    pos_above: float | None = None
    for i in range(len(lams)):
        if all(n is not None and n > 0.0 for n in norms[i:]):
            pos_above = lams[i]
            break
    neg_below: float | None = None
    for i in range(len(lams) - 1, -1, -1):
        if all(n is not None and n < 0.0 for n in norms[:i + 1]):
            neg_below = lams[i]
            break
    tail = {
        "lambda_min_checked": lams[0],
        "lambda_max_checked": lams[-1],
        "all_positive_norm_from": pos_above,
        "all_negative_norm_upto": neg_below,
    }
    return RichardsonReport(lambda_plus=lambda_plus, lambda_minus=lambda_minus,
                            n_r_empirical=scan.n_r_empirical,
                            n_h_empirical=scan.n_h_empirical,
                            scan=scan, tail_evidence=tail)


# ---------------------------------------------------------------------------
# Zero drift
# ---------------------------------------------------------------------------

def zero_drift(spec: ProblemSpec, lam: float, zero_index: int,
               h: float | None = None) -> float:
    """Central-difference derivative ``d x_k / d lambda`` of the ``k``-th
    interior zero (1-based) of the left solution.

    Raises :class:`DriftUndefined` when the requested zero does not exist at
    all three stencil points, when its identity is unstable across the
    stencil (the located positions scatter, e.g. because zeros enter or
    leave through ``b``), or when the zero sits numerically on a piece
    breakpoint (the derivative can be one-sided there).
    """
    lam = _require_real(lam, "zero_drift")
    if not isinstance(zero_index, int) or zero_index < 1:
        raise InvalidProblemError(
            f"zero_index must be a positive integer, got {zero_index!r}")
    if h is None:
        h = 1e-5 * max(1.0, abs(lam))
    if not (h > 0.0):
        raise InvalidProblemError(f"h must be positive, got {h!r}")

    z_mid = interior_zeros(spec, lam)
    z_hi = interior_zeros(spec, lam + h)
    z_lo = interior_zeros(spec, lam - h)
    for name, zs in (("lambda", z_mid), ("lambda+h", z_hi), ("lambda-h", z_lo)):
        if len(zs) < zero_index:
            raise DriftUndefined(
                f"zero index {zero_index} exceeds the zero count {len(zs)} at "
                f"{name}")
    xs = (z_lo[zero_index - 1], z_mid[zero_index - 1], z_hi[zero_index - 1])
    if max(xs) - min(xs) > 0.1 * (spec.b - spec.a):
        raise DriftUndefined(
            f"zero {zero_index} moves by {max(xs) - min(xs)!r} across the "
            f"stencil; its identity is not stable at lambda={lam!r}")
    guard = 1e-9 * (spec.b - spec.a)
    interior_bps = spec.coeff.breakpoints[1:-1]
    for x in xs:
        for bp in interior_bps:
            if abs(x - bp) <= guard:
                raise DriftUndefined(
                    f"zero {zero_index} sits on the breakpoint {bp!r} where "
                    f"the coefficients jump; the drift may be one-sided")
    return (xs[2] - xs[0]) / (2.0 * h)


def drift_reference(spec: ProblemSpec, lam: float, zero_index: int) -> float:
    """Implicit-function value ``- int_a^{x*} w y^2 dx / y'(x*)^2`` for the
    same zero; independent of the finite-difference route and useful for
    cross-checking magnitude and the sign law."""
    lam = _require_real(lam, "drift_reference")
    zs = interior_zeros(spec, lam)
    if len(zs) < zero_index or zero_index < 1:
        raise DriftUndefined(
            f"zero index {zero_index} exceeds the zero count {len(zs)}")
    x_star = zs[zero_index - 1]
    num = weighted_partial(spec, lam, x_star)
    yp = solution_at(spec, lam, [x_star])[0].yp
    if yp == 0.0:
        raise DriftUndefined("vanishing derivative at the zero")
    return -num / (yp * yp)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def report_to_dict(report: RichardsonReport) -> dict:
    return {
        "lambda_plus": report.lambda_plus,
        "lambda_minus": report.lambda_minus,
        "n_r_empirical": report.n_r_empirical,
        "n_h_empirical": report.n_h_empirical,
        "tail_evidence": dict(report.tail_evidence),
        "scan": report.scan.to_dict(),
    }


def report_to_json(report: RichardsonReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_to_csv(spec: ProblemSpec, report: RichardsonReport,
                  with_drift: bool = False) -> str:
    """Record rows of the underlying scan; with ``with_drift`` a column with
    the drift of the first interior zero is appended (blank where undefined)."""
    base = records_to_csv(report.scan.records)
    if not with_drift:
        return base
    lines = base.rstrip("\n").split("\n")
    out = [lines[0] + ",drift_zero1"]
    for line, rec in zip(lines[1:], report.scan.records):
        try:
            d = zero_drift(spec, rec.re_lambda, 1)
            out.append(f"{line},{d!r}")
        except (DriftUndefined, InvalidProblemError):
            out.append(line + ",")
    return "\n".join(out) + "\n"

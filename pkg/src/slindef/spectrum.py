"""Eigenvalue location: characteristic function, oscillation counts, real
window scans, and complex rectangle searches.

The characteristic function ``D(lambda)`` is entire in ``lambda``; its zeros
are exactly the eigenvalues.  With an indefinite weight the real scan cannot
rely on eigenvalue interlacing, so it combines three independent signals on a
refinable grid: sign changes of ``D``, jumps of the interior-zero count of the
left solution (with Dirichlet data at ``b`` these jump exactly at
eigenvalues), and dips of ``|D|`` that flag nearly coincident or genuinely
double roots.  Complex eigenvalues are found by argument-principle winding
counts over rectangle boundaries with recursive subdivision and Newton
polishing; conjugation symmetry of returned pairs is enforced exactly for
conjugation-symmetric rectangles.
"""

from __future__ import annotations

import cmath
import json
import logging
import math
import os
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from .coefficients import ProblemSpec
from .errors import (ContourError, InvalidProblemError, NumericalFailure)
from .propagator import (StateVector, breakpoint_states, states_on_grid,
                         transfer_across)

__all__ = [
    "EigenRecord",
    "ScanResult",
    "characteristic",
    "interior_zeros",
    "count_zeros",
    "find_real_eigenvalues",
    "find_complex_eigenvalues",
    "records_to_csv",
    "scan_to_csv",
    "scan_to_dict",
    "scan_to_json",
]

log = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16


# ---------------------------------------------------------------------------
# Characteristic function
# ---------------------------------------------------------------------------

def characteristic_scaled(spec: ProblemSpec, lam: complex | float
                          ) -> tuple[complex | float, float]:
    """``(D(lambda), scale)`` where ``scale`` tracks the size of the solution
    along the interval.  ``|D| / scale`` is the resolution-aware residual:
    values at or below a few hundred ulps of ``scale`` are numerically zero.
    """
    states = breakpoint_states(spec, lam)
    scale = 1.0
    for st in states:
        scale = max(scale, abs(st.y) + abs(st.yp))
    end = states[-1]
    d = end.y * math.cos(spec.beta) + end.yp * math.sin(spec.beta)
    return d, scale


def characteristic(spec: ProblemSpec, lam: complex | float) -> complex | float:
    """Boundary mismatch ``D(lambda)``; zero exactly at eigenvalues."""
    return characteristic_scaled(spec, lam)[0]


# ---------------------------------------------------------------------------
# Interior zeros of the left solution
# ---------------------------------------------------------------------------

def _bisect_zero(f: Callable[[float], float], t0: float, t1: float,
                 f0: float, f1: float, xtol: float) -> float:
    """Plain bisection for a bracketed sign change."""
    while t1 - t0 > xtol:
        tm = 0.5 * (t0 + t1)
        if tm <= t0 or tm >= t1:
            break
        fm = f(tm)
        if fm == 0.0:
            return tm
        if (f0 < 0.0) != (fm < 0.0):
            t1, f1 = tm, fm
        else:
            t0, f0 = tm, fm
    return 0.5 * (t0 + t1)


def interior_zeros(spec: ProblemSpec, lam: float,
                   end_band: float | None = None) -> list[float]:
    """Locations of zeros of the left solution strictly inside ``(a, b)``.

    ``lam`` must be real; on pieces where ``lambda*w + q`` is a positive
    constant the zeros come from the phase representation in closed form, on
    the remaining constant pieces the solution has at most one zero which is
    bracketed and bisected, and tabulated pieces fall back to sign tracking
    on a wavelength-resolving grid.

    ``end_band`` is the exclusion half-width next to ``x = b``.  For
    Dirichlet conditions at ``b`` it defaults to ``1e-6 * (b - a)``: at an
    eigenvalue the boundary zero of the exact eigenfunction sits at ``b``
    itself, but the computed solution displaces it by roughly
    ``|y(b)| / |y'(b)|``, which can be many orders of magnitude above
    resolution when the solution decays through the last piece.  Zeros
    inside the band are treated as that boundary artifact.  For other
    boundary conditions the band defaults to the dedup resolution.
    """
    if isinstance(lam, complex):
        if lam.imag != 0.0:
            raise InvalidProblemError("interior zero counting needs real lambda")
        lam = lam.real
    a, b = spec.a, spec.b
    snap = 1e-12 * (b - a)
    if end_band is None:
        end_band = 1e-6 * (b - a) if spec.beta == 0.0 else snap
    end_band = max(end_band, snap)
    zeros: list[float] = []
    state = StateVector(a, math.sin(spec.alpha), math.cos(spec.alpha))
    n_pieces = len(spec.pieces)
    for pi, piece in enumerate(spec.pieces):
        last = pi == n_pieces - 1
        length = piece.length
        y0, yp0 = state.y, state.yp
        if piece.has_constant_q:
            k2 = lam * piece.w + piece.q  # type: ignore[operator]
            t_end = transfer_across(piece, lam)
            y1, yp1 = t_end.apply(y0, yp0)
            if k2 > 0.0 and math.sqrt(k2) * length > 1e-2:
                # Oscillatory: y(t) = A sin(k t + phi).
                k = math.sqrt(k2)
                phi = math.atan2(y0, yp0 / k)
                s_hi = length - snap if last else length
                m_lo = math.floor((phi + k * snap) / math.pi) + 1
                m_hi = math.floor((phi + k * s_hi) / math.pi)
                for m in range(m_lo, m_hi + 1):
                    zeros.append(piece.x0 + (m * math.pi - phi) / k)
            else:
                # At most one zero on the piece.
                def yval(t: float) -> float:
                    tt = transfer_across(piece, lam, piece.x0, piece.x0 + t)
                    return tt.apply(y0, yp0)[0]

                if y0 == 0.0:
                    ys, ts = math.copysign(1.0, yp0), snap
                else:
                    ys, ts = y0, 0.0
                if y1 == 0.0:
                    if not last:
                        zeros.append(piece.x1)
                elif (ys < 0.0) != (y1 < 0.0):
                    f0 = yval(ts) if ts > 0.0 else ys
                    t_star = _bisect_zero(yval, ts, length, f0, y1,
                                          1e-13 * max(1.0, b - a))
                    zeros.append(piece.x0 + t_star)
            state = StateVector(piece.x1, y1, yp1)
        else:
            vals = [lam * piece.w + qv for (_, qv) in piece.q]  # type: ignore[union-attr]
            kmax = math.sqrt(max(0.0, max(vals)))
            n = max(32, min(200_000, math.ceil(4.0 * kmax * length / math.pi)))
            grid = states_on_grid(piece, lam, state, n)
            for s_prev, s_next in zip(grid, grid[1:]):
                ya, yb = s_prev.y, s_next.y
                if ya == 0.0:
                    if s_prev.x > a + snap:
                        zeros.append(s_prev.x)
                    continue
                if yb == 0.0:
                    continue  # handled as the next cell's left endpoint
                if (ya < 0.0) != (yb < 0.0):
                    base = s_prev

                    def yseg(t: float, base: StateVector = base) -> float:
                        tt = transfer_across(piece, lam, base.x, base.x + t)
                        return tt.apply(base.y, base.yp)[0]

                    t_star = _bisect_zero(yseg, 0.0, s_next.x - s_prev.x,
                                          ya, yb, 1e-13 * max(1.0, b - a))
                    zeros.append(s_prev.x + t_star)
            end_state = grid[-1]
            if end_state.y == 0.0 and not last:
                zeros.append(end_state.x)
            state = StateVector(piece.x1, end_state.y, end_state.yp)
    zeros.sort()
    out: list[float] = []
    for z in zeros:
        if z <= a + snap or z >= b - end_band:
            continue
        if out and z - out[-1] <= snap:
            continue
        out.append(z)
    return out


def count_zeros(spec: ProblemSpec, lam: float) -> int:
    """Number of interior zeros of the left solution at real ``lam``."""
    return len(interior_zeros(spec, lam))


# ---------------------------------------------------------------------------
# Eigenvalue records and scan results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenRecord:
    """One located eigenvalue.  ``zeros_in_ab`` and ``weighted_norm`` are
    populated for real eigenvalues only."""

    re_lambda: float
    im_lambda: float
    zeros_in_ab: int | None
    weighted_norm: float | None
    residual: float

    @property
    def lam(self) -> complex | float:
        if self.im_lambda == 0.0:
            return self.re_lambda
        return complex(self.re_lambda, self.im_lambda)

    @property
    def is_real(self) -> bool:
        return self.im_lambda == 0.0

    def to_dict(self) -> dict:
        return {
            "re_lambda": self.re_lambda,
            "im_lambda": self.im_lambda,
            "zeros": self.zeros_in_ab,
            "weighted_norm": self.weighted_norm,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a real-window scan."""

    window: tuple[float, float]
    tol: float
    records: tuple[EigenRecord, ...]
    n_r_empirical: int | None
    n_h_empirical: int | None
    warnings: tuple[str, ...] = ()

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(r.re_lambda for r in self.records)

    def to_dict(self) -> dict:
        return {
            "window": [self.window[0], self.window[1]],
            "tol": self.tol,
            "n_r_empirical": self.n_r_empirical,
            "n_h_empirical": self.n_h_empirical,
            "warnings": list(self.warnings),
            "eigenvalues": [r.to_dict() for r in self.records],
        }


# ---------------------------------------------------------------------------
# Real scan
# ---------------------------------------------------------------------------

def _refine_bracket(f: Callable[[float], float], x0: float, x1: float,
                    f0: float, f1: float, xtol: float) -> tuple[float, float]:
    """Illinois-damped false position on a sign-changing bracket.  Returns
    the endpoint with the smaller ``|f|`` once the bracket is ``<= xtol``."""
    g0, g1 = f0, f1
    side = 0
    for _ in range(200):
        if x1 - x0 <= xtol:
            break
        denom = g1 - g0
        if denom == 0.0:
            xm = 0.5 * (x0 + x1)
        else:
            xm = x1 - g1 * (x1 - x0) / denom
            lo_guard = x0 + 0.01 * (x1 - x0)
            hi_guard = x1 - 0.01 * (x1 - x0)
            if not (lo_guard <= xm <= hi_guard):
                xm = 0.5 * (x0 + x1)
        gm = f(xm)
        if gm == 0.0:
            return xm, 0.0
        if (gm < 0.0) != (g1 < 0.0):
            x0, g0 = x1, g1
            x1, g1 = xm, gm
            side = 0
        else:
            x1, g1 = xm, gm
            if side == 1:
                g0 *= 0.5
            side = 1
    return (x0, g0) if abs(g0) <= abs(g1) else (x1, g1)


def _newton_polish(spec: ProblemSpec, lam: float, tol: float
                   ) -> tuple[float, float]:
    """Drive a real root of ``D`` to the floating-point floor.  Returns the
    best ``(lambda, |D|)`` visited."""
    best_lam, best_res = lam, float("inf")
    x = lam
    for _ in range(40):
        d, scale = characteristic_scaled(spec, x)
        res = abs(d)
        if res < best_res:
            best_lam, best_res = x, res
        if res <= 32.0 * _EPS * scale:
            break
        h = 1.5e-8 * max(1.0, abs(x))
        dp = (characteristic(spec, x + h) - characteristic(spec, x - h)) / (2.0 * h)
        if dp == 0.0:
            break
        step = -d / dp
        cap = 0.25 * max(1.0, abs(x))
        if abs(step) > cap:
            step = math.copysign(cap, step)
        x = x + step
        if abs(step) <= 4.0 * _EPS * max(1.0, abs(x)):
            d, scale = characteristic_scaled(spec, x)
            if abs(d) < best_res:
                best_lam, best_res = x, abs(d)
            break
    return best_lam, best_res


def _detection_grid(spec: ProblemSpec, lo: float, hi: float,
                    refine: int = 1) -> list[float]:
    """Detection lattice over ``[lo, hi]``: cell width tracks the spacing of
    consecutive eigenvalues, clamped, and ``refine`` densifies it."""
    length = spec.b - spec.a
    wmax = max(abs(p.w) for p in spec.pieces)
    base_dx = (math.pi ** 2) / (length * length * wmax)
    n_cells = int(math.ceil((hi - lo) / base_dx))
    n_cells = max(48, min(n_cells, 200_000)) * max(1, int(refine))
    grid = [lo + (hi - lo) * i / n_cells for i in range(n_cells + 1)]
    grid[0], grid[-1] = lo, hi
    return grid


def _scan_chunk(spec: ProblemSpec, lo: float, hi: float, tol: float,
                refine: int = 1, grid: list[float] | None = None
                ) -> list[float]:
    """Locate real eigenvalues in ``[lo, hi]`` (may return near-duplicates
    at chunk edges; the caller merges).  ``refine`` multiplies the detection
    grid density; results must be stable under refinement.  ``grid`` lets a
    parallel driver hand every worker its slice of one shared lattice, so
    the found set is identical for any worker count."""
    if grid is None:
        grid = _detection_grid(spec, lo, hi, refine)

    d_cache: dict[float, float] = {}
    c_cache: dict[float, int] = {}

    def dval(x: float) -> float:
        if x not in d_cache:
            d, scale = characteristic_scaled(spec, x)
            d_cache[x] = d / scale
        return d_cache[x]

    def cval(x: float) -> int:
        if x not in c_cache:
            c_cache[x] = count_zeros(spec, x)
        return c_cache[x]

    roots: list[float] = []

    def emit(x: float) -> None:
        polished, residual = _newton_polish(spec, x, tol)
        _, scale = characteristic_scaled(spec, polished)
        if residual > 1e-7 * scale:
            return  # a |D| minimum or count jump that is not actually a root
        if lo - 1e-9 * max(1.0, abs(lo)) <= polished <= hi + 1e-9 * max(1.0, abs(hi)):
            roots.append(polished)

    def bracket_root(x0: float, x1: float) -> float:
        r, _ = _refine_bracket(dval, x0, x1, dval(x0), dval(x1),
                               0.25 * tol * max(1.0, abs(x0), abs(x1)))
        return r

    def probe_flat_minimum(x0: float, x1: float) -> None:
        """Cell at maximum refinement that still dips: check for a genuine
        double root via a critical point of D."""
        h = (x1 - x0) / 8.0
        if h <= 0.0:
            return

        def dprime(x: float) -> float:
            return (dval(x + h) - dval(x - h)) / (2.0 * h)

        p0, p1 = dprime(x0), dprime(x1)
        if p0 == 0.0 or p1 == 0.0 or (p0 < 0.0) == (p1 < 0.0):
            return
        xc = _bisect_zero(dprime, x0, x1, p0, p1,
                          4.0 * _EPS * max(1.0, abs(x0), abs(x1)))
        if abs(dval(xc)) <= 1e-11:
            emit(xc)

    min_width = 0.5 * tol  # relative factor applied per cell below
    stack: list[tuple[float, float, int]] = []
    for x0, x1 in zip(grid, grid[1:]):
        stack.append((x0, x1, 0))

    while stack:
        x0, x1, depth = stack.pop()
        width = x1 - x0
        scale_x = max(1.0, abs(x0), abs(x1))
        if width <= 0.0:
            continue
        d0, d1 = dval(x0), dval(x1)
        if d0 == 0.0:
            emit(x0)
            if width > min_width * scale_x:
                nudge = max(min_width * scale_x, width * 1e-6)
                stack.append((x0 + nudge, x1, depth + 1))
            continue
        if d1 == 0.0:
            emit(x1)
            if width > min_width * scale_x:
                nudge = max(min_width * scale_x, width * 1e-6)
                stack.append((x0, x1 - nudge, depth + 1))
            continue
        if (d0 < 0.0) != (d1 < 0.0):
            r = bracket_root(x0, x1)
            emit(r)
            margin = max(2.0 * tol * max(1.0, abs(r)), width * 1e-9)
            if depth < 64:
                if r - margin > x0:
                    stack.append((x0, r - margin, depth + 1))
                if x1 > r + margin:
                    stack.append((r + margin, x1, depth + 1))
            continue
        # No sign change across the cell.
        if width <= min_width * scale_x or depth >= 64:
            if cval(x0) != cval(x1):
                # A count jump squeezed below the resolution floor: an
                # even-multiplicity root (or unresolvable pair) lives here.
                emit(0.5 * (x0 + x1))
            continue
        c0, c1 = cval(x0), cval(x1)
        xm = 0.5 * (x0 + x1)
        if c0 != c1:
            stack.append((x0, xm, depth + 1))
            stack.append((xm, x1, depth + 1))
            continue
        dm = dval(xm)
        if abs(dm) < min(abs(d0), abs(d1)):
            # |D| dips inside a quiet cell: either a close pair or a double
            # root.  Recurse while the cell is wide, then probe.
            if width > 64.0 * tol * scale_x:
                stack.append((x0, xm, depth + 1))
                stack.append((xm, x1, depth + 1))
            else:
                probe_flat_minimum(x0, x1)
    return roots


def _merge_roots(roots: Sequence[float], tol: float) -> list[float]:
    out: list[float] = []
    for r in sorted(roots):
        if out and r - out[-1] <= 10.0 * tol * max(1.0, abs(r)):
            continue
        out.append(r)
    return out


def _empirical_indices(counts: Sequence[int]) -> tuple[int | None, int | None]:
    """Infer the oscillation-count thresholds from a scan's count multiset.

    The target pattern is: each count below some ``n`` appears exactly once,
    each count from ``n`` up appears at least twice (twice exactly above a
    possibly larger threshold ``m``).  Counts at the top of the observed
    range with multiplicity < 2 are treated as window-truncated and ignored.
    Returns ``(n, m)`` or ``None`` entries when the evidence is insufficient.
    """
    if not counts:
        return None, None
    mult = Counter(counts)
    c_min, c_max = min(mult), max(mult)
    c_trust = c_max
    while c_trust >= c_min and mult.get(c_trust, 0) < 2:
        c_trust -= 1
    if c_trust < c_min:
        return None, None
    first_double: int | None = None
    for m in range(c_min, c_trust + 1):
        if mult.get(m, 0) == 0:
            return None, None  # gap in the observed counts
        if mult[m] >= 2:
            first_double = m
            break
        # multiplicity 1 below the doubled range is the expected pattern
    if first_double is None:
        return None, None
    for m in range(first_double, c_trust + 1):
        if mult.get(m, 0) < 2:
            return None, None  # singleton inside the doubled range
    for m in range(c_min, first_double):
        if mult.get(m, 0) != 1:
            return None, None
    if first_double == c_min and c_min > 0:
        # No singleton evidence below and zero is not the floor: the window
        # may simply have missed the lower counts.
        return None, None
    n_r = first_double
    n_h: int | None = None
    for m in range(n_r, c_trust + 1):
        if all(mult.get(mm, 0) == 2 for mm in range(m, c_trust + 1)):
            n_h = m
            break
    return n_r, n_h


def _thread_count() -> int:
    raw = os.environ.get("SL_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def find_real_eigenvalues(spec: ProblemSpec, window: tuple[float, float],
                          tol: float = 1e-9, refine: int = 1) -> ScanResult:
    """Scan a real window for eigenvalues and annotate each with its interior
    zero count, weighted norm, and residual.

    The worker count comes from the ``SL_THREADS`` environment variable
    (default 1, serial); workers split the window into subintervals and
    results are merged and deduplicated.  ``refine`` densifies the detection
    grid (the found set must be stable under refinement).
    """
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InvalidProblemError(f"window must be finite with lo < hi, got {window!r}")
    if not (tol > 0.0):
        raise InvalidProblemError(f"tol must be positive, got {tol!r}")

    threads = _thread_count()
    if threads == 1:
        raw_roots = _scan_chunk(spec, lo, hi, tol, refine)
    else:
        # workers share one lattice, split on cell boundaries, so the found
        # set (and therefore the output bytes) is independent of the count
        nodes = _detection_grid(spec, lo, hi, refine)
        n_cells = len(nodes) - 1
        bounds = [round(j * n_cells / threads) for j in range(threads + 1)]
        jobs = []
        for b0, b1 in zip(bounds, bounds[1:]):
            if b1 > b0:
                jobs.append((spec, nodes[b0], nodes[b1], tol, refine,
                             nodes[b0:b1 + 1]))
        from concurrent.futures import ProcessPoolExecutor
        raw_roots = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_scan_chunk_star, jobs):
                raw_roots.extend(part)

    roots = _merge_roots(raw_roots, tol)

    from .richardson import weighted_norm  # local import to avoid a cycle

    records = []
    warnings: list[str] = []
    for r in roots:
        d, scale = characteristic_scaled(spec, r)
        records.append(EigenRecord(
            re_lambda=r, im_lambda=0.0,
            zeros_in_ab=count_zeros(spec, r),
            weighted_norm=weighted_norm(spec, r),
            residual=abs(d)))
        for edge in (lo, hi):
            if abs(r - edge) <= 100.0 * tol * max(1.0, abs(edge)):
                warnings.append(
                    f"eigenvalue {r!r} lies within the boundary band of the "
                    f"window edge {edge!r}; membership is ambiguous at tol={tol!r}")
    for edge in (lo, hi):
        d, scale = characteristic_scaled(spec, edge)
        if abs(d) <= 1e3 * _EPS * scale:
            warnings.append(
                f"|D| is at the numerical floor at the window edge {edge!r}; "
                f"an eigenvalue may sit on the boundary")

    n_r, n_h = _empirical_indices([rec.zeros_in_ab for rec in records
                                   if rec.zeros_in_ab is not None])
    return ScanResult(window=(lo, hi), tol=tol, records=tuple(records),
                      n_r_empirical=n_r, n_h_empirical=n_h,
                      warnings=tuple(warnings))


def _scan_chunk_star(args: tuple) -> list[float]:
    return _scan_chunk(*args)


# ---------------------------------------------------------------------------
# Complex rectangle search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Rect:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_lo + self.re_hi),
                       0.5 * (self.im_lo + self.im_hi))

    @property
    def diam(self) -> float:
        return math.hypot(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (self.re_lo - slack <= z.real <= self.re_hi + slack
                and self.im_lo - slack <= z.imag <= self.im_hi + slack)


def _wrap_angle(x: float) -> float:
    while x > math.pi:
        x -= 2.0 * math.pi
    while x <= -math.pi:
        x += 2.0 * math.pi
    return x


class _EdgeWalker:
    """Adaptive phase tracking of ``D`` along one straight contour edge."""

    def __init__(self, spec: ProblemSpec, z0: complex, z1: complex,
                 max_points: int = 4096):
        self.spec = spec
        self.z0 = z0
        self.z1 = z1
        self.max_points = max_points

    def _eval(self, t: float) -> tuple[float, float]:
        z = self.z0 + t * (self.z1 - self.z0)
        d, scale = characteristic_scaled(self.spec, z)
        dc = complex(d)
        if abs(dc) <= 1e3 * _EPS * scale:
            raise ContourError(
                f"characteristic function vanishes on the contour near {z!r}")
        return cmath.phase(dc), abs(dc)

    def total_change(self, max_jump: float = 0.5 * math.pi) -> float:
        ts = [i / 16.0 for i in range(17)]
        args = [self._eval(t)[0] for t in ts]
        i = 0
        while i < len(ts) - 1:
            jump = _wrap_angle(args[i + 1] - args[i])
            if abs(jump) > max_jump:
                if len(ts) >= self.max_points:
                    raise ContourError(
                        f"cannot resolve the phase of D along the contour edge "
                        f"{self.z0!r} -> {self.z1!r}")
                tm = 0.5 * (ts[i] + ts[i + 1])
                ts.insert(i + 1, tm)
                args.insert(i + 1, self._eval(tm)[0])
                continue
            i += 1
        total = 0.0
        for a0, a1 in zip(args, args[1:]):
            total += _wrap_angle(a1 - a0)
        return total


def _winding_number(spec: ProblemSpec, rect: _Rect) -> int:
    corners = [complex(rect.re_lo, rect.im_lo), complex(rect.re_hi, rect.im_lo),
               complex(rect.re_hi, rect.im_hi), complex(rect.re_lo, rect.im_hi)]
    for max_jump in (0.5 * math.pi, 0.25 * math.pi):
        total = 0.0
        for z0, z1 in zip(corners, corners[1:] + corners[:1]):
            total += _EdgeWalker(spec, z0, z1).total_change(max_jump)
        w = round(total / (2.0 * math.pi))
        if abs(total / (2.0 * math.pi) - w) <= 0.2:
            if w < 0:
                raise ContourError(
                    f"negative winding number {w} over {rect!r}; the "
                    f"characteristic function should be analytic")
            return int(w)
    raise ContourError(f"winding number did not stabilize over {rect!r}")


def _safe_split(spec: ProblemSpec, lo: float, hi: float,
                along_re: bool, other_lo: float, other_hi: float
                ) -> list[float]:
    """Candidate split coordinates, those whose lines avoid near-zeros of
    ``D`` (by a coarse probe) first.  The caller retries down the list when a
    root turns out to sit on the chosen line anyway."""
    mid = 0.5 * (lo + hi)
    good: list[float] = []
    risky: list[float] = []
    for shift in (0.0, 0.025, -0.025, 0.05, -0.05, 0.1, -0.1):
        cand = mid + shift * (hi - lo)
        ok = True
        for j in range(9):
            t = other_lo + (other_hi - other_lo) * j / 8.0
            z = complex(cand, t) if along_re else complex(t, cand)
            d, scale = characteristic_scaled(spec, z)
            if abs(complex(d)) <= 1e-8 * scale:
                ok = False
                break
        (good if ok else risky).append(cand)
    return good + risky


def _newton_polish_complex(spec: ProblemSpec, z0: complex
                           ) -> tuple[complex, float]:
    best_z, best_res = z0, float("inf")
    z = z0
    for _ in range(60):
        d, scale = characteristic_scaled(spec, z)
        dc = complex(d)
        res = abs(dc)
        if res < best_res:
            best_z, best_res = z, res
        if res <= 32.0 * _EPS * scale:
            break
        h = 1e-6 * max(1.0, abs(z))
        dp = (complex(characteristic(spec, z + h))
              - complex(characteristic(spec, z - h))) / (2.0 * h)
        if dp == 0.0:
            break
        step = -dc / dp
        if abs(step) > 0.5 * max(1.0, abs(z)):
            step *= 0.5 * max(1.0, abs(z)) / abs(step)
        z = z + step
        if abs(step) <= 4.0 * _EPS * max(1.0, abs(z)):
            d2, _ = characteristic_scaled(spec, z)
            if abs(complex(d2)) < best_res:
                best_z, best_res = z, abs(complex(d2))
            break
    return best_z, best_res


def find_complex_eigenvalues(spec: ProblemSpec,
                             rect: tuple[tuple[float, float], tuple[float, float]],
                             tol: float = 1e-9) -> list[EigenRecord]:
    """All eigenvalues inside a closed rectangle of the complex plane.

    Uses boundary winding counts (argument principle) with recursive
    subdivision and Newton polishing.  If the rectangle is symmetric about
    the real axis the returned non-real roots come in exactly conjugate
    pairs; roots within the numerical floor of the axis are snapped to real
    and annotated like real-scan records.

    ``rect`` is either ``((re_lo, re_hi), (im_lo, im_hi))`` or a mapping
    ``{"re": (lo, hi), "im": (lo, hi)}``.
    """
    if isinstance(rect, dict):
        unknown = set(rect) - {"re", "im"}
        if unknown or set(rect) != {"re", "im"}:
            raise InvalidProblemError(
                f"rectangle mapping must have exactly the keys 're' and 'im', "
                f"got {sorted(rect)!r}")
        rect = (rect["re"], rect["im"])
    (re_lo, re_hi), (im_lo, im_hi) = rect
    re_lo, re_hi = float(re_lo), float(re_hi)
    im_lo, im_hi = float(im_lo), float(im_hi)
    if not (re_lo < re_hi and im_lo < im_hi):
        raise InvalidProblemError(f"rectangle must have positive extent, got {rect!r}")
    if not (tol > 0.0):
        raise InvalidProblemError(f"tol must be positive, got {tol!r}")

    base = _Rect(re_lo, re_hi, im_lo, im_hi)
    symmetric = abs(im_lo + im_hi) <= 1e-12 * max(1.0, im_hi - im_lo)

    outer = base
    nudge = 0.0
    for attempt in range(4):
        try:
            w_total = _winding_number(spec, outer)
            break
        except ContourError:
            if attempt == 3:
                raise
            nudge = 1e-3 * outer.diam * (attempt + 1)
            outer = _Rect(base.re_lo - nudge, base.re_hi + nudge,
                          base.im_lo - nudge, base.im_hi + nudge)
            if symmetric:
                outer = _Rect(outer.re_lo, outer.re_hi,
                              -max(abs(outer.im_lo), outer.im_hi),
                              max(abs(outer.im_lo), outer.im_hi))
            log.warning("contour passed near a root; expanding the rectangle "
                        "by %r and retrying", nudge)

    roots: list[complex] = []
    stack: list[tuple[_Rect, int, int]] = [(outer, w_total, 0)]
    while stack:
        r, w, depth = stack.pop()
        if w == 0:
            continue
        if depth > 60:
            raise NumericalFailure(
                f"rectangle subdivision exceeded depth 60 near {r.center!r}")
        cen = r.center
        if w == 1:
            z, res = _newton_polish_complex(spec, cen)
            if r.contains(z, slack=1e-12 * max(1.0, abs(z))):
                roots.append(z)
                continue
            # Newton left the rectangle: fall through to subdivision.
        if r.diam <= max(4.0 * tol, 1e-11) * max(1.0, abs(cen)):
            z, res = _newton_polish_complex(spec, cen)
            roots.append(z if r.contains(z, slack=r.diam) else cen)
            continue
        wide = (r.re_hi - r.re_lo) >= (r.im_hi - r.im_lo)
        if wide:
            cuts = _safe_split(spec, r.re_lo, r.re_hi, True, r.im_lo, r.im_hi)
        else:
            cuts = _safe_split(spec, r.im_lo, r.im_hi, False, r.re_lo, r.re_hi)
        last_err: ContourError | None = None
        for cut in cuts:
            if wide:
                r1 = _Rect(r.re_lo, cut, r.im_lo, r.im_hi)
                r2 = _Rect(cut, r.re_hi, r.im_lo, r.im_hi)
            else:
                r1 = _Rect(r.re_lo, r.re_hi, r.im_lo, cut)
                r2 = _Rect(r.re_lo, r.re_hi, cut, r.im_hi)
            try:
                w1 = _winding_number(spec, r1)
                w2 = _winding_number(spec, r2)
            except ContourError as err:
                # a root sits on (or hugs) this split line; try the next one
                last_err = err
                continue
            if w1 + w2 != w:
                last_err = ContourError(
                    f"winding counts are inconsistent after splitting {r!r}: "
                    f"{w1} + {w2} != {w}")
                continue
            stack.append((r1, w1, depth + 1))
            stack.append((r2, w2, depth + 1))
            break
        else:
            raise last_err if last_err is not None else ContourError(
                f"no usable split line found for {r!r}")

    # Deduplicate, and drop anything the boundary nudge pulled in from
    # outside the requested rectangle.
    merged: list[complex] = []
    for z in sorted(roots, key=lambda v: (v.real, v.imag)):
        if merged and abs(z - merged[-1]) <= 10.0 * tol * max(1.0, abs(z)):
            continue
        if not base.contains(z, slack=2.0 * nudge + 1e-12 * max(1.0, abs(z))):
            log.warning("dropping root %r found only inside the nudged "
                        "rectangle", z)
            continue
        merged.append(z)

    # Snap near-real roots; enforce conjugate pairing on symmetric rectangles.
    reals: list[complex] = []
    uppers: list[complex] = []
    lowers: list[complex] = []
    for z in merged:
        if abs(z.imag) <= 1e-10 * max(1.0, abs(z.real)):
            reals.append(complex(z.real, 0.0))
        elif z.imag > 0:
            uppers.append(z)
        else:
            lowers.append(z)
    final: list[complex] = list(reals)
    if symmetric:
        used = [False] * len(lowers)
        for zu in uppers:
            partner = None
            for i, zl in enumerate(lowers):
                if used[i]:
                    continue
                if abs(zl.conjugate() - zu) <= 1e3 * tol * max(1.0, abs(zu)):
                    partner = i
                    break
            if partner is not None:
                used[partner] = True
                zl = lowers[partner]
                ru = abs(complex(characteristic(spec, zu)))
                rl = abs(complex(characteristic(spec, zl)))
                master = zu if ru <= rl else zl.conjugate()
                final.append(master)
                final.append(master.conjugate())
            else:
                final.append(zu)
                final.append(zu.conjugate())
        for i, zl in enumerate(lowers):
            if not used[i]:
                final.append(zl.conjugate())
                final.append(zl)
    else:
        final.extend(uppers)
        final.extend(lowers)

    from .richardson import weighted_norm  # local import to avoid a cycle

    records = []
    seen: set[tuple[float, float]] = set()
    for z in sorted(final, key=lambda v: (v.real, v.imag)):
        key = (z.real, z.imag)
        if key in seen:
            continue
        seen.add(key)
        d, scale = characteristic_scaled(spec, z if z.imag != 0.0 else z.real)
        if z.imag == 0.0:
            records.append(EigenRecord(z.real, 0.0,
                                       count_zeros(spec, z.real),
                                       weighted_norm(spec, z.real),
                                       abs(complex(d))))
        else:
            records.append(EigenRecord(z.real, z.imag, None, None,
                                       abs(complex(d))))
    return records


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(value)


def records_to_csv(records: Sequence[EigenRecord]) -> str:
    lines = ["re_lambda,im_lambda,zeros,weighted_norm,residual"]
    for r in records:
        lines.append(",".join([
            _fmt(r.re_lambda), _fmt(r.im_lambda), _fmt(r.zeros_in_ab),
            _fmt(r.weighted_norm), _fmt(r.residual)]))
    return "\n".join(lines) + "\n"


def scan_to_csv(result: ScanResult) -> str:
    return records_to_csv(result.records)


def scan_to_dict(result: ScanResult) -> dict:
    return result.to_dict()


def scan_to_json(result: ScanResult) -> str:
    return json.dumps(result.to_dict(), indent=2) + "\n"

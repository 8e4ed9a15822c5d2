"""Transfer-matrix propagation of ``y'' + (lambda*w + q) y = 0``.

On a piece where ``k2 = lambda*w + q`` is constant, the solution advances by
the entire-function kernels

    C(z, t) = cos(sqrt(z) t),    S(z, t) = sin(sqrt(z) t) / sqrt(z),

evaluated with ``z = k2``.  Both are entire in ``z`` (real formulas for real
``z`` of either sign, power series near ``z * t^2 = 0``), so propagation is
analytic in the spectral parameter and works unchanged for complex ``lambda``.

Pieces with tabulated potentials are crossed by an adaptive Dormand-Prince
5(4) integrator applied to the 2x2 fundamental system, with mandatory step
boundaries at the table nodes (the potential is linear between nodes).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .coefficients import Piece, ProblemSpec
from .errors import InvalidProblemError, NumericalFailure

__all__ = [
    "StateVector",
    "TransferMatrix",
    "cs_kernels",
    "norm_kernels",
    "piece_transfer",
    "propagate",
    "solution_at",
    "initial_state",
]

Scalar = complex | float

_SERIES_CUTOFF = 1e-4


def cs_kernels(z: Scalar, t: float) -> tuple[Scalar, Scalar]:
    """Return ``(C, S) = (cos(sqrt(z) t), sin(sqrt(z) t)/sqrt(z))``.

    Real input stays on the real fast path (trig for ``z > 0``, hyperbolic
    for ``z < 0``); small ``|z| t^2`` uses the power series shared by both
    branches, which keeps the kernels smooth through ``z = 0``.
    """
    u = z * t * t
    if abs(u) < _SERIES_CUTOFF:
        c = 1.0 - (u / 2.0) * (1.0 - (u / 12.0) * (1.0 - u / 30.0))
        s = t * (1.0 - (u / 6.0) * (1.0 - (u / 20.0) * (1.0 - u / 42.0)))
        return c, s
    if isinstance(z, complex):
        k = cmath.sqrt(z)
        kt = k * t
        return cmath.cos(kt), cmath.sin(kt) / k
    if z > 0.0:
        k = math.sqrt(z)
        kt = k * t
        return math.cos(kt), math.sin(kt) / k
    kappa = math.sqrt(-z)
    kt = kappa * t
    return math.cosh(kt), math.sinh(kt) / kappa


def norm_kernels(z: Scalar, t: float) -> tuple[Scalar, Scalar, Scalar]:
    """Integrals of kernel products over ``[0, t]``: ``(Icc, Ics, Iss)`` with

        Icc = int C(z, s)^2 ds,  Ics = int C(z, s) S(z, s) ds,
        Iss = int S(z, s)^2 ds.

    All three are entire in ``z``; ``Iss`` switches to its power series when
    the closed form ``(t - S(z, 2t)/2) / (2 z)`` would cancel.
    """
    _, s2 = cs_kernels(z, 2.0 * t)
    icc = 0.5 * t + 0.25 * s2
    _, s1 = cs_kernels(z, t)
    ics = 0.5 * s1 * s1
    u = z * (2.0 * t) * (2.0 * t)
    if abs(u) < 1e-3:
        # Iss = sum_{j>=0} (-z)^j (2t)^(2j+3) / (4 (2j+3)!); consecutive terms
        # differ by -u / ((2j+2)(2j+3)).
        term = (2.0 * t) ** 3 / 24.0
        iss = term
        for j in range(1, 7):
            term = term * (-u) / ((2 * j + 2) * (2 * j + 3))
            iss = iss + term
    else:
        iss = (t - 0.5 * s2) / (2.0 * z)
    return icc, ics, iss


@dataclass(frozen=True)
class StateVector:
    """Solution value and derivative at a point."""

    x: float
    y: Scalar
    yp: Scalar


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 matrix carrying ``(y, y')`` from ``x0`` to ``x1``.

    Columns are the fundamental solutions with ``(y, y') = (1, 0)`` and
    ``(0, 1)`` at ``x0``.  The Wronskian determinant is identically 1 for the
    exact flow; :attr:`det` exposes the computed value as a health check.
    """

    m11: Scalar
    m12: Scalar
    m21: Scalar
    m22: Scalar
    x0: float
    x1: float

    @property
    def det(self) -> Scalar:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, y: Scalar, yp: Scalar) -> tuple[Scalar, Scalar]:
        return (self.m11 * y + self.m12 * yp, self.m21 * y + self.m22 * yp)

    def apply_state(self, state: StateVector) -> StateVector:
        y, yp = self.apply(state.y, state.yp)
        return StateVector(self.x1, y, yp)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        """Composition ``self @ other``: first cross ``other``, then ``self``."""
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        if other.x1 != self.x0:
            raise InvalidProblemError(
                f"cannot compose transfer over [{other.x0!r}, {other.x1!r}] "
                f"with transfer over [{self.x0!r}, {self.x1!r}]")
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
            other.x0, self.x1)


def identity_transfer(x: float) -> TransferMatrix:
    return TransferMatrix(1.0, 0.0, 0.0, 1.0, x, x)


def piece_transfer(k2: Scalar, length: float,
                   x0: float = 0.0) -> TransferMatrix:
    """Transfer matrix across a constant-coefficient stretch of ``length``."""
    if length < 0.0:
        raise InvalidProblemError(f"length must be nonnegative, got {length!r}")
    c, s = cs_kernels(k2, length)
    return TransferMatrix(c, s, -k2 * s, c, x0, x0 + length)


def piece_k2(piece: Piece, lam: Scalar, x: float | None = None) -> Scalar:
    """``lambda * w + q`` on a piece (at ``x`` for tabulated potentials)."""
    if piece.has_constant_q:
        return lam * piece.w + piece.q  # type: ignore[operator]
    if x is None:
        raise InvalidProblemError("tabulated potential requires a location x")
    return lam * piece.w + piece.q_at(x)


# ---------------------------------------------------------------------------
# Adaptive Dormand-Prince 5(4) for tabulated potentials
# ---------------------------------------------------------------------------

_DP_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
_DP_B5 = _DP_A[6] + (0.0,)
_DP_B4 = (5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
          -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0)
_DP_E = tuple(b5 - b4 for b5, b4 in zip(_DP_B5, _DP_B4))

_MAX_STEPS = 200_000


def rk45(f: Callable[[float, tuple[Scalar, ...]], tuple[Scalar, ...]],
         x0: float, x1: float, u0: tuple[Scalar, ...],
         rtol: float = 1e-10) -> tuple[Scalar, ...]:
    """Integrate ``u' = f(x, u)`` from ``x0`` to ``x1`` (``x1 >= x0``).

    Error control is relative to the largest state component, so transfer
    matrices with hyperbolically growing entries stay accurate in the matrix
    norm rather than componentwise near zero crossings.
    """
    if x1 < x0:
        raise InvalidProblemError("rk45 integrates forward only")
    span = x1 - x0
    if span == 0.0:
        return u0
    x = x0
    u = tuple(u0)
    n = len(u)
    k0 = f(x, u)
    h = span / 16.0
    steps = 0
    while x < x1:
        steps += 1
        if steps > _MAX_STEPS:
            raise NumericalFailure(
                f"adaptive integrator exceeded {_MAX_STEPS} steps on "
                f"[{x0!r}, {x1!r}]")
        h = min(h, x1 - x)
        ks = [k0]
        for stage in range(1, 7):
            coeffs = _DP_A[stage]
            arg = tuple(
                u[i] + h * sum(coeffs[j] * ks[j][i] for j in range(stage))
                for i in range(n))
            ks.append(f(x + _DP_C[stage] * h, arg))
        unew = tuple(
            u[i] + h * sum(_DP_B5[j] * ks[j][i] for j in range(7))
            for i in range(n))
        err_vec = tuple(
            h * sum(_DP_E[j] * ks[j][i] for j in range(7)) for i in range(n))
        mag = max(1e-300, max(abs(v) for v in u), max(abs(v) for v in unew))
        scale = rtol * mag
        err = max(abs(e) for e in err_vec) / scale
        if err <= 1.0:
            x = x + h
            u = unew
            k0 = ks[6]  # first-same-as-last
            if x >= x1:
                break
        grow = 0.9 * (err ** -0.2) if err > 0.0 else 5.0
        h = h * min(5.0, max(0.2, grow))
        if h <= 0.0 or x + h == x:
            raise NumericalFailure("adaptive integrator step size underflow")
    return u


def _sampled_rhs(piece: Piece, lam: Scalar) -> Callable:
    nodes = piece.q  # validated table
    q_at = piece.q_at
    w = piece.w

    def f(x: float, u: tuple[Scalar, ...]) -> tuple[Scalar, ...]:
        k2 = lam * w + q_at(x)
        y1, yp1, y2, yp2 = u
        return (yp1, -k2 * y1, yp2, -k2 * y2)

    return f


def _sampled_transfer(piece: Piece, lam: Scalar, x_from: float, x_to: float,
                      rtol: float = 5e-14) -> TransferMatrix:
    """Transfer across ``[x_from, x_to]`` inside a tabulated piece.

    The per-step tolerance is kept near the rounding floor because the
    global Wronskian drift scales with step count: at ``|lam|`` around 1e4
    the integrator takes on the order of a thousand steps, and the transfer
    matrix must still conserve its determinant to 1e-10.
    """
    f = _sampled_rhs(piece, lam)
    stops = [x_from]
    for xv, _ in piece.q:  # type: ignore[union-attr]
        if x_from < xv < x_to:
            stops.append(xv)
    stops.append(x_to)
    u: tuple[Scalar, ...] = (1.0, 0.0, 0.0, 1.0)
    for xa, xb in zip(stops, stops[1:]):
        u = rk45(f, xa, xb, u, rtol)
    y1, yp1, y2, yp2 = u
    return TransferMatrix(y1, y2, yp1, yp2, x_from, x_to)


def transfer_across(piece: Piece, lam: Scalar,
                    x_from: float | None = None,
                    x_to: float | None = None) -> TransferMatrix:
    """Transfer matrix across (part of) one piece at spectral value ``lam``."""
    x_from = piece.x0 if x_from is None else x_from
    x_to = piece.x1 if x_to is None else x_to
    if not (piece.x0 <= x_from <= x_to <= piece.x1):
        raise InvalidProblemError(
            f"[{x_from!r}, {x_to!r}] is not inside piece "
            f"[{piece.x0!r}, {piece.x1!r}]")
    if piece.has_constant_q:
        k2 = piece_k2(piece, lam, x_from)
        return piece_transfer(k2, x_to - x_from, x_from)
    return _sampled_transfer(piece, lam, x_from, x_to)


def initial_state(spec: ProblemSpec) -> StateVector:
    """Left initial data ``(y, y') = (sin(alpha), cos(alpha))`` at ``x = a``,
    which satisfies the boundary condition at ``a`` for every ``lambda``."""
    return StateVector(spec.a, math.sin(spec.alpha), math.cos(spec.alpha))


def breakpoint_states(spec: ProblemSpec, lam: Scalar) -> list[StateVector]:
    """States at every breakpoint ``a = x_0 < ... < x_m = b``."""
    state = initial_state(spec)
    out = [state]
    for piece in spec.pieces:
        t = transfer_across(piece, lam)
        state = t.apply_state(state)
        out.append(state)
    return out


def propagate(spec: ProblemSpec, lam: Scalar) -> tuple[StateVector, TransferMatrix]:
    """Cross the whole interval: terminal state at ``b`` and the total
    transfer matrix over ``[a, b]``."""
    total = identity_transfer(spec.a)
    for piece in spec.pieces:
        total = transfer_across(piece, lam) @ total
    state = total.apply_state(initial_state(spec))
    return state, total


def solution_at(spec: ProblemSpec, lam: Scalar,
                xs: Sequence[float]) -> list[StateVector]:
    """Solution states at the requested locations (any order, must lie in
    ``[a, b]``)."""
    for x in xs:
        if not (spec.a <= x <= spec.b):
            raise InvalidProblemError(
                f"x={x!r} outside the problem interval [{spec.a!r}, {spec.b!r}]")
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    results: list[StateVector | None] = [None] * len(xs)
    state = initial_state(spec)
    idx = 0
    n_pieces = len(spec.pieces)
    for pi, piece in enumerate(spec.pieces):
        last = pi == n_pieces - 1
        while idx < len(order):
            x = xs[order[idx]]
            if x > piece.x1 or (x == piece.x1 and not last):
                break
            t = transfer_across(piece, lam, piece.x0, x)
            moved = t.apply_state(state)
            # echo the caller's coordinate exactly (the transfer endpoint can
            # drift by an ulp through x0 + (x - x0))
            results[order[idx]] = StateVector(x, moved.y, moved.yp)
            idx += 1
        state = transfer_across(piece, lam).apply_state(state)
    if idx != len(order):
        raise NumericalFailure("solution_at failed to place every point")
    return results  # type: ignore[return-value]


def states_on_grid(piece: Piece, lam: Scalar, start: StateVector,
                   n: int) -> list[StateVector]:
    """States at ``n + 1`` equally spaced points across one piece, starting
    from ``start`` at ``piece.x0``.  Used for sign-tracking on pieces where
    no closed-form zero count is available."""
    if n < 1:
        raise InvalidProblemError("grid needs at least one interval")
    out = [StateVector(piece.x0, start.y, start.yp)]
    y, yp = start.y, start.yp
    length = piece.length
    prev = piece.x0
    for j in range(1, n + 1):
        xj = piece.x0 + length * (j / n) if j < n else piece.x1
        t = transfer_across(piece, lam, prev, xj)
        y, yp = t.apply(y, yp)
        out.append(StateVector(xj, y, yp))
        prev = xj
    return out

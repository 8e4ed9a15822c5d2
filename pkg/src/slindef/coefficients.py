"""Problem data model: piecewise coefficients and boundary conditions.

A problem is the equation ``y'' + (lambda * w(x) + q(x)) * y = 0`` on a
compact interval ``[a, b]`` with separated boundary conditions

    y(a) * cos(alpha) - y'(a) * sin(alpha) = 0,
    y(b) * cos(beta)  + y'(b) * sin(beta)  = 0,

where ``alpha, beta`` lie in ``[0, pi)`` and ``alpha = beta = 0`` is the
Dirichlet case.  The weight ``w`` is constant on each piece and may change
sign between pieces; the potential ``q`` is either constant on a piece or
given by a table of samples interpolated linearly.

Conventions:

* pieces tile ``[a, b]`` exactly (each piece starts where the previous ends,
  compared with exact float equality);
* coefficient values at an interior breakpoint come from the piece to the
  right (right-limit convention); the value at ``x = b`` comes from the
  last piece.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

from .errors import InvalidProblemError

QTable = tuple[tuple[float, float], ...]
QSpec = Union[float, QTable]

__all__ = [
    "Piece",
    "PiecewiseCoefficient",
    "ProblemSpec",
    "one_turning_point",
    "two_turning_point",
    "application_problem",
    "build_canonical",
    "normalize_domain",
    "problem_to_dict",
    "problem_from_dict",
    "load_problem",
    "save_problem",
]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidProblemError(message)


def _as_finite_float(value: object, what: str) -> float:
    try:
        x = float(value)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise InvalidProblemError(f"{what} is not a number: {value!r}") from exc
    _require(math.isfinite(x), f"{what} must be finite, got {x!r}")
    return x


def _normalize_q(q: object, x0: float, x1: float) -> QSpec:
    """Validate a potential given as a constant or as a sample table."""
    if isinstance(q, (int, float)):
        return _as_finite_float(q, "constant q")
    if isinstance(q, Iterable):
        rows = []
        for row in q:  # type: ignore[assignment]
            pair = tuple(row)
            _require(len(pair) == 2, f"q table rows need 2 entries, got {pair!r}")
            rows.append((_as_finite_float(pair[0], "q table node"),
                         _as_finite_float(pair[1], "q table value")))
        _require(len(rows) >= 2, "q table needs at least 2 nodes")
        xs = [r[0] for r in rows]
        _require(all(x2 > x1_ for x1_, x2 in zip(xs, xs[1:])),
                 "q table nodes must be strictly increasing")
        _require(xs[0] == x0 and xs[-1] == x1,
                 f"q table must span the piece exactly: nodes cover "
                 f"[{xs[0]!r}, {xs[-1]!r}], piece is [{x0!r}, {x1!r}]")
        return tuple(rows)
    raise InvalidProblemError(f"q must be a number or a table, got {type(q).__name__}")


@dataclass(frozen=True)
class Piece:
    """One coefficient piece: constant weight, constant or sampled potential."""

    x0: float
    x1: float
    w: float
    q: QSpec = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x0", _as_finite_float(self.x0, "piece x0"))
        object.__setattr__(self, "x1", _as_finite_float(self.x1, "piece x1"))
        object.__setattr__(self, "w", _as_finite_float(self.w, "piece weight"))
        _require(self.x0 < self.x1,
                 f"piece must have positive length: [{self.x0!r}, {self.x1!r}]")
        _require(self.w != 0.0, "piece weight must be nonzero")
        object.__setattr__(self, "q", _normalize_q(self.q, self.x0, self.x1))

    @property
    def length(self) -> float:
        return self.x1 - self.x0

    @property
    def has_constant_q(self) -> bool:
        return isinstance(self.q, float)

    def q_at(self, x: float) -> float:
        """Potential value at ``x`` (within the closed piece)."""
        if isinstance(self.q, float):
            return self.q
        nodes = self.q
        if x <= nodes[0][0]:
            return nodes[0][1]
        if x >= nodes[-1][0]:
            return nodes[-1][1]
        # Linear interpolation between the bracketing nodes.
        lo, hi = 0, len(nodes) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if nodes[mid][0] <= x:
                lo = mid
            else:
                hi = mid
        (xa, qa), (xb, qb) = nodes[lo], nodes[hi]
        t = (x - xa) / (xb - xa)
        return qa + t * (qb - qa)

    def q_extremes(self, lo: float | None = None, hi: float | None = None) -> tuple[float, float]:
        """(min, max) of q over the intersection of the piece with [lo, hi]."""
        lo = self.x0 if lo is None else max(lo, self.x0)
        hi = self.x1 if hi is None else min(hi, self.x1)
        if isinstance(self.q, float):
            return (self.q, self.q)
        vals = [self.q_at(lo), self.q_at(hi)]
        vals += [qv for (xv, qv) in self.q if lo < xv < hi]
        return (min(vals), max(vals))


@dataclass(frozen=True)
class PiecewiseCoefficient:
    """An ordered run of pieces tiling a compact interval exactly."""

    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        _require(len(pieces) >= 1, "at least one piece is required")
        _require(all(isinstance(p, Piece) for p in pieces),
                 "pieces must be Piece instances")
        for left, right in zip(pieces, pieces[1:]):
            _require(left.x1 == right.x0,
                     f"pieces must tile the interval exactly: piece ending at "
                     f"{left.x1!r} followed by piece starting at {right.x0!r}")
        object.__setattr__(self, "pieces", pieces)

    @property
    def a(self) -> float:
        return self.pieces[0].x0

    @property
    def b(self) -> float:
        return self.pieces[-1].x1

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(p.x0 for p in self.pieces) + (self.b,)

    def piece_at(self, x: float) -> Piece:
        """The piece governing ``x``, using the right-limit convention."""
        _require(self.a <= x <= self.b,
                 f"x={x!r} outside the problem interval [{self.a!r}, {self.b!r}]")
        if x == self.b:
            return self.pieces[-1]
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.pieces[mid].x0 <= x:
                lo = mid
            else:
                hi = mid - 1
        return self.pieces[lo]

    def evaluate(self, x: float) -> tuple[float, float]:
        """``(w(x), q(x))`` with right limits at interior breakpoints."""
        piece = self.piece_at(x)
        return (piece.w, piece.q_at(x))

    def turning_points(self) -> tuple[float, ...]:
        """Interior breakpoints where the weight changes sign."""
        out = []
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.w * right.w < 0.0:
                out.append(right.x0)
        return tuple(out)

    def weight_range(self) -> tuple[float, float]:
        ws = [p.w for p in self.pieces]
        return (min(ws), max(ws))

    def sign_pattern(self) -> tuple[int, ...]:
        return tuple(1 if p.w > 0 else -1 for p in self.pieces)


@dataclass(frozen=True)
class ProblemSpec:
    """A complete problem: coefficients plus boundary-condition angles."""

    coeff: PiecewiseCoefficient
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        _require(isinstance(self.coeff, PiecewiseCoefficient),
                 "coeff must be a PiecewiseCoefficient")
        alpha = _as_finite_float(self.alpha, "alpha")
        beta = _as_finite_float(self.beta, "beta")
        _require(0.0 <= alpha < math.pi, f"alpha must lie in [0, pi), got {alpha!r}")
        _require(0.0 <= beta < math.pi, f"beta must lie in [0, pi), got {beta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def a(self) -> float:
        return self.coeff.a

    @property
    def b(self) -> float:
        return self.coeff.b

    @property
    def pieces(self) -> tuple[Piece, ...]:
        return self.coeff.pieces

    @property
    def is_dirichlet(self) -> bool:
        return self.alpha == 0.0 and self.beta == 0.0


# ---------------------------------------------------------------------------
# Canonical families
# ---------------------------------------------------------------------------

def one_turning_point(q0: float) -> ProblemSpec:
    """Sign weight on [-1, 1]: ``w = -1`` then ``w = +1``, constant ``q = q0``,
    Dirichlet ends."""
    q0 = _as_finite_float(q0, "q0")
    coeff = PiecewiseCoefficient((
        Piece(-1.0, 0.0, -1.0, q0),
        Piece(0.0, 1.0, 1.0, q0),
    ))
    return ProblemSpec(coeff)


def two_turning_point(w_left: float, w_mid: float, w_right: float,
                      q0: float = 0.0) -> ProblemSpec:
    """Step weight on [-1, 2] with pattern negative/positive/negative on
    unit pieces, constant ``q = q0``, Dirichlet ends."""
    w_left = _as_finite_float(w_left, "left weight")
    w_mid = _as_finite_float(w_mid, "middle weight")
    w_right = _as_finite_float(w_right, "right weight")
    q0 = _as_finite_float(q0, "q0")
    _require(w_left < 0.0, f"left weight must be negative, got {w_left!r}")
    _require(w_mid > 0.0, f"middle weight must be positive, got {w_mid!r}")
    _require(w_right < 0.0, f"right weight must be negative, got {w_right!r}")
    coeff = PiecewiseCoefficient((
        Piece(-1.0, 0.0, w_left, q0),
        Piece(0.0, 1.0, w_mid, q0),
        Piece(1.0, 2.0, w_right, q0),
    ))
    return ProblemSpec(coeff)


def application_problem(q: object = 0.0) -> ProblemSpec:
    """Weight (-1, 2, -1) on unit pieces of [-1, 2], Dirichlet ends.

    ``q`` may be a single number (used on all three pieces) or a sequence of
    three per-piece potentials, each a number or a sample table.
    """
    bounds = [(-1.0, 0.0), (0.0, 1.0), (1.0, 2.0)]
    weights = [-1.0, 2.0, -1.0]
    if isinstance(q, (int, float)):
        qs: Sequence[object] = [float(q)] * 3
    else:
        qs = list(q)  # type: ignore[arg-type]
        _require(len(qs) == 3, "q must be a number or a sequence of 3 entries")
    coeff = PiecewiseCoefficient(tuple(
        Piece(x0, x1, w, qp) for (x0, x1), w, qp in zip(bounds, weights, qs)
    ))
    return ProblemSpec(coeff)


_CANONICAL_BUILDERS = {
    "one_tp_sign": one_turning_point,
    "two_tp": two_turning_point,
    "application": application_problem,
}


def build_canonical(kind: str, *args: object, **kwargs: object) -> ProblemSpec:
    """Dispatch to a named canonical family: ``one_tp_sign``, ``two_tp``,
    ``application``."""
    try:
        builder = _CANONICAL_BUILDERS[kind]
    except KeyError:
        raise InvalidProblemError(
            f"unknown canonical family {kind!r}; expected one of "
            f"{sorted(_CANONICAL_BUILDERS)}") from None
    return builder(*args, **kwargs)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Domain normalization
# ---------------------------------------------------------------------------

def normalize_domain(spec: ProblemSpec) -> ProblemSpec:
    """Affine change of variables onto [-1, 2] with the length-scale factor
    folded into the coefficients.

    The substitution ``x = a + (b - a) * (u + 1) / 3`` maps ``u in [-1, 2]``
    onto ``x in [a, b]``; with ``J = (b - a) / 3`` the transformed problem has
    weight ``J^2 * w`` and potential ``J^2 * q`` and exactly the same
    eigenvalues as the original.  Specs already on [-1, 2] are returned
    unchanged, so the operation is idempotent.
    """
    a, b = spec.a, spec.b
    if a == -1.0 and b == 2.0:
        return spec
    jac = (b - a) / 3.0
    scale = jac * jac

    def to_u(x: float) -> float:
        return -1.0 + (x - a) / jac

    # Map breakpoints once and pin the outer ends so the image tiles [-1, 2]
    # exactly despite rounding.
    us = [to_u(bp) for bp in spec.coeff.breakpoints]
    us[0] = -1.0
    us[-1] = 2.0
    new_pieces = []
    for i, piece in enumerate(spec.pieces):
        u0, u1 = us[i], us[i + 1]
        if isinstance(piece.q, float):
            q_new: QSpec = piece.q * scale
        else:
            nodes = [(to_u(xv), qv * scale) for (xv, qv) in piece.q]
            nodes[0] = (u0, nodes[0][1])
            nodes[-1] = (u1, nodes[-1][1])
            q_new = tuple(nodes)
        new_pieces.append(Piece(u0, u1, piece.w * scale, q_new))
    coeff = PiecewiseCoefficient(tuple(new_pieces))
    return ProblemSpec(coeff, spec.alpha, spec.beta)


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------

def _q_to_json(q: QSpec) -> dict:
    if isinstance(q, float):
        return {"const": q}
    return {"table": [[x, v] for (x, v) in q]}


def _q_from_json(obj: object) -> QSpec | object:
    if isinstance(obj, dict):
        if set(obj) == {"const"}:
            return obj["const"]
        if set(obj) == {"table"}:
            return obj["table"]
        raise InvalidProblemError(
            f"q object must have exactly one of 'const' or 'table', got {sorted(obj)}")
    raise InvalidProblemError(f"q entry must be an object, got {type(obj).__name__}")


def problem_to_dict(spec: ProblemSpec) -> dict:
    return {
        "interval": [spec.a, spec.b],
        "alpha": spec.alpha,
        "beta": spec.beta,
        "pieces": [
            {"x0": p.x0, "x1": p.x1, "w": p.w, "q": _q_to_json(p.q)}
            for p in spec.pieces
        ],
    }


def problem_from_dict(data: object) -> ProblemSpec:
    _require(isinstance(data, dict), "problem document must be a JSON object")
    assert isinstance(data, dict)
    unknown = set(data) - {"interval", "alpha", "beta", "pieces"}
    _require(not unknown, f"unknown problem keys: {sorted(unknown)}")
    _require("pieces" in data, "problem document lacks 'pieces'")
    rows = data["pieces"]
    _require(isinstance(rows, list) and rows, "'pieces' must be a nonempty list")
    pieces = []
    for row in rows:
        _require(isinstance(row, dict), "each piece must be an object")
        missing = {"x0", "x1", "w", "q"} - set(row)
        _require(not missing, f"piece lacks keys: {sorted(missing)}")
        extra = set(row) - {"x0", "x1", "w", "q"}
        _require(not extra, f"unknown piece keys: {sorted(extra)}")
        pieces.append(Piece(row["x0"], row["x1"], row["w"], _q_from_json(row["q"])))
    coeff = PiecewiseCoefficient(tuple(pieces))
    if "interval" in data:
        iv = data["interval"]
        _require(isinstance(iv, list) and len(iv) == 2,
                 "'interval' must be a 2-element list")
        lo = _as_finite_float(iv[0], "interval start")
        hi = _as_finite_float(iv[1], "interval end")
        _require(lo == coeff.a and hi == coeff.b,
                 f"'interval' [{lo!r}, {hi!r}] does not match the piece tiling "
                 f"[{coeff.a!r}, {coeff.b!r}]")
    return ProblemSpec(coeff, data.get("alpha", 0.0), data.get("beta", 0.0))


def load_problem(path: str) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidProblemError(f"problem file {path!r} is not valid JSON: {exc}") from exc
    return problem_from_dict(data)


def save_problem(spec: ProblemSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(spec), fh, indent=2)
        fh.write("\n")

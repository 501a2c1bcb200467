"""Record envelopes of the Goldbach comet and ``exp(alpha * n**beta)`` fits.

A *lower record* is a point strictly below every point to its right; an
*upper record* is strictly above every point to its left. The last point
of a series is always a lower record and the first always an upper record,
since their dominance conditions are vacuous.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InsufficientDataError
from .partition import PartitionSeries

MAX_ITERATIONS = 100
STEP_TOL = 1e-10
DEFAULT_N_MIN = 16
# Relative nudge applied to a calibrated alpha so the bound holds strictly
# at the point that determines it, despite rounding in alpha * n**beta.
CALIBRATION_SLACK = 1e-12
DEFAULT_SCALES = (10.0, 100.0, 1000.0)
POINTS_PER_DECADE = 20


class RecordPoint(NamedTuple):
    n: int
    g: int


@dataclass(frozen=True)
class Envelope:
    lower: list[RecordPoint]
    upper: list[RecordPoint]
    source_range: tuple[int, int]

    def side(self, side: str) -> list[RecordPoint]:
        if side == "lower":
            return self.lower
        if side == "upper":
            return self.upper
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")

    def to_json(self) -> str:
        doc = {
            "source_range": list(self.source_range),
            "lower": [[p.n, p.g] for p in self.lower],
            "upper": [[p.n, p.g] for p in self.upper],
        }
        return json.dumps(doc) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Envelope:
        doc = json.loads(text)
        try:
            return cls(
                lower=[RecordPoint(int(n), int(g)) for n, g in doc["lower"]],
                upper=[RecordPoint(int(n), int(g)) for n, g in doc["upper"]],
                source_range=(int(doc["source_range"][0]), int(doc["source_range"][1])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"not an envelope document: {exc}") from None


def extract_envelope(series: PartitionSeries) -> Envelope:
    if series.range_end - series.range_start < 8:
        raise DomainError("envelope extraction needs a series spanning at least 8")
    g = series.counts.astype(np.int64)
    ns = series.ns

    # strict minimum of everything to the right of each point
    right_min = np.empty_like(g)
    right_min[-1] = np.iinfo(np.int64).max
    right_min[:-1] = np.minimum.accumulate(g[::-1])[::-1][1:]
    lower_idx = np.flatnonzero(g < right_min)

    left_max = np.empty_like(g)
    left_max[0] = -1
    left_max[1:] = np.maximum.accumulate(g)[:-1]
    upper_idx = np.flatnonzero(g > left_max)

    return Envelope(
        lower=[RecordPoint(int(ns[i]), int(g[i])) for i in lower_idx],
        upper=[RecordPoint(int(ns[i]), int(g[i])) for i in upper_idx],
        source_range=(series.range_start, series.range_end),
    )


@dataclass(frozen=True)
class FitResult:
    """``ln G ~ alpha * n**beta`` fitted by damped Gauss-Newton."""

    alpha: float
    beta: float
    rms_log_residual: float
    points_used: int
    converged: bool
    iterations: int
    objective_trace: tuple = field(default=(), repr=False, compare=False)

    domain = (0.0, math.inf)

    def log_value(self, x):
        return self.alpha * np.power(x, self.beta)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "rms_log_residual": self.rms_log_residual,
            "points_used": self.points_used,
            "converged": self.converged,
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> FitResult:
        try:
            return cls(
                alpha=float(doc["alpha"]),
                beta=float(doc["beta"]),
                rms_log_residual=float(doc["rms_log_residual"]),
                points_used=int(doc["points_used"]),
                converged=bool(doc["converged"]),
                iterations=int(doc["iterations"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"not a fit document: {exc}") from None


def _objective(alpha, beta, ns, log_g):
    r = log_g - alpha * np.power(ns, beta)
    return float(r @ r)


def fit_log_exponential(ns, log_g) -> FitResult:
    """Least-squares fit of ``log_g ~ alpha * ns**beta``.

    Starts from the straight-line fit of ``ln(log_g)`` against ``ln(ns)``.
    Gauss-Newton steps are halved until the objective does not increase, so
    accepted iterates never move uphill. Stops when the relative parameter
    change drops below ``STEP_TOL`` or after ``MAX_ITERATIONS``.
    """
    ns = np.asarray(ns, dtype=np.float64)
    log_g = np.asarray(log_g, dtype=np.float64)
    if ns.size < 3:
        raise InsufficientDataError(f"need at least 3 points with G >= 2, got {ns.size}")
    if np.any(log_g <= 0) or np.any(ns <= 0):
        raise DomainError("fit needs n > 0 and ln G > 0 at every point")

    x = np.log(ns)
    slope, intercept = np.polyfit(x, np.log(log_g), 1)
    alpha, beta = math.exp(float(intercept)), float(slope)
    obj = _objective(alpha, beta, ns, log_g)
    trace = [obj]
    converged = False
    it = 0
    while it < MAX_ITERATIONS:
        it += 1
        pw = np.power(ns, beta)
        r = log_g - alpha * pw
        jac = np.column_stack([pw, alpha * pw * x])
        step, *_ = np.linalg.lstsq(jac, r, rcond=None)
        lam = 1.0
        accepted = False
        for _ in range(60):
            a_new = alpha + lam * float(step[0])
            b_new = beta + lam * float(step[1])
            new_obj = _objective(a_new, b_new, ns, log_g)
            if new_obj <= obj:
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            break
        change = max(abs(a_new - alpha) / abs(a_new), abs(b_new - beta) / max(abs(b_new), 1e-300))
        alpha, beta, obj = a_new, b_new, new_obj
        trace.append(obj)
        if change < STEP_TOL:
            converged = True
            break
    return FitResult(
        alpha=alpha,
        beta=beta,
        rms_log_residual=math.sqrt(obj / ns.size),
        points_used=int(ns.size),
        converged=bool(converged and alpha > 0),
        iterations=it,
        objective_trace=tuple(trace),
    )


def fit_exponential(points, min_g: int = 2) -> FitResult:
    """Fit ``G ~ exp(alpha * n**beta)`` to record points with ``g >= max(min_g, 2)``."""
    floor = max(int(min_g), 2)
    pts = [(float(n), float(g)) for n, g in points if g >= floor]
    if len(pts) < 3:
        raise InsufficientDataError(
            f"need at least 3 points with g >= {floor}, got {len(pts)}"
        )
    ns = np.array([p[0] for p in pts])
    gs = np.array([p[1] for p in pts])
    return fit_log_exponential(ns, np.log(gs))


def _calibrate(fit: FitResult, ns, gs, side: str, n_min: int) -> FitResult:
    ns = np.asarray(ns, dtype=np.float64)
    gs = np.asarray(gs, dtype=np.float64)
    keep = ns >= n_min
    if not keep.any():
        raise InsufficientDataError(f"no points with n >= {n_min} to calibrate on")
    ns, gs = ns[keep], gs[keep]
    if np.any(gs < 2):
        bad = int(ns[np.argmax(gs < 2)])
        raise DomainError(f"calibration needs G(n) >= 2 for n >= n_min; G({bad}) < 2")
    ratio = np.log(gs) / np.power(ns, fit.beta)
    if side == "lower":
        alpha = float(ratio.min()) * (1.0 - CALIBRATION_SLACK)
    elif side == "upper":
        alpha = float(ratio.max()) * (1.0 + CALIBRATION_SLACK)
    else:
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    return replace(fit, alpha=alpha)


def calibrate(fit: FitResult, series: PartitionSeries, side: str, n_min: int = DEFAULT_N_MIN) -> FitResult:
    """Rescale alpha so the curve bounds every even n >= n_min of the series.

    Lower side: ``alpha <- min ln G(n) / n**beta``; upper side uses the max.
    """
    return _calibrate(fit, series.ns, series.counts, side, n_min)


def calibrate_on_points(fit: FitResult, points, side: str, n_min: int = DEFAULT_N_MIN) -> FitResult:
    """Calibrate against record points only.

    For the lower side this matches :func:`calibrate` on the source series
    (the minimum of ``ln G / n**beta`` over n >= n_min sits on a lower
    record). For the upper side it can differ when the maximum falls on a
    point shadowed by an upper record below ``n_min``.
    """
    pts = list(points)
    return _calibrate(fit, [p[0] for p in pts], [p[1] for p in pts], side, n_min)


@dataclass(frozen=True)
class BoundingReport:
    side: str
    n_min: int
    count: int
    violations: list[int]


def bounding_violations(fit: FitResult, series: PartitionSeries, side: str, n_min: int = DEFAULT_N_MIN) -> BoundingReport:
    """Even n >= n_min where the fitted curve fails to bound G(n).

    Lower side: ``exp(alpha n**beta) >= G(n)``; upper: ``<= G(n)``. The
    comparison is done in log space.
    """
    ns = series.ns
    keep = ns >= n_min
    ns = ns[keep]
    with np.errstate(divide="ignore"):
        log_g = np.log(series.counts[keep].astype(np.float64))
    curve = fit.alpha * np.power(ns.astype(np.float64), fit.beta)
    if side == "lower":
        bad = curve >= log_g
    elif side == "upper":
        bad = curve <= log_g
    else:
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    hits = ns[bad].tolist()
    return BoundingReport(side=side, n_min=int(n_min), count=len(hits), violations=hits)


class EnvelopeInterpolant:
    """Record points joined linearly in (ln n, ln g)."""

    def __init__(self, points):
        pts = list(points)
        if len(pts) < 2:
            raise InsufficientDataError("interpolant needs at least 2 record points")
        self._ln_n = np.log(np.array([p[0] for p in pts], dtype=np.float64))
        self._ln_g = np.log(np.array([p[1] for p in pts], dtype=np.float64))
        if np.any(np.diff(self._ln_n) <= 0):
            raise DomainError("record points must be strictly ascending in n")
        self.domain = (float(pts[0][0]), float(pts[-1][0]))

    def log_value(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.domain
        outside = (x < lo) | (x > hi)
        if np.any(outside):
            bad = float(np.atleast_1d(x)[np.atleast_1d(outside)][0])
            raise DomainError(f"x={bad:g} lies outside the envelope domain [{lo:g}, {hi:g}]")
        return np.interp(np.log(x), self._ln_n, self._ln_g)


class PowerLaw:
    """``f(x) = c * x**k``."""

    domain = (0.0, math.inf)

    def __init__(self, k: float, c: float = 1.0):
        self.k = k
        self.c = c

    def log_value(self, x):
        return math.log(self.c) + self.k * np.log(x)


class _LogCallable:
    domain = (0.0, math.inf)

    def __init__(self, fn):
        self.log_value = fn


@dataclass(frozen=True)
class ResidualReport:
    """How far ``f(ax)/f(a) = f(bx)/f(b)`` is from holding, in log space."""

    a: float
    b: float
    points: int
    max_abs: float
    mean_abs: float
    max_rel: float
    mean_rel: float
    argmax_x: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def functional_residual(f, a: float, b: float, xs) -> ResidualReport:
    """Residual ``|[ln f(ax) - ln f(a)] - [ln f(bx) - ln f(b)]|`` over ``xs``.

    ``f`` is a :class:`FitResult`, :class:`EnvelopeInterpolant`,
    :class:`PowerLaw`, or a plain callable returning ``ln f(x)``. The
    relative figure divides by ``|ln f(ax) - ln f(a)|``; where that is zero
    the relative residual is 0 if the residual is also 0, else inf.
    """
    if a <= 0 or b <= 0:
        raise DomainError(f"a and b must be positive, got a={a}, b={b}")
    if not hasattr(f, "log_value"):
        f = _LogCallable(f)
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0 or np.any(xs <= 0):
        raise DomainError("xs must be a non-empty set of positive reals")
    lo, hi = f.domain
    for x in xs.tolist():
        for v in (a * x, b * x):
            if not lo <= v <= hi:
                raise DomainError(f"x={x:g} maps to {v:g} outside the domain [{lo:g}, {hi:g}]")
    for v in (a, b):
        if not lo <= v <= hi:
            raise DomainError(f"scale {v:g} lies outside the domain [{lo:g}, {hi:g}]")

    left = f.log_value(a * xs) - f.log_value(a)
    right = f.log_value(b * xs) - f.log_value(b)
    res = np.abs(left - right)
    denom = np.abs(left)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(denom > 0, res / denom, np.where(res == 0, 0.0, np.inf))
    i = int(np.argmax(res))
    return ResidualReport(
        a=float(a),
        b=float(b),
        points=int(xs.size),
        max_abs=float(res.max()),
        mean_abs=float(res.mean()),
        max_rel=float(rel.max()),
        mean_rel=float(rel.mean()),
        argmax_x=float(xs[i]),
    )


def log_grid(x_lo: float, x_hi: float, per_decade: int = POINTS_PER_DECADE) -> np.ndarray:
    """Points ``10**(j/per_decade)`` lying in ``[x_lo, x_hi]``."""
    if x_lo <= 0 or x_hi < x_lo:
        raise DomainError(f"bad grid bounds [{x_lo}, {x_hi}]")
    j_lo = math.ceil(per_decade * math.log10(x_lo) - 1e-9)
    j_hi = math.floor(per_decade * math.log10(x_hi) + 1e-9)
    xs = 10.0 ** (np.arange(j_lo, j_hi + 1) / per_decade)
    return xs[(xs >= x_lo * (1 - 1e-12)) & (xs <= x_hi * (1 + 1e-12))].clip(x_lo, x_hi)


def default_grid(f, a: float, b: float, domain_hi: float | None = None) -> np.ndarray:
    """Log grid from x = 1 up to where ``max(a, b) * x`` leaves the domain."""
    hi = f.domain[1] if domain_hi is None else domain_hi
    if not math.isfinite(hi):
        raise DomainError("an unbounded domain needs an explicit upper limit")
    return log_grid(1.0, hi / max(a, b))

"""Time series ``f(t) = <w|A^t|v>``, their periodicity, growth rates and norm bounds.

Series are built by applying ``A`` to ``|v>`` once per step, so the
exact backend reproduces the closed forms to the last digit.  Random
vectors come from the pinned SplitMix64/Box-Muller stream in
:mod:`pseudopower.rng`; ``w`` takes the first ``dim`` normals and ``v``
the next ``dim``, each normalised to unit 2-norm in the target backend.
"""
from __future__ import annotations

import csv
import decimal
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from gmpy2 import mpq

from .errors import DimensionError, PrecisionError, ValidationError
from .linalg import Matrix, Vector, identity, mat_mul, matvec, s_max
from .precision import ComplexScalar, Precision
from .rng import normal_samples
from .spectral import EigenSystem, eigenvector_matrix_condition

__all__ = [
    "VectorChoice",
    "TimeSeries",
    "PeriodicityReport",
    "GrowthFit",
    "BoundTrack",
    "make_vectors",
    "evolve_f",
    "periodicity_check",
    "growth_rate_fit",
    "fit_log_abs",
    "default_fit_window",
    "norm_bounds_track",
    "decimal_string",
]

VECTOR_KINDS = ("special", "random", "explicit")


@dataclass(frozen=True)
class VectorChoice:
    """Which ``(w, v)`` pair to use: ``special``, ``random`` (with seed) or ``explicit``."""

    kind: str = "special"
    seed: int = 0
    w: Optional[Vector] = None
    v: Optional[Vector] = None

    def __post_init__(self):
        if self.kind not in VECTOR_KINDS:
            raise ValidationError(f"unknown vector choice {self.kind!r}; choose from {', '.join(VECTOR_KINDS)}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        if self.kind == "explicit" and (self.w is None or self.v is None):
            raise ValidationError("explicit vector choice needs both w and v")

    @classmethod
    def special(cls):
        return cls("special")

    @classmethod
    def random(cls, seed: int):
        return cls("random", int(seed))

    @classmethod
    def explicit(cls, w: Vector, v: Vector):
        return cls("explicit", 0, w, v)

    def describe(self) -> str:
        if self.kind == "random":
            return f"random(seed={self.seed})"
        return self.kind


def _normalised(values, p: Precision) -> Vector:
    with p.context():
        xs = [p.convert(x) for x in values]
        nrm = p.sqrt(sum(x * x for x in xs[1:]) + xs[0] * xs[0])
        xs = [x / nrm for x in xs]
    return Vector(np.array(xs, dtype=p.dtype), None, p)


def make_vectors(choice: VectorChoice, dim: int, precision: Precision):
    """Return ``(w, v)`` of length ``dim`` in ``precision``.

    ``special`` gives all-ones ``w`` and ``v = e_1`` (not normalised);
    ``random`` gives i.i.d. standard normal components scaled to unit norm.
    """
    if dim < 1:
        raise DimensionError("dimension must be positive")
    if choice.kind == "special":
        return Vector.ones(dim, precision), Vector.basis(dim, 0, precision)
    if choice.kind == "random":
        if precision.is_exact:
            raise PrecisionError("normalised random vectors are irrational; use a float backend")
        z = normal_samples(choice.seed, 2 * dim)
        return _normalised(z[:dim], precision), _normalised(z[dim:], precision)
    w, v = choice.w, choice.v
    if w.dim != dim or v.dim != dim:
        raise DimensionError(f"explicit vectors have lengths {w.dim}, {v.dim}; matrix needs {dim}")
    return w.astype(precision), v.astype(precision)


def decimal_string(x, digits: int = 30) -> str:
    """Decimal rendering of a rational with ``digits`` significant digits."""
    q = mpq(x)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        d = decimal.Decimal(int(q.numerator)) / decimal.Decimal(int(q.denominator))
    return str(d)


def _decimal_abs(z: ComplexScalar, digits: int) -> str:
    a2 = mpq(z.abs2())
    with decimal.localcontext() as ctx:
        ctx.prec = digits + 5
        d = decimal.Decimal(int(a2.numerator)) / decimal.Decimal(int(a2.denominator))
        r = d.sqrt()
        ctx.prec = digits
        return str(+r)


@dataclass(frozen=True)
class TimeSeries:
    """Samples ``(t, f(t))`` with strictly increasing integer ``t``."""

    times: tuple
    values: tuple
    precision: Precision
    vectors: VectorChoice = field(default_factory=VectorChoice)
    model: object = None

    def __post_init__(self):
        if not self.times:
            raise ValidationError("time series must be non-empty")
        if len(self.times) != len(self.values):
            raise ValidationError("times and values differ in length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValidationError("times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    def value_at(self, t: int) -> ComplexScalar:
        return self.values[self._index(t)]

    def _index(self, t):
        i = t - self.times[0]
        if 0 <= i < len(self.times) and self.times[i] == t:
            return i
        try:
            return self.times.index(t)
        except ValueError:
            raise ValidationError(f"t={t} not in series") from None

    @property
    def abs_values(self) -> list[float]:
        return [math.exp(z.log_abs()) if z.abs2() != 0 else 0.0 for z in self.values]

    @property
    def log_abs(self) -> list[float]:
        return [z.log_abs() for z in self.values]

    def _fmt(self, x, digits):
        p = self.precision
        if p.is_exact:
            return decimal_string(x, digits)
        return p.format(x)

    def _fmt_abs(self, z, digits):
        p = self.precision
        if p.is_exact:
            return _decimal_abs(z, digits)
        with p.context():
            return p.format(p.sqrt(z.abs2()))

    def to_csv(self, digits: int = 30, rational_columns: bool = False, reference=None) -> str:
        """CSV ``t,re,im,abs,log_abs``; optional exact ``re_pq,im_pq`` and reference columns.

        ``reference`` maps t to a comparison value; it adds ``closed_form`` and
        ``deviation`` columns.
        """
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["t", "re", "im", "abs", "log_abs"]
        exact_cols = rational_columns and self.precision.is_exact
        if exact_cols:
            head += ["re_pq", "im_pq"]
        if reference is not None:
            head += ["closed_form", "deviation"]
        w.writerow(head)
        for t, z in zip(self.times, self.values):
            row = [
                str(t),
                self._fmt(z.re, digits),
                self._fmt(z.im, digits),
                self._fmt_abs(z, digits),
                repr(z.log_abs()),
            ]
            if exact_cols:
                row += [str(mpq(z.re)), str(mpq(z.im))]
            if reference is not None:
                ref = reference(t)
                with self.precision.context():
                    dev = ComplexScalar(z.re - ref, z.im)
                row += [self.precision.format(ref), self._fmt_abs(dev, digits)]
            w.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        p = self.precision
        d = {
            "precision": str(p),
            "vectors": self.vectors.describe(),
            "t": list(self.times),
            "values": [[p.format(z.re), p.format(z.im)] for z in self.values],
        }
        if self.model is not None and hasattr(self.model, "to_dict"):
            d["model"] = self.model.to_dict()
        return d


def evolve_f(a: Matrix, choice: VectorChoice, t_max: int, *, model=None) -> TimeSeries:
    """``f(t) = <w|A^t|v>`` for ``t = 0..t_max`` by repeated matrix-vector products.

    The bra conjugates ``w``; for real vectors this is the plain sum of products.
    """
    if not a.is_square:
        raise DimensionError("evolve_f needs a square matrix")
    if t_max < 1:
        raise ValidationError("t_max must be at least 1")
    p = a.precision
    w, v = make_vectors(choice, a.n_rows, p)
    bra = w.conjugate()
    x = v
    values = [bra.dot(x)]
    for _ in range(t_max):
        x = matvec(a, x)
        values.append(bra.dot(x))
    return TimeSeries(tuple(range(t_max + 1)), tuple(values), p, choice, model)


def _abs_float(z: ComplexScalar) -> float:
    a2 = z.abs2()
    if a2 == 0:
        return 0.0
    return math.exp(z.log_abs())


@dataclass(frozen=True)
class PeriodicityReport:
    """``max_deviation = max_t |f(t+T) - f(t)|``; ``max_antideviation`` uses ``f(t+T) + f(t)``."""

    period: int
    max_deviation: float
    max_antideviation: float
    max_abs_deviation: float
    exact_zero: bool
    peaks: tuple

    @property
    def periodic(self) -> bool:
        return self.exact_zero


def periodicity_check(series: TimeSeries, T: int) -> PeriodicityReport:
    """Compare ``f(t+T)`` with ``f(t)`` over every pair inside the series.

    ``peaks`` lists, for each complete period, the ``t`` where ``|f|`` is largest.
    """
    if T < 1:
        raise ValidationError("period must be positive")
    t0, t1 = series.times[0], series.times[-1]
    if t1 - t0 < 2 * T or len(series) != t1 - t0 + 1:
        raise ValidationError(f"periodicity check needs a contiguous series spanning 2T = {2 * T} steps")
    p = series.precision
    vals = series.values
    dev = anti = absdev = 0.0
    exact_zero = True
    with p.context():
        for i in range(len(vals) - T):
            a, b = vals[i], vals[i + T]
            d = b - a
            if d.abs2() != 0:
                exact_zero = False
            dev = max(dev, _abs_float(d))
            anti = max(anti, _abs_float(b + a))
            absdev = max(absdev, abs(_abs_float(b) - _abs_float(a)))
    peaks = []
    logs = series.log_abs
    for start in range(0, len(vals) - T + 1, T):
        window = logs[start : start + T]
        peaks.append(t0 + start + int(np.argmax(window)))
    return PeriodicityReport(T, dev, anti, absdev, exact_zero, tuple(peaks))


def default_fit_window(M: int):
    """``[ceil(0.1 M), floor(0.9 M)]``: the growth phase without t=0 and the peak flip."""
    lo, hi = math.ceil(0.1 * M), math.floor(0.9 * M)
    if hi <= lo:
        raise ValidationError(f"M={M} too small for a default fit window")
    return lo, hi


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    residual: float
    t0: int
    t1: int
    n_points: int
    n_excluded: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def growth_rate_fit(series: TimeSeries, t0: int, t1: int, *, exclude_zeros: bool = False) -> GrowthFit:
    """Least-squares line through ``(t, ln|f(t)|)`` for ``t0 <= t <= t1``.

    ``residual`` is the root-mean-square deviation from the line.  Zeros in the
    window are an error unless ``exclude_zeros`` is set, in which case they are
    dropped and counted.
    """
    pairs = [(t, z.log_abs()) for t, z in zip(series.times, series.values)]
    return fit_log_abs(pairs, t0, t1, exclude_zeros=exclude_zeros)


def fit_log_abs(pairs, t0: int, t1: int, *, exclude_zeros: bool = False) -> GrowthFit:
    """The fit of :func:`growth_rate_fit` on raw ``(t, ln|f(t)|)`` pairs (``-inf`` for zeros)."""
    if not t0 < t1:
        raise ValidationError(f"fit window needs t0 < t1, got [{t0}, {t1}]")
    pairs = list(pairs)
    if not pairs or t0 < pairs[0][0] or t1 > pairs[-1][0]:
        span = f"[{pairs[0][0]}, {pairs[-1][0]}]" if pairs else "(empty)"
        raise ValidationError(f"fit window [{t0}, {t1}] outside series {span}")
    ts, ys, skipped = [], [], 0
    for t, la in pairs:
        if t < t0 or t > t1:
            continue
        if la == -math.inf:
            if not exclude_zeros:
                raise ValidationError(f"f({t}) = 0 inside the fit window; pass exclude_zeros to drop it")
            skipped += 1
            continue
        ts.append(float(t))
        ys.append(float(la))
    if len(ts) < 2:
        raise ValidationError("fit window holds fewer than two usable points")
    x = np.array(ts)
    y = np.array(ys)
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    res = float(np.sqrt(np.mean((design @ np.array([slope, intercept]) - y) ** 2)))
    return GrowthFit(float(slope), float(intercept), res, t0, t1, len(ts), skipped)


@dataclass(frozen=True)
class BoundTrack:
    """Rows ``(t, ||A^t||, rho^t, ||A||^t, kappa rho^t)`` as floats."""

    rows: tuple
    kappa: float
    rho: float
    norm_a: float

    def violations(self, rtol: float = 1e-8) -> list[int]:
        """Times where ``rho^t <= ||A^t|| <= min(||A||^t, kappa rho^t)`` fails beyond ``rtol``."""
        bad = []
        for t, nat, rt, nt, kt in self.rows:
            if rt > nat * (1 + rtol) or nat > nt * (1 + rtol) or nat > kt * (1 + rtol):
                bad.append(t)
        return bad

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "norm_At", "rho_t", "normA_pow_t", "kappa_rho_t"])
        for row in self.rows:
            w.writerow([str(row[0])] + [repr(v) for v in row[1:]])
        return buf.getvalue()

    def to_dict(self) -> dict:
        keys = ("t", "norm_At", "rho_t", "normA_pow_t", "kappa_rho_t")
        return {
            "kappa": self.kappa,
            "rho": self.rho,
            "norm_A": self.norm_a,
            "rows": [dict(zip(keys, r)) for r in self.rows],
        }


def norm_bounds_track(a: Matrix, es: EigenSystem, t_max: int) -> BoundTrack:
    """Spectral norms of ``A^t`` against ``rho^t``, ``||A||^t`` and ``kappa rho^t``.

    ``kappa = s_max(V)/s_min(V)`` for the right eigenvector matrix of ``es``.
    """
    p = a.precision
    if p.is_exact:
        raise PrecisionError("norm bounds need a float backend")
    if es.right.n_rows != a.n_rows:
        raise DimensionError("eigensystem does not match the matrix size")
    if t_max < 0:
        raise ValidationError("t_max must be non-negative")
    kappa = float(eigenvector_matrix_condition(es))
    rho = float(es.spectral_radius)
    norm_a = float(s_max(a))
    rows = []
    power = identity(a.n_rows, p)
    for t in range(t_max + 1):
        if t:
            power = mat_mul(power, a)
        nat = float(s_max(power))
        rows.append((t, nat, rho**t, norm_a**t, kappa * rho**t))
    return BoundTrack(tuple(rows), kappa, rho, norm_a)

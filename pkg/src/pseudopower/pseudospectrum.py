"""Pseudospectrum level maps and the analytic symbol curves that bound them.

A map stores ``log10 s_min(z I - A)`` at the nodes of a rectangular grid;
any epsilon-pseudospectrum is the sublevel set ``{level <= log10 eps}``.
Nodes are independent and may be spread over worker processes; the map is
assembled by node index, so the result does not depend on worker count or
completion order.
"""
from __future__ import annotations

import csv
import io
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .errors import ConvergenceError, PrecisionError, ValidationError
from .linalg import Matrix, s_min
from .models import ModelSpec

__all__ = [
    "GridSpec",
    "PseudospectrumMap",
    "SymbolCurve",
    "SYMBOL_FAMILIES",
    "MACHINE_FLOOR",
    "smin_at",
    "smin_map",
    "symbol_curve",
    "largest_pseudoeigenvalue",
]

SYMBOL_FAMILIES = ("ellipse-B", "circles-A", "circle-ehrenfest")

# below this level a double-precision map says nothing reliable
MACHINE_FLOOR = -14.0


@dataclass(frozen=True)
class GridSpec:
    """Rectangle ``[re_min, re_max] x [im_min, im_max]`` sampled at ``nx x ny`` nodes."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def __post_init__(self):
        for name in ("re_min", "re_max", "im_min", "im_max"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValidationError(f"grid bound {name} must be finite")
            object.__setattr__(self, name, v)
        if not self.re_min < self.re_max:
            raise ValidationError(f"grid needs re_min < re_max, got {self.re_min} >= {self.re_max}")
        if not self.im_min < self.im_max:
            raise ValidationError(f"grid needs im_min < im_max, got {self.im_min} >= {self.im_max}")
        if int(self.nx) < 1 or int(self.ny) < 1:
            raise ValidationError("grid needs nx, ny >= 1")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))

    @classmethod
    def square(cls, half_width=3.0, n=241) -> "GridSpec":
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    @staticmethod
    def _axis(lo, hi, n):
        if n == 1:
            return [lo]
        return [lo + (hi - lo) * i / (n - 1) for i in range(n)]

    @property
    def re_values(self) -> list[float]:
        return self._axis(self.re_min, self.re_max, self.nx)

    @property
    def im_values(self) -> list[float]:
        return self._axis(self.im_min, self.im_max, self.ny)

    def nodes(self):
        """``(i, j, re, im)`` for every node, row-major in ``i``."""
        ims = self.im_values
        for i, x in enumerate(self.re_values):
            for j, y in enumerate(ims):
                yield i, j, x, y

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("re_min", "re_max", "im_min", "im_max", "nx", "ny")}


@dataclass(frozen=True)
class PseudospectrumMap:
    """``levels[i, j] = log10 s_min(z_ij I - A)`` with ``z_ij = re_i + i im_j``.

    ``-inf`` marks nodes where the shifted matrix is numerically singular,
    ``nan`` nodes whose iteration failed; both are also set in ``flagged``,
    as are machine-precision levels below :data:`MACHINE_FLOOR`.
    """

    grid: GridSpec
    levels: np.ndarray
    matrix_id: str
    precision: str
    flagged: np.ndarray = field(default=None)

    def level_at(self, i, j) -> float:
        return float(self.levels[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "log10_smin"])
        for i, j, x, y in self.grid.nodes():
            w.writerow([repr(x), repr(y), repr(float(self.levels[i, j]))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        def enc(v):
            v = float(v)
            return v if math.isfinite(v) else str(v)

        return {
            "matrix_id": self.matrix_id,
            "precision": self.precision,
            "grid": self.grid.to_dict(),
            "levels": [[enc(v) for v in row] for row in self.levels],
            "flagged": [[int(i), int(j)] for i, j in zip(*np.nonzero(self.flagged))],
        }


def _log10(s) -> float:
    if s == 0:
        return -math.inf
    if isinstance(s, float):
        return math.log10(s)
    return float(gmpy2.log10(s))


def smin_at(a: Matrix, z) -> object:
    """``s_min(z I - a)`` for one complex shift ``z``."""
    p = a.precision
    if p.is_exact:
        raise PrecisionError("s_min needs a float backend")
    shifted = a.shift(z)
    arr = shifted.to_complex()
    if p.kind == "machine":
        return float(np.linalg.svd(arr, compute_uv=False)[-1])
    # a double-precision singular vector makes inverse iteration converge in a few steps
    _, _, vh = np.linalg.svd(arr)
    return s_min(shifted, start=vh[-1].conj())


def _node_level(a: Matrix, x: float, y: float):
    p = a.precision
    with p.context():
        z = (p.convert(x), p.convert(y))
    try:
        s = smin_at(a, z)
    except ConvergenceError:
        return math.nan
    return _log10(s)


def _row_levels(args):
    a, i, x, ims = args
    return i, [_node_level(a, x, y) for y in ims]


def smin_map(a: Matrix, grid: GridSpec, *, workers: int = 1, matrix_id: str = "") -> PseudospectrumMap:
    """Evaluate ``log10 s_min(z I - a)`` on every grid node.

    Machine matrices use a full SVD per node; big-float matrices use LU-based
    inverse iteration.  ``workers > 1`` spreads grid rows over processes.
    """
    if not a.is_square:
        raise ValidationError("smin_map needs a square matrix")
    if a.precision.is_exact:
        raise PrecisionError("pseudospectrum maps need a float backend")
    if workers is None or workers < 1:
        workers = os.cpu_count() or 1
    ims = grid.im_values
    jobs = [(a, i, x, ims) for i, x in enumerate(grid.re_values)]
    levels = np.empty((grid.nx, grid.ny), dtype=np.float64)
    if workers == 1 or len(jobs) == 1:
        results = map(_row_levels, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=min(workers, len(jobs)))
        results = pool.map(_row_levels, jobs)
    try:
        for i, row in results:
            levels[i, :] = row
    finally:
        if workers > 1 and len(jobs) > 1:
            pool.shutdown()
    flagged = ~np.isfinite(levels)
    if a.precision.kind == "machine":
        flagged |= levels < MACHINE_FLOOR
    levels.setflags(write=False)
    flagged.setflags(write=False)
    return PseudospectrumMap(grid, levels, matrix_id, str(a.precision), flagged)


@dataclass(frozen=True)
class SymbolCurve:
    """Sampled analytic curve(s); ``branches`` holds one tuple of points per closed curve."""

    family: str
    parameter: float
    phi: tuple
    branches: tuple
    labels: tuple

    @property
    def points(self) -> list[complex]:
        return [z for b in self.branches for z in b]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["phi", "re", "im"])
        for branch in self.branches:
            for ph, z in zip(self.phi, branch):
                w.writerow([repr(ph), repr(z.real), repr(z.imag)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "parameter": self.parameter,
            "phi": list(self.phi),
            "branches": {
                lab: [[z.real, z.imag] for z in b] for lab, b in zip(self.labels, self.branches)
            },
        }


def symbol_curve(family: str, parameter=None, samples: int = 256) -> SymbolCurve:
    """Analytic overlay curves at ``phi = 2 pi k / samples``.

    ``ellipse-B``: ``g e^{-i phi} + e^{i phi}/g``.  ``circles-A``: ``g e^{i phi}``
    and ``e^{-i phi}/g``.  ``circle-ehrenfest``: the circle of radius ``r``
    (default pi/2, the value of alpha*N at alpha = pi/(2N)) for ``i alpha H`` and its
    image under ``exp``, whose largest modulus is ``e^r``.
    """
    if family not in SYMBOL_FAMILIES:
        raise ValidationError(f"unknown symbol family {family!r}; choose from {', '.join(SYMBOL_FAMILIES)}")
    if samples < 1:
        raise ValidationError("samples must be positive")
    if parameter is None:
        parameter = math.pi / 2 if family == "circle-ehrenfest" else 2.0
    par = float(parameter)
    if not par > 0:
        raise ValidationError(f"symbol parameter must be positive, got {parameter}")
    phi = tuple(2 * math.pi * k / samples for k in range(samples))
    e = [complex(math.cos(t), math.sin(t)) for t in phi]
    if family == "ellipse-B":
        branches = ([par * z.conjugate() + z / par for z in e],)
        labels = ("ellipse",)
    elif family == "circles-A":
        branches = ([par * z for z in e], [z.conjugate() / par for z in e])
        labels = ("outer", "inner") if par >= 1 else ("inner", "outer")
    else:
        gen = [1j * par * z for z in e]
        branches = (gen, [complex(np.exp(w)) for w in gen])
        labels = ("generator", "propagator")
    return SymbolCurve(family, par, phi, tuple(tuple(b) for b in branches), labels)


def largest_pseudoeigenvalue(spec: ModelSpec) -> float:
    """Largest modulus of the limiting pseudospectrum of the family's propagator.

    block-transfer: the outer circle radius ``max(g, 1/g)``; toeplitz-b: the
    ellipse's semi-major axis ``g + 1/g``; ehrenfest: ``exp(alpha N)``, i.e.
    ``e^{pi/2}`` at the default alpha; tilted-pauli: 1 at g = 1, otherwise the
    2x2 norm ``max(g, 1/g)`` with a warning (no limiting object exists at size 2).
    """
    f = spec.family
    if f == "block-transfer":
        g = float(spec.g)
        return max(g, 1 / g)
    if f == "toeplitz-b":
        g = float(spec.g)
        return g + 1 / g
    if f == "ehrenfest":
        n = int(spec.n)
        alpha = math.pi / (2 * n) if spec.alpha is None else float(spec.alpha)
        return math.exp(abs(alpha) * n)
    if f == "tilted-pauli":
        g = float(spec.g)
        if g == 1:
            return 1.0
        warnings.warn(
            "tilted Pauli matrix is 2x2; returning its norm max(g, 1/g) as a finite-size bound",
            stacklevel=2,
        )
        return max(g, 1 / g)
    raise ValidationError(f"no analytic pseudospectrum for family {f!r}")

"""Constructors for the matrix families and matrix file I/O."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from gmpy2 import mpq

from .errors import DimensionError, PrecisionError, SingularMatrixError, ValidationError
from .linalg import Matrix, identity, mat_exp_scaled, mat_inverse, mat_mul
from .precision import ComplexScalar, Precision, is_rational

__all__ = [
    "FAMILIES",
    "ModelSpec",
    "build_toeplitz_B",
    "build_block_A",
    "build_ehrenfest_H",
    "build_tilted_pauli",
    "transfer_from_tight_binding",
    "ehrenfest_propagator",
    "build_matrix",
    "propagator",
    "load_matrix",
    "save_matrix",
    "matrix_to_dict",
    "matrix_from_dict",
]

FAMILIES = (
    "block-transfer",
    "toeplitz-b",
    "ehrenfest",
    "tilted-pauli",
    "tight-binding-transfer",
    "external-file",
)
ANALYTIC_FAMILIES = ("block-transfer", "toeplitz-b", "ehrenfest", "tilted-pauli")


def _check_g(g):
    if g == 0:
        raise ValidationError("g must be non-zero")
    if g < 0:
        raise ValidationError("g must be positive")


def _field_g(g, precision):
    _check_g(g)
    return precision.convert(g)


def build_toeplitz_B(M: int, g, precision: Precision) -> Matrix:
    """M x M tridiagonal Toeplitz matrix: ``g`` below the diagonal, ``1/g`` above."""
    if M < 1:
        raise ValidationError("M must be at least 1")
    gg = _field_g(g, precision)
    with precision.context():
        ginv = precision.one / gg
    re = np.empty((M, M), dtype=precision.dtype)
    re[...] = precision.zero
    for j in range(M - 1):
        re[j + 1, j] = gg
        re[j, j + 1] = ginv
    return Matrix(re, None, precision)


def build_block_A(N: int, g, precision: Precision) -> Matrix:
    """N x N matrix ``[[B, I], [-I, 0]]`` with ``B = build_toeplitz_B(N/2, g)``."""
    if N < 2 or N % 2:
        raise ValidationError(f"block-transfer needs even N >= 2, got {N}")
    M = N // 2
    b = build_toeplitz_B(M, g, precision)
    re = np.empty((N, N), dtype=precision.dtype)
    re[...] = precision.zero
    re[:M, :M] = b.re
    one, mone = precision.one, precision.convert(-1)
    for j in range(M):
        re[j, M + j] = one
        re[M + j, j] = mone
    return Matrix(re, None, precision)


def build_ehrenfest_H(N: int, precision: Precision) -> Matrix:
    """Kac-Sylvester matrix: superdiagonal 1..N-1, subdiagonal N-1..1."""
    if N < 2:
        raise ValidationError("Ehrenfest matrix needs N >= 2")
    re = np.empty((N, N), dtype=precision.dtype)
    re[...] = precision.zero
    for i in range(N - 1):
        re[i, i + 1] = precision.convert(i + 1)
        re[i + 1, i] = precision.convert(N - 1 - i)
    return Matrix(re, None, precision)


def build_tilted_pauli(g, precision: Precision) -> Matrix:
    """``[[0, g], [1/g, 0]]``; squares to the identity for every g."""
    gg = _field_g(g, precision)
    with precision.context():
        ginv = precision.one / gg
    return Matrix.from_rows([[0, gg], [ginv, 0]], precision)


def transfer_from_tight_binding(E, h_onsite: Matrix, h_hop: Matrix) -> Matrix:
    """Transfer matrix ``[[h^-1 (E - h0), -h^-1 h^H], [I, 0]]`` of a strip Hamiltonian."""
    if not (h_onsite.is_square and h_hop.is_square) or h_onsite.shape != h_hop.shape:
        raise DimensionError("onsite and hopping blocks must be square and of equal size")
    p = h_hop.precision
    if h_onsite.precision != p:
        raise PrecisionError("onsite and hopping blocks use different precisions")
    W = h_hop.n_rows
    try:
        hinv = mat_inverse(h_hop)
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"hopping block is singular: {exc}") from None
    top_left = mat_mul(hinv, identity(W, p).scale(E) - h_onsite)
    top_right = -mat_mul(hinv, h_hop.H)
    re = np.empty((2 * W, 2 * W), dtype=p.dtype)
    re[...] = p.zero
    re[:W, :W] = top_left.re
    re[:W, W:] = top_right.re
    for i in range(W):
        re[W + i, i] = p.one
    im = None
    if not (top_left.is_real and top_right.is_real):
        im = np.empty_like(re)
        im[...] = p.zero
        im[:W, :W] = top_left.imag_or_zeros()
        im[:W, W:] = top_right.imag_or_zeros()
    return Matrix(re, im, p)


def default_alpha(N: int, precision: Precision):
    """``pi / (2N)``, the rotation that makes ``exp(i alpha H)`` a 4N-th root of identity."""
    with precision.context():
        return precision.pi() / (2 * N)


def ehrenfest_propagator(N: int, precision: Precision, alpha=None, tol=None) -> Matrix:
    """``A = exp(i alpha H)`` for the Ehrenfest matrix, float backends only."""
    if precision.is_exact:
        raise PrecisionError("exp(i alpha H) needs a float backend")
    if alpha is None:
        alpha = default_alpha(N, precision)
    h = build_ehrenfest_H(N, precision)
    if tol is None:
        # best tolerance the mantissa supports, with headroom for ~1000 products
        theta = h.norm_inf() * float(abs(alpha))
        tol = N * 1024 * math.exp(theta) * 2.0 ** (-(precision.bits - 3))
    return mat_exp_scaled(h, ComplexScalar(precision.zero, precision.convert(alpha)), tol)


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of one matrix family.

    ``n`` is the matrix size N (``M`` for ``toeplitz-b``).  ``alpha`` of
    ``None`` means pi/(2N).  Tight-binding blocks are given as matrix JSON
    file paths so the model stays serialisable.
    """

    family: str
    n: Optional[int] = None
    g: object = None
    alpha: Optional[float] = None
    energy: object = 0
    onsite_path: Optional[str] = None
    hop_path: Optional[str] = None
    path: Optional[str] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        f = self.family
        if f in ("block-transfer", "toeplitz-b", "ehrenfest"):
            if self.n is None or int(self.n) < 1:
                raise ValidationError(f"{f} needs a positive size n")
        if f == "block-transfer" and int(self.n) % 2:
            raise ValidationError(f"block-transfer needs even N, got {self.n}")
        if f == "ehrenfest" and int(self.n) < 2:
            raise ValidationError("ehrenfest needs N >= 2")
        if f in ("block-transfer", "toeplitz-b", "tilted-pauli"):
            if self.g is None:
                object.__setattr__(self, "g", mpq(2))
            _check_g(self.g)
        if f == "tight-binding-transfer" and not (self.onsite_path and self.hop_path):
            raise ValidationError("tight-binding-transfer needs onsite_path and hop_path")
        if f == "external-file" and not self.path:
            raise ValidationError("external-file needs a path")

    @property
    def is_analytic(self) -> bool:
        return self.family in ANALYTIC_FAMILIES

    @property
    def M(self) -> int:
        return int(self.n) // 2 if self.family == "block-transfer" else int(self.n)

    @property
    def period(self) -> Optional[int]:
        """Known period of ``propagator`` powers (sign flip included for ehrenfest)."""
        if self.family == "block-transfer":
            return int(self.n) + 2
        if self.family == "tilted-pauli":
            return 2
        if self.family == "ehrenfest":
            return 2 * int(self.n)
        return None

    def check_precision(self, precision: Precision):
        """Reject exact arithmetic for irrational parameters or transcendental families."""
        if not precision.is_exact:
            return
        if self.family == "ehrenfest" and self.alpha is not None:
            raise PrecisionError("ehrenfest propagator is transcendental; use a float backend")
        for name in ("g", "energy"):
            v = getattr(self, name)
            if v is not None and not is_rational(v):
                raise PrecisionError(f"exact precision needs rational {name}, got {v!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("g", "energy", "alpha"):
            if d[k] is not None and not isinstance(d[k], (int, float, str)):
                d[k] = str(d[k])
        return {k: v for k, v in d.items() if v is not None}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        from .precision import parse_rational_or_float

        d = dict(d)
        for k in ("g", "energy"):
            if isinstance(d.get(k), str):
                d[k] = parse_rational_or_float(d[k])
        return cls(**d)

    def describe(self) -> str:
        bits = [f"family={self.family}"]
        for k in ("n", "g", "alpha", "energy", "path"):
            v = getattr(self, k)
            if v is not None and not (k == "energy" and self.family != "tight-binding-transfer"):
                bits.append(f"{k}={v}")
        return " ".join(bits)


def build_matrix(spec: ModelSpec, precision: Precision) -> Matrix:
    """The family's defining matrix (``H`` itself for ehrenfest)."""
    spec.check_precision(precision)
    f = spec.family
    if f == "block-transfer":
        return build_block_A(int(spec.n), spec.g, precision)
    if f == "toeplitz-b":
        return build_toeplitz_B(int(spec.n), spec.g, precision)
    if f == "ehrenfest":
        return build_ehrenfest_H(int(spec.n), precision)
    if f == "tilted-pauli":
        return build_tilted_pauli(spec.g, precision)
    if f == "tight-binding-transfer":
        h0 = load_matrix(spec.onsite_path).astype(precision)
        h1 = load_matrix(spec.hop_path).astype(precision)
        return transfer_from_tight_binding(spec.energy, h0, h1)
    m = load_matrix(spec.path)
    return m.astype(precision)


def propagator(spec: ModelSpec, precision: Precision) -> Matrix:
    """The matrix whose powers drive the dynamics (``exp(i alpha H)`` for ehrenfest)."""
    if spec.family == "ehrenfest":
        spec.check_precision(precision)
        alpha = None if spec.alpha is None else precision.convert(spec.alpha)
        return ehrenfest_propagator(int(spec.n), precision, alpha=alpha)
    return build_matrix(spec, precision)


# -- JSON matrix files -------------------------------------------------------------


def matrix_to_dict(m: Matrix) -> dict:
    p = m.precision
    im = m.imag_or_zeros()
    entries = [[p.format(r), p.format(i)] for r, i in zip(m.re.ravel(), im.ravel())]
    return {"n_rows": m.n_rows, "n_cols": m.n_cols, "precision": str(p), "entries": entries}


def matrix_from_dict(d: dict) -> Matrix:
    try:
        n_rows, n_cols = int(d["n_rows"]), int(d["n_cols"])
        p = Precision.parse(d["precision"])
        entries = d["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix document: {exc}") from None
    if n_rows < 1 or n_cols < 1:
        raise DimensionError("n_rows and n_cols must be positive")
    if not isinstance(entries, list) or len(entries) != n_rows * n_cols:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise DimensionError(f"expected {n_rows * n_cols} entries, got {got}")
    re = np.empty(n_rows * n_cols, dtype=p.dtype)
    im = np.empty_like(re)
    for k, e in enumerate(entries):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise ValidationError(f"entry {k} is not a [re, im] pair")
        re[k] = p.convert(_entry_value(e[0], p))
        im[k] = p.convert(_entry_value(e[1], p))
    re = re.reshape(n_rows, n_cols)
    im = im.reshape(n_rows, n_cols)
    return Matrix(re, None if not np.any(im != 0) else im, p)


def _entry_value(v, p):
    if isinstance(v, str):
        return v
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"bad matrix entry {v!r}")
    if p.is_exact and isinstance(v, float) and not v.is_integer():
        raise PrecisionError(f"exact matrix file holds non-rational entry {v!r}; write it as 'p/q'")
    return v


def save_matrix(m: Matrix, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(m)) + "\n")


def load_matrix(path) -> Matrix:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return matrix_from_dict(doc)

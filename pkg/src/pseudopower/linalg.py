"""Dense complex matrices and vectors over the three scalar backends.

Entries are kept as separate real and imaginary numpy arrays.  The
machine backend uses ``float64`` arrays; the exact and big-float backends
use object arrays of ``gmpy2.mpq`` / ``gmpy2.mpfr``, so numpy's object
loops do the arithmetic and MPFR rounds each operation.  A ``None``
imaginary part means the matrix is known to be real, which keeps the
common real cases (every model matrix except ``exp(i a H)``) at one real
product per complex product.

All objects are immutable; every function here is pure.
"""
from __future__ import annotations

import logging
import math
import warnings
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    DimensionError,
    PrecisionError,
    SingularMatrixError,
    ToleranceError,
    ValidationError,
)
from .precision import ComplexScalar, Precision

log = logging.getLogger(__name__)

__all__ = [
    "Matrix",
    "Vector",
    "identity",
    "mat_mul",
    "mat_pow",
    "mat_inverse",
    "matvec",
    "singular_extremes",
    "s_max",
    "s_min",
    "mat_exp_scaled",
    "LU",
]

# CSR fast path for matrix-vector products on object arrays.
_SPARSE_DENSITY = 0.2


def _frozen(arr):
    if arr is not None:
        arr.setflags(write=False)
    return arr


def _is_zero_array(arr) -> bool:
    return arr is None or not np.any(arr != 0)


class Matrix:
    """Immutable dense complex matrix.

    Build one with :meth:`from_rows`, :meth:`from_arrays` or
    :func:`identity`; the raw constructor trusts its inputs.
    """

    __array_priority__ = 1000

    def __init__(self, re, im, precision: Precision):
        if re.ndim != 2 or re.shape[0] < 1 or re.shape[1] < 1:
            raise DimensionError(f"matrix needs positive 2-d shape, got {re.shape}")
        if im is not None and im.shape != re.shape:
            raise DimensionError("real and imaginary parts differ in shape")
        self.re = _frozen(re)
        self.im = _frozen(im)
        self.precision = precision

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows, precision: Precision) -> "Matrix":
        """Convert nested sequences of numbers (real, complex, ``p/q`` strings, pairs)."""
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionError("matrix must have at least one row and column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        re = np.empty((len(rows), ncols), dtype=precision.dtype)
        im = np.empty_like(re)
        for i, r in enumerate(rows):
            for j, z in enumerate(r):
                re[i, j], im[i, j] = precision.convert_complex(z)
        return cls(re, None if _is_zero_array(im) else im, precision)

    @classmethod
    def from_arrays(cls, re, im=None, precision: Precision = None) -> "Matrix":
        """Wrap real/imaginary arrays, converting each entry into ``precision``."""
        re = np.asarray(re)
        conv = np.frompyfunc(precision.convert, 1, 1)
        r = np.asarray(conv(re), dtype=precision.dtype) if re.size else re.astype(precision.dtype)
        i = None
        if im is not None and not _is_zero_array(np.asarray(im)):
            i = np.asarray(conv(np.asarray(im)), dtype=precision.dtype)
        return cls(np.array(r, dtype=precision.dtype), i, precision)

    @classmethod
    def from_numpy(cls, arr, precision: Precision) -> "Matrix":
        arr = np.asarray(arr)
        if np.iscomplexobj(arr):
            return cls.from_arrays(arr.real, arr.imag, precision)
        return cls.from_arrays(arr, None, precision)

    @classmethod
    def zeros(cls, n_rows, n_cols, precision: Precision) -> "Matrix":
        re = np.empty((n_rows, n_cols), dtype=precision.dtype)
        re[...] = precision.zero
        return cls(re, None, precision)

    # -- basic protocol ---------------------------------------------------

    @property
    def shape(self):
        return self.re.shape

    @property
    def n_rows(self):
        return self.re.shape[0]

    @property
    def n_cols(self):
        return self.re.shape[1]

    @property
    def is_square(self):
        return self.n_rows == self.n_cols

    @property
    def is_real(self):
        return self.im is None

    def imag_or_zeros(self):
        if self.im is not None:
            return self.im
        z = np.empty(self.shape, dtype=self.precision.dtype)
        z[...] = self.precision.zero
        return z

    def __getitem__(self, idx) -> ComplexScalar:
        i, j = idx
        im = self.im[i, j] if self.im is not None else self.precision.zero
        return ComplexScalar(self.re[i, j], im)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape or self.precision != other.precision:
            return False
        if not np.array_equal(self.re, other.re):
            return False
        return np.array_equal(self.imag_or_zeros(), other.imag_or_zeros())

    __hash__ = None

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"<Matrix {self.n_rows}x{self.n_cols} {kind} {self.precision}>"

    def to_complex(self) -> np.ndarray:
        """Round to a ``complex128`` array (for diagnostics and machine kernels)."""
        re = np.asarray(self.re, dtype=np.float64)
        if self.im is None:
            return re.astype(np.complex128)
        return re + 1j * np.asarray(self.im, dtype=np.float64)

    def astype(self, precision: Precision) -> "Matrix":
        """Re-express every entry in another backend (exact target needs rational entries)."""
        if precision == self.precision:
            return self
        return Matrix.from_arrays(self.re, self.im, precision)

    # -- arithmetic -------------------------------------------------------

    def _check_same(self, other):
        if self.precision != other.precision:
            raise PrecisionError(f"precision mismatch: {self.precision} vs {other.precision}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        with self.precision.context():
            re = self.re + other.re
            im = _add_opt(self.im, other.im)
        return Matrix(re, im, self.precision)

    def __neg__(self):
        with self.precision.context():
            return Matrix(-self.re, None if self.im is None else -self.im, self.precision)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        if isinstance(other, Vector):
            return matvec(self, other)
        return NotImplemented

    def scale(self, c) -> "Matrix":
        """Multiply every entry by a (complex) scalar."""
        p = self.precision
        cr, ci = p.convert_complex(c)
        with p.context():
            if ci == 0:
                return Matrix(self.re * cr, None if self.im is None else self.im * cr, p)
            if self.im is None:
                return Matrix(self.re * cr, self.re * ci, p)
            return Matrix(self.re * cr - self.im * ci, self.re * ci + self.im * cr, p)

    def shift(self, z) -> "Matrix":
        """Return ``z*I - self`` for a square matrix."""
        _require_square(self)
        return identity(self.n_rows, self.precision).scale(z) - self

    @property
    def T(self) -> "Matrix":
        return Matrix(self.re.T.copy(), None if self.im is None else self.im.T.copy(), self.precision)

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        with self.precision.context():
            im = None if self.im is None else -self.im.T
        return Matrix(self.re.T.copy(), im, self.precision)

    def block(self, rows: slice, cols: slice) -> "Matrix":
        im = None if self.im is None else self.im[rows, cols].copy()
        return Matrix(self.re[rows, cols].copy(), im, self.precision)

    # -- norms (returned in the field for float backends) -------------------

    def frobenius_norm(self):
        p = self.precision
        with p.context():
            s = np.sum(self.re * self.re)
            if self.im is not None:
                s = s + np.sum(self.im * self.im)
        if p.is_exact:
            return math.sqrt(float(s))
        return p.sqrt(s)

    def norm_inf(self) -> float:
        """Maximum absolute row sum, rounded up to a float bound."""
        a = np.abs(self.to_complex())
        return float(np.max(np.sum(a, axis=1))) * (1 + 1e-12)

    # -- sparse structure --------------------------------------------------

    @cached_property
    def _csr(self):
        nz = self.re != 0
        if self.im is not None:
            nz = nz | (self.im != 0)
        density = np.count_nonzero(nz) / nz.size
        if self.precision.dtype is not object or density > _SPARSE_DENSITY:
            return None
        rows = []
        for i in range(self.n_rows):
            idx = np.flatnonzero(nz[i])
            rows.append((idx, self.re[i, idx], None if self.im is None else self.im[i, idx]))
        return rows


class Vector:
    """Immutable complex vector with the same re/im layout as :class:`Matrix`."""

    def __init__(self, re, im, precision: Precision):
        if re.ndim != 1 or re.shape[0] < 1:
            raise DimensionError(f"vector needs positive 1-d shape, got {re.shape}")
        if im is not None and im.shape != re.shape:
            raise DimensionError("real and imaginary parts differ in length")
        self.re = _frozen(re)
        self.im = _frozen(im)
        self.precision = precision

    @classmethod
    def from_values(cls, values, precision: Precision) -> "Vector":
        values = list(values)
        if not values:
            raise DimensionError("vector must be non-empty")
        re = np.empty(len(values), dtype=precision.dtype)
        im = np.empty_like(re)
        for i, z in enumerate(values):
            re[i], im[i] = precision.convert_complex(z)
        return cls(re, None if _is_zero_array(im) else im, precision)

    @classmethod
    def basis(cls, dim, index, precision: Precision) -> "Vector":
        re = np.empty(dim, dtype=precision.dtype)
        re[...] = precision.zero
        re[index] = precision.one
        return cls(re, None, precision)

    @classmethod
    def ones(cls, dim, precision: Precision) -> "Vector":
        re = np.empty(dim, dtype=precision.dtype)
        re[...] = precision.one
        return cls(re, None, precision)

    @property
    def dim(self):
        return self.re.shape[0]

    def __len__(self):
        return self.dim

    def __getitem__(self, i) -> ComplexScalar:
        return ComplexScalar(self.re[i], self.im[i] if self.im is not None else self.precision.zero)

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        if self.dim != other.dim or self.precision != other.precision:
            return False
        if not np.array_equal(self.re, other.re):
            return False
        zi = lambda v: v.im if v.im is not None else np.zeros(v.dim, dtype=object) + v.precision.zero
        return np.array_equal(zi(self), zi(other))

    __hash__ = None

    def __repr__(self):
        return f"<Vector dim={self.dim} {self.precision}>"

    def __add__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        _same_precision(self, other)
        if self.dim != other.dim:
            raise DimensionError(f"cannot add vectors of length {self.dim} and {other.dim}")
        with self.precision.context():
            return Vector(self.re + other.re, _add_opt(self.im, other.im), self.precision)

    def scale(self, c) -> "Vector":
        p = self.precision
        cr, ci = p.convert_complex(c)
        with p.context():
            if ci == 0:
                return Vector(self.re * cr, None if self.im is None else self.im * cr, p)
            if self.im is None:
                return Vector(self.re * cr, self.re * ci, p)
            return Vector(self.re * cr - self.im * ci, self.re * ci + self.im * cr, p)

    def dot(self, other: "Vector") -> ComplexScalar:
        """Bilinear pairing ``sum_p self_p * other_p`` (no conjugation)."""
        _same_precision(self, other)
        if self.dim != other.dim:
            raise DimensionError(f"length mismatch {self.dim} vs {other.dim}")
        with self.precision.context():
            re = np.dot(self.re, other.re)
            im = self.precision.zero
            if self.im is not None and other.im is not None:
                re = re - np.dot(self.im, other.im)
            if self.im is not None:
                im = im + np.dot(self.im, other.re)
            if other.im is not None:
                im = im + np.dot(self.re, other.im)
        return ComplexScalar(re, im)

    def conjugate(self) -> "Vector":
        if self.im is None:
            return self
        with self.precision.context():
            return Vector(self.re, -self.im, self.precision)

    def vdot(self, other: "Vector") -> ComplexScalar:
        """Inner product ``<self|other>`` conjugating the left argument."""
        return self.conjugate().dot(other)

    def norm2(self):
        p = self.precision
        with p.context():
            s = np.dot(self.re, self.re)
            if self.im is not None:
                s = s + np.dot(self.im, self.im)
        if p.is_exact:
            return math.sqrt(float(s))
        return p.sqrt(s)

    def to_complex(self) -> np.ndarray:
        re = np.asarray(self.re, dtype=np.float64)
        if self.im is None:
            return re.astype(np.complex128)
        return re + 1j * np.asarray(self.im, dtype=np.float64)

    def astype(self, precision: Precision) -> "Vector":
        if precision == self.precision:
            return self
        conv = np.frompyfunc(precision.convert, 1, 1)
        re = np.asarray(conv(self.re), dtype=precision.dtype)
        im = None if self.im is None else np.asarray(conv(self.im), dtype=precision.dtype)
        return Vector(np.array(re, dtype=precision.dtype), im, precision)


def _add_opt(a, b):
    if a is None:
        return None if b is None else b.copy()
    if b is None:
        return a.copy()
    return a + b


def _same_precision(a, b):
    if a.precision != b.precision:
        raise PrecisionError(f"precision mismatch: {a.precision} vs {b.precision}")


def _require_square(a: Matrix):
    if not a.is_square:
        raise DimensionError(f"square matrix required, got {a.n_rows}x{a.n_cols}")


def _require_float(a, what):
    if a.precision.is_exact:
        raise PrecisionError(f"{what} needs a float backend (big:<bits> or machine)")


def identity(n: int, precision: Precision) -> Matrix:
    if n < 1:
        raise DimensionError("identity size must be positive")
    re = np.empty((n, n), dtype=precision.dtype)
    re[...] = precision.zero
    one = precision.one
    for i in range(n):
        re[i, i] = one
    return Matrix(re, None, precision)


# -- products ---------------------------------------------------------------


def _cmatmul(ar, ai, br, bi):
    rr = ar @ br
    if ai is None and bi is None:
        return rr, None
    if ai is None:
        return rr, ar @ bi
    if bi is None:
        return rr, ai @ br
    return rr - ai @ bi, ar @ bi + ai @ br


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product; exact for rationals, rounded per operation otherwise."""
    if a.n_cols != b.n_rows:
        raise DimensionError(f"cannot multiply {a.n_rows}x{a.n_cols} by {b.n_rows}x{b.n_cols}")
    _same_precision(a, b)
    with a.precision.context():
        re, im = _cmatmul(a.re, a.im, b.re, b.im)
    return Matrix(np.asarray(re, dtype=a.precision.dtype), im, a.precision)


def mat_pow(a: Matrix, t: int) -> Matrix:
    """``a**t`` by binary exponentiation; ``a**0`` is the identity."""
    _require_square(a)
    if t < 0:
        raise ValidationError("matrix power must be non-negative")
    result = identity(a.n_rows, a.precision)
    base = a
    first = True
    while t:
        if t & 1:
            result = base if first else mat_mul(result, base)
            first = False
        t >>= 1
        if t:
            base = mat_mul(base, base)
    return result


def matvec(a: Matrix, x: Vector) -> Vector:
    """``a @ x``; object-array matrices with few non-zeros use a row-sparse loop."""
    if a.n_cols != x.dim:
        raise DimensionError(f"cannot apply {a.n_rows}x{a.n_cols} matrix to length-{x.dim} vector")
    _same_precision(a, x)
    p = a.precision
    csr = a._csr
    with p.context():
        if csr is None:
            re, im = _cmatmul(a.re, a.im, x.re, x.im)
            return Vector(np.asarray(re, dtype=p.dtype), im, p)
        n = a.n_rows
        re = np.empty(n, dtype=object)
        complex_out = a.im is not None or x.im is not None
        im = np.empty(n, dtype=object) if complex_out else None
        zero = p.zero
        for i, (idx, vr, vi) in enumerate(csr):
            if idx.size == 0:
                re[i] = zero
                if complex_out:
                    im[i] = zero
                continue
            xr = x.re[idx]
            r = np.dot(vr, xr)
            if complex_out:
                xi = x.im[idx] if x.im is not None else None
                s = np.dot(vr, xi) if xi is not None else zero
                if vi is not None:
                    s = s + np.dot(vi, xr)
                    if xi is not None:
                        r = r - np.dot(vi, xi)
                im[i] = s
            re[i] = r
    return Vector(re, im, p)


# -- LU factorisation ---------------------------------------------------------


def _pivot_threshold(a: Matrix):
    """Pivots at or below this magnitude count as zero: 2**-(bits-3) * ||a||_F."""
    if a.precision.is_exact:
        return 0
    return float(a.frobenius_norm()) * 2.0 ** (-(a.precision.bits - 3))


def _embed(a: Matrix):
    """Real form [[Re, -Im], [Im, Re]] of a complex matrix (Re alone if real)."""
    if a.im is None:
        return a.re
    with a.precision.context():
        top = np.concatenate([a.re, -a.im], axis=1)
        bot = np.concatenate([a.im, a.re], axis=1)
    return np.concatenate([top, bot], axis=0)


class LU:
    """LU factorisation with partial pivoting of a square matrix.

    Machine matrices go to LAPACK via scipy; exact and big-float matrices
    are factored here on their real embedding.  ``solve`` handles
    ``a x = b`` and ``a^H x = b`` for real-embedded right-hand sides.
    Raises :class:`SingularMatrixError` when a pivot is zero (exact) or
    below ``2**-(bits-3) * ||a||_F`` (floats; ``2**-50`` for machine).
    """

    def __init__(self, a: Matrix):
        _require_square(a)
        self.precision = a.precision
        self.n = a.n_rows
        threshold = _pivot_threshold(a)
        if a.precision.kind == "machine":
            self.real = False
            arr = a.re.astype(np.float64) if a.im is None else a.to_complex()
            with warnings.catch_warnings():
                # singularity is reported below through the pivot threshold
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                lu, piv = scipy.linalg.lu_factor(arr, check_finite=False)
            d = np.abs(np.diag(lu))
            if np.any(d <= threshold):
                raise SingularMatrixError(f"pivot {d.min():.3e} below threshold {threshold:.3e}")
            self._lu = (lu, piv)
            return
        k = _embed(a)
        self.real = a.im is None
        self._lu = _object_lu(k, a.precision, threshold)

    def solve(self, b: np.ndarray, adjoint: bool = False) -> np.ndarray:
        """Solve with an array right-hand side in this factor's native layout."""
        if self.precision.kind == "machine":
            return scipy.linalg.lu_solve(self._lu, b, trans=2 if adjoint else 0, check_finite=False)
        with self.precision.context():
            return _object_lu_solve(self._lu, b, transpose=adjoint)


def _object_lu(k, precision, threshold):
    n = k.shape[0]
    a = np.array(k, dtype=object, copy=True)
    perm = np.arange(n)
    exact = precision.is_exact
    with precision.context():
        for j in range(n):
            col = a[j:, j]
            if exact:
                nz = np.flatnonzero(col != 0)
                if nz.size == 0:
                    raise SingularMatrixError(f"zero pivot in column {j}")
                p = j + int(nz[0])
            else:
                mags = np.array([abs(v) for v in col], dtype=object)
                p = j + int(np.argmax(mags))
                if abs(a[p, j]) <= threshold:
                    raise SingularMatrixError(f"pivot below threshold {threshold:.3e} in column {j}")
            if p != j:
                a[[j, p]] = a[[p, j]]
                perm[[j, p]] = perm[[p, j]]
            if j + 1 < n:
                a[j + 1 :, j] = a[j + 1 :, j] / a[j, j]
                a[j + 1 :, j + 1 :] = a[j + 1 :, j + 1 :] - np.outer(a[j + 1 :, j], a[j, j + 1 :])
    return a, perm


def _object_lu_solve(factor, b, transpose=False):
    a, perm = factor
    n = a.shape[0]
    b = np.array(b, dtype=object, copy=True)
    if not transpose:
        y = b[perm]
        for i in range(1, n):
            y[i] = y[i] - np.dot(a[i, :i], y[:i])
        for i in range(n - 1, -1, -1):
            if i + 1 < n:
                y[i] = y[i] - np.dot(a[i, i + 1 :], y[i + 1 :])
            y[i] = y[i] / a[i, i]
        return y
    # (P^T L U)^T x = b  ->  U^T z = b, L^T w = z, x = P^T w
    z = b
    for i in range(n):
        if i:
            z[i] = z[i] - np.dot(a[:i, i], z[:i])
        z[i] = z[i] / a[i, i]
    for i in range(n - 2, -1, -1):
        z[i] = z[i] - np.dot(a[i + 1 :, i], z[i + 1 :])
    x = np.empty_like(z)
    x[perm] = z
    return x


def mat_inverse(a: Matrix) -> Matrix:
    """Inverse via LU; exact in the rational backend."""
    lu = LU(a)
    n = a.n_rows
    p = a.precision
    if p.kind == "machine":
        rhs = np.eye(n, dtype=np.complex128 if a.im is not None else np.float64)
        inv = lu.solve(rhs)
        if a.im is None:
            return Matrix(np.ascontiguousarray(inv), None, p)
        return Matrix(np.ascontiguousarray(inv.real), np.ascontiguousarray(inv.imag), p)
    m = 2 * n if a.im is not None else n
    rhs = np.empty((m, n), dtype=object)
    rhs[...] = p.zero
    for i in range(n):
        rhs[i, i] = p.one
    x = lu.solve(rhs)
    if a.im is None:
        return Matrix(np.asarray(x, dtype=object), None, p)
    return Matrix(np.asarray(x[:n], dtype=object), np.asarray(x[n:], dtype=object), p)


# -- extreme singular values ------------------------------------------------------


def _start_vector(m, precision):
    from .rng import normal_samples

    vals = normal_samples(seed=0x5EED, count=m)
    if precision.kind == "machine":
        return np.array(vals)
    return np.array([precision.convert(v) for v in vals], dtype=object)


def _default_cap(precision):
    return 20000 if precision.kind == "machine" else 600


def _operator(a: Matrix):
    """Return (array, apply, apply_adjoint, dim) for a real-embedded or complex view."""
    if a.precision.kind == "machine":
        arr = a.re.astype(np.float64) if a.im is None else a.to_complex()
        return arr, (lambda x: arr @ x), (lambda x: arr.conj().T @ x), arr.shape[0]
    k = _embed(a)
    kt = k.T.copy()
    return k, (lambda x: k @ x), (lambda x: kt @ x), k.shape[0]


def _norm(x, precision):
    if precision.kind == "machine":
        return float(np.linalg.norm(x))
    return precision.sqrt(np.dot(x, x))


def _rayleigh_iteration(step, x, precision, rtol, cap, what):
    with precision.context():
        x = x / _norm(x, precision)
        lam = precision.zero
        for it in range(1, cap + 1):
            y = step(x)
            lam = np.real(np.vdot(x, y)) if precision.kind == "machine" else np.dot(x, y)
            if lam == 0:
                return lam, it
            r = _norm(y - lam * x, precision)
            if r <= rtol * abs(lam):
                return lam, it
            x = y / _norm(y, precision)
    raise ConvergenceError(f"{what}: no convergence after {cap} iterations", iterations=cap, estimate=lam)


def _svd_values(a: Matrix):
    """Full singular-value list (fallback path)."""
    p = a.precision
    if p.kind == "machine":
        s = np.linalg.svd(a.to_complex() if a.im is not None else a.re, compute_uv=False)
        return float(s[0]), float(s[-1])
    import mpmath

    ctx = mpmath.MPContext()
    ctx.prec = p.bits + 16

    def to_mp(v):
        man, exp = v.as_mantissa_exp()
        return ctx.mpf((int(man), int(exp)))

    if a.im is None:
        m = ctx.matrix([[to_mp(v) for v in row] for row in a.re])
        s = ctx.svd_r(m, compute_uv=False)
    else:
        m = ctx.matrix(
            [[ctx.mpc(to_mp(r), to_mp(i)) for r, i in zip(rr, ii)] for rr, ii in zip(a.re, a.im)]
        )
        s = ctx.svd_c(m, compute_uv=False)
    vals = [s[i] for i in range(len(s))]
    with p.context():
        conv = [p.convert(ctx.nstr(v, int(p.bits * 0.302) + 8)) for v in vals]
    return max(conv), min(conv)


def s_max(a: Matrix, *, rtol=1e-12, max_iter=None, fallback=True):
    """Largest singular value by power iteration on ``a^H a``."""
    _require_float(a, "s_max")
    p = a.precision
    cap = max_iter or _default_cap(p)
    _, apply, apply_h, dim = _operator(a)
    x0 = _start_vector(dim, p)
    try:
        lam, it = _rayleigh_iteration(lambda x: apply_h(apply(x)), x0, p, rtol, cap, "s_max")
    except ConvergenceError:
        if not fallback or a.n_rows > 500:
            raise
        log.debug("s_max: power iteration hit cap %d, using full SVD", cap)
        return _svd_values(a)[0]
    return p.sqrt(lam) if lam > 0 else p.zero


def s_min(a: Matrix, *, rtol=1e-12, max_iter=None, fallback=True, start=None):
    """Smallest singular value by inverse iteration on ``a^H a`` through one LU.

    A pivot below the singularity threshold yields ``0``.  ``start`` is an
    optional complex starting vector, e.g. a double-precision estimate of the
    right singular vector.
    """
    _require_float(a, "s_min")
    _require_square(a)
    p = a.precision
    cap = max_iter or _default_cap(p)
    try:
        lu = LU(a)
    except SingularMatrixError:
        return p.zero
    dim = a.n_rows if (p.kind == "machine" or a.im is None) else 2 * a.n_rows
    if start is not None:
        x0 = _convert_start(np.asarray(start, dtype=np.complex128), a, dim)
    else:
        x0 = _start_vector(dim, p)
    if p.kind == "machine" and a.im is not None:
        x0 = x0.astype(np.complex128)

    def step(x):
        return lu.solve(lu.solve(x, adjoint=True))

    try:
        mu, it = _rayleigh_iteration(step, x0, p, rtol, cap, "s_min")
    except ConvergenceError:
        if not fallback or a.n_rows > 500:
            raise
        log.debug("s_min: inverse iteration hit cap %d, using full SVD", cap)
        return _svd_values(a)[1]
    with p.context():
        return 1 / p.sqrt(mu)


def _convert_start(v, a, dim):
    p = a.precision
    if v.shape != (a.n_rows,):
        raise DimensionError(f"start vector has shape {v.shape}, need ({a.n_rows},)")
    if p.kind == "machine":
        return v if a.im is not None else v.real.copy()
    parts = [v.real] if a.im is None else [v.real, v.imag]
    flat = np.concatenate(parts)
    if not np.any(flat):
        return _start_vector(dim, p)
    return np.array([p.convert(float(x)) for x in flat], dtype=object)


def singular_extremes(a: Matrix, *, rtol=1e-12, max_iter=None, fallback=True):
    """``(s_max, s_min)`` of a square float-backend matrix.

    Power iteration and LU-based inverse iteration on ``a^H a``, stopped when
    the Rayleigh residual drops below ``rtol`` relative; on hitting the
    iteration cap matrices with ``n <= 500`` fall back to a full SVD, larger
    ones raise :class:`ConvergenceError`.
    """
    _require_square(a)
    return (
        s_max(a, rtol=rtol, max_iter=max_iter, fallback=fallback),
        s_min(a, rtol=rtol, max_iter=max_iter, fallback=fallback),
    )


# -- matrix exponential -----------------------------------------------------------------


def _taylor_plan(theta, tol, max_terms=400):
    """Pick (squarings s, terms m) minimising s + m with a rigorous truncation bound.

    With ``X = Y / 2**s`` and ``||X|| = theta_s <= 1/2`` the Taylor remainder
    after ``m`` terms is at most ``theta_s**(m+1)/(m+1)! / (1 - theta_s/(m+2))``;
    raising to ``2**s`` multiplies it into
    ``e**theta * ((1 + delta e**-theta_s)**(2**s) - 1)``.
    """
    s0 = max(0, math.ceil(math.log2(theta / 0.5))) if theta > 0.5 else 0
    best = None
    for s in range(s0, s0 + 16):
        ts = theta / 2.0**s
        log_term = 0.0  # log(ts**k / k!)
        for m in range(1, max_terms):
            log_term += math.log(ts) - math.log(m + 1) if ts > 0 else -math.inf
            delta = math.exp(log_term) / (1 - ts / (m + 2)) if log_term > -700 else 0.0
            bound = math.exp(theta) * math.expm1(2.0**s * math.log1p(delta * math.exp(-ts)))
            if bound <= tol:
                if best is None or (s + m) < sum(best):
                    best = (s, m)
                break
    if best is None:
        raise ValidationError(f"no Taylor plan reaches tol={tol:g}")
    return best


def mat_exp_scaled(h: Matrix, scale, tol: float = 1e-30) -> Matrix:
    """``exp(scale * h)`` with elementwise error at most ``tol``.

    Scaling and squaring on a Horner-evaluated Taylor polynomial.  Raises
    :class:`ToleranceError` (carrying ``required_bits``) when rounding at the
    active mantissa width could exceed ``tol``.
    """
    _require_square(h)
    _require_float(h, "mat_exp_scaled")
    p = h.precision
    n = h.n_rows
    y = h.scale(scale)
    theta = y.norm_inf()
    if theta == 0:
        return identity(n, p)
    s, m = _taylor_plan(theta, tol / 2)
    rounding = n * (m + 2.0**s) * math.exp(theta)
    required_bits = math.ceil(math.log2(rounding / (tol / 2))) + 1
    if required_bits > p.bits:
        raise ToleranceError(
            f"tol={tol:g} needs about {required_bits} mantissa bits, backend has {p.bits}",
            required_bits=required_bits,
        )
    with p.context():
        x = y.scale(p.one / 2**s)
        kinvs = {k: p.one / k for k in range(1, m + 1)}
    eye = identity(n, p)
    result = eye
    for k in range(m, 0, -1):
        result = eye + mat_mul(x, result).scale(kinvs[k])
    for _ in range(s):
        result = mat_mul(result, result)
    return result

"""Closed-form spectral data of the Toeplitz and block-transfer matrices.

Eigenvectors are stored as matrix columns (right, ``R_j``) and rows
(left, ``L_j``).  The pairing ``<L_j|R_k>`` is the plain bilinear sum of
products: left eigenvectors are row vectors, so no conjugation is applied.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PrecisionError, ValidationError
from .linalg import Matrix, identity, mat_mul, s_max, s_min
from .precision import ComplexScalar, Precision

__all__ = [
    "EigenSystem",
    "FourierCoefficients",
    "eigen_B",
    "eigen_A",
    "eigen_tilted_pauli",
    "ehrenfest_spectrum",
    "condition_numbers",
    "eigenvector_matrix_condition",
    "dirichlet_kernel",
    "fourier_coefficients",
    "closed_form_f",
    "spectral_power",
]


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: tuple
    right: Matrix
    left: Matrix
    precision: Precision
    condition_numbers: tuple = field(default=())
    spectral_radius: object = None

    def __len__(self):
        return len(self.eigenvalues)

    def right_vector(self, j):
        return self.right.block(slice(None), slice(j, j + 1))

    def biorthogonality(self) -> Matrix:
        """Matrix of pairings ``<L_j|R_k>``; the identity for a biorthonormal system."""
        return mat_mul(self.left, self.right)

    def to_dict(self) -> dict:
        from .models import matrix_to_dict

        p = self.precision
        return {
            "precision": str(p),
            "eigenvalues": [[p.format(z.re), p.format(z.im)] for z in self.eigenvalues],
            "condition_numbers": [str(k) for k in self.condition_numbers],
            "spectral_radius": str(self.spectral_radius),
            "right": matrix_to_dict(self.right),
            "left": matrix_to_dict(self.left),
        }


def _finish(eigenvalues, right, left, precision):
    es = EigenSystem(tuple(eigenvalues), right, left, precision)
    kappas = condition_numbers(es)
    with precision.context():
        rho = max(precision.sqrt(z.abs2()) for z in eigenvalues)
    return EigenSystem(es.eigenvalues, right, left, precision, tuple(kappas), rho)


def _need_float(precision, what):
    if precision.is_exact:
        raise PrecisionError(f"{what} involves trigonometric values; use a float backend")


def _sine_table(M, p):
    """``sin(k pi j / (M+1))`` for k, j = 1..M, as an M x M object/float array."""
    pi = p.pi()
    out = np.empty((M, M), dtype=p.dtype)
    with p.context():
        for k in range(1, M + 1):
            for j in range(1, M + 1):
                # reduce k*j mod 2(M+1) first: keeps the argument small and exact
                out[k - 1, j - 1] = p.sin(pi * ((k * j) % (2 * M + 2)) / (M + 1))
    return out


def _g_powers(g, M, p):
    """(g**j, g**-j) for j = 1..M."""
    with p.context():
        gg = p.convert(g)
        up = [gg**j for j in range(1, M + 1)]
        down = [p.one / u for u in up]
    return up, down


def eigen_B(M: int, g, precision: Precision) -> EigenSystem:
    """Eigenpairs of the M x M Toeplitz matrix: ``mu_k = 2 cos(k pi / (M+1))``.

    ``r_j = g**j sin(k pi j/(M+1))`` and ``l_j = 2/(M+1) g**-j sin(k pi j/(M+1))``.
    """
    if M < 1:
        raise ValidationError("M must be at least 1")
    if g <= 0:
        raise ValidationError("g must be positive")
    p = precision
    _need_float(p, "eigen_B")
    sines = _sine_table(M, p)
    up, down = _g_powers(g, M, p)
    pi = p.pi()
    right = np.empty((M, M), dtype=p.dtype)
    left = np.empty((M, M), dtype=p.dtype)
    with p.context():
        norm = p.convert(2) / (M + 1)
        mus = [ComplexScalar(2 * p.cos(pi * k / (M + 1)), p.zero) for k in range(1, M + 1)]
        for k in range(M):
            for j in range(M):
                right[j, k] = up[j] * sines[k, j]
                left[k, j] = norm * down[j] * sines[k, j]
    return _finish(mus, Matrix(right, None, p), Matrix(left, None, p), p)


def eigen_A(N: int, g, precision: Precision) -> EigenSystem:
    """Eigenpairs of the block-transfer matrix, ``lambda_{+-k} = exp(+-i k pi/(M+1))``.

    Columns ``0..M-1`` hold ``+k`` (k = 1..M), columns ``M..2M-1`` hold ``-k``.
    ``R = (r, -conj(lambda) r)`` and ``L`` is ``(l, conj(lambda) l)`` scaled by
    ``1/(1 - lambda**-2)`` and then divided by the computed ``<L|R>``.
    """
    if N < 2 or N % 2:
        raise ValidationError(f"eigen_A needs even N >= 2, got {N}")
    M = N // 2
    p = precision
    _need_float(p, "eigen_A")
    b = eigen_B(M, g, p)
    pi = p.pi()
    rre = np.empty((N, N), dtype=p.dtype)
    rim = np.empty((N, N), dtype=p.dtype)
    lre = np.empty((N, N), dtype=p.dtype)
    lim = np.empty((N, N), dtype=p.dtype)
    lams = []
    with p.context():
        for sign in (1, -1):
            for k in range(1, M + 1):
                col = (k - 1) if sign == 1 else (M + k - 1)
                th = pi * k / (M + 1)
                c, s = p.cos(th), sign * p.sin(th)
                lams.append(ComplexScalar(c, s))
                r = b.right.re[:, k - 1]
                l = b.left.re[k - 1, :]
                # conj(lambda) = (c, -s); R = (r, -(c - i s) r)
                rre[:M, col] = r
                rim[:M, col] = p.zero
                rre[M:, col] = -c * r
                rim[M:, col] = s * r
                # 1/(1 - lambda^-2) with lambda^-2 = (cos 2th, -sin 2th) for this sign
                c2, s2 = p.cos(2 * th), -sign * p.sin(2 * th)
                dr, di = 1 - c2, -s2
                den = dr * dr + di * di
                fr, fi = dr / den, -di / den
                # (l, conj(lambda) l) = (l, (c - i s) l), then times (fr + i fi)
                lre[col, :M] = fr * l
                lim[col, :M] = fi * l
                ar, ai = c * fr + s * fi, c * fi - s * fr
                lre[col, M:] = ar * l
                lim[col, M:] = ai * l
        # renormalise each L so that <L|R> = 1 exactly by construction
        for col in range(N):
            pr = np.dot(lre[col], rre[:, col]) - np.dot(lim[col], rim[:, col])
            pi_ = np.dot(lre[col], rim[:, col]) + np.dot(lim[col], rre[:, col])
            den = pr * pr + pi_ * pi_
            ir, ii = pr / den, -pi_ / den
            new_re = lre[col] * ir - lim[col] * ii
            new_im = lre[col] * ii + lim[col] * ir
            lre[col], lim[col] = new_re, new_im
    return _finish(lams, Matrix(rre, rim, p), Matrix(lre, lim, p), p)


def eigen_tilted_pauli(g, precision: Precision) -> EigenSystem:
    """Eigenpairs of ``[[0, g], [1/g, 0]]``: ``+1`` with R=(g, 1), ``-1`` with R=(g, -1)."""
    if g <= 0:
        raise ValidationError("g must be positive")
    p = precision
    with p.context():
        gg = p.convert(g)
        half = p.one / 2
        right = Matrix.from_rows([[gg, gg], [1, -1]], p)
        left = Matrix.from_rows([[half / gg, half], [half / gg, -half]], p)
    lams = [ComplexScalar(p.one, p.zero), ComplexScalar(p.convert(-1), p.zero)]
    if p.is_exact:
        return EigenSystem(tuple(lams), right, left, p, (), p.one)
    return _finish(lams, right, left, p)


def ehrenfest_spectrum(N: int) -> list[int]:
    """Eigenvalues of the N x N Ehrenfest matrix: -(N-1), -(N-3), ..., N-1."""
    if N < 2:
        raise ValidationError("N must be at least 2")
    return list(range(-(N - 1), N, 2))


def condition_numbers(es: EigenSystem) -> list:
    """``kappa_j = ||R_j||_2 ||L_j||_2 / |<L_j|R_j>|``; a zero pairing gives ``inf``."""
    p = es.precision
    _need_float(p, "condition_numbers")
    R, L = es.right, es.left
    Ri, Li = R.imag_or_zeros(), L.imag_or_zeros()
    out = []
    with p.context():
        for j in range(len(es.eigenvalues)):
            rr, ri = R.re[:, j], Ri[:, j]
            lr, li = L.re[j, :], Li[j, :]
            nr = p.sqrt(np.dot(rr, rr) + np.dot(ri, ri))
            nl = p.sqrt(np.dot(lr, lr) + np.dot(li, li))
            pr = np.dot(lr, rr) - np.dot(li, ri)
            pim = np.dot(lr, ri) + np.dot(li, rr)
            pair = p.sqrt(pr * pr + pim * pim)
            out.append(math.inf if pair == 0 else nr * nl / pair)
    return out


def eigenvector_matrix_condition(es: EigenSystem, **kwargs):
    """``s_max(V) / s_min(V)`` for V holding the right eigenvectors as columns."""
    p = es.precision
    _need_float(p, "eigenvector_matrix_condition")
    hi = s_max(es.right, **kwargs)
    lo = s_min(es.right, **kwargs)
    if lo == 0:
        return math.inf
    with p.context():
        return hi / lo


def dirichlet_kernel(M: int, x: int) -> int:
    """``sum_{k=-M}^{M} exp(i k pi x/(M+1))`` for integer x.

    Equals ``2M+1`` when x is a multiple of ``2(M+1)`` and ``(-1)**(x+1)`` otherwise.
    """
    if M < 1:
        raise ValidationError("M must be at least 1")
    if x % (2 * (M + 1)) == 0:
        return 2 * M + 1
    return -1 if x % 2 == 0 else 1


@dataclass(frozen=True)
class FourierCoefficients:
    """``c_k`` for k = -M..M with ``f(t) = sum_k c_k exp(i k pi t/(M+1))``."""

    M: int
    g: object
    c: tuple
    precision: Precision

    def coefficient(self, k: int) -> ComplexScalar:
        return self.c[k + self.M]

    def evaluate(self, t: int) -> ComplexScalar:
        p = self.precision
        pi = p.pi()
        re = p.zero
        im = p.zero
        with p.context():
            for k in range(-self.M, self.M + 1):
                ck = self.c[k + self.M]
                # k*t reduced mod 2(M+1) keeps the phase argument small
                th = pi * ((k * t) % (2 * self.M + 2)) / (self.M + 1)
                cs, sn = p.cos(th), p.sin(th)
                re = re + ck.re * cs - ck.im * sn
                im = im + ck.re * sn + ck.im * cs
        return ComplexScalar(re, im)

    def to_dict(self) -> dict:
        p = self.precision
        return {
            "M": self.M,
            "g": str(self.g),
            "precision": str(p),
            "k": list(range(-self.M, self.M + 1)),
            "c": [[p.format(z.re), p.format(z.im)] for z in self.c],
        }


def fourier_coefficients(M: int, g, precision: Precision) -> FourierCoefficients:
    """Coefficients of f(t) for the special vectors, one per eigenvalue phase.

    ``c_k = i/(g(M+1)) (-1)**k (1 - e^{i th}) ((-1)**k - g**(M+1)) sin(th)
    / (g + 1/g - 2 cos th)`` with ``th = pi k/(M+1)``; ``c_0 = 0``.
    """
    if M < 1:
        raise ValidationError("M must be at least 1")
    if g <= 0:
        raise ValidationError("g must be positive")
    p = precision
    _need_float(p, "fourier_coefficients")
    pi = p.pi()
    cs = []
    with p.context():
        gg = p.convert(g)
        gM1 = gg ** (M + 1)
        for k in range(-M, M + 1):
            if k == 0:
                cs.append(ComplexScalar(p.zero, p.zero))
                continue
            th = pi * k / (M + 1)
            c, s = p.cos(th), p.sin(th)
            sgn = 1 if k % 2 == 0 else -1
            real_factor = sgn * (sgn - gM1) * s / (gg * (M + 1) * (gg + 1 / gg - 2 * c))
            # i (1 - e^{i th}) = sin th + i (1 - cos th)
            cs.append(ComplexScalar(real_factor * s, real_factor * (1 - c)))
    return FourierCoefficients(M, g, tuple(cs), p)


def closed_form_f(N: int, g, t: int, precision: Precision = None):
    """Exact ``<w|A^t|v>`` for w = all ones, v = e_1 and the block-transfer matrix.

    With ``t' = t mod (N+2)`` and ``M = N/2``: 1 at t'=0, ``(g-1) g**(t'-1)`` while
    growing, ``-g**(M-1)`` at the two peak steps M and M+1, ``(g-1) g**(2M-t')``
    while decaying (t' = M+2..2M), and 1 again at t' = 2M+1.
    """
    if N < 2 or N % 2:
        raise ValidationError(f"closed_form_f needs even N >= 2, got {N}")
    if t < 0:
        raise ValidationError("t must be non-negative")
    M = N // 2
    tp = t % (N + 2)
    if precision is not None:
        gg = precision.convert(g)
        ctx = precision.context()
    else:
        import contextlib

        gg, ctx = g, contextlib.nullcontext()
    with ctx:
        one = gg ** 0
        if tp == 0 or tp == 2 * M + 1:
            return one
        if tp < M:
            return (gg - 1) * gg ** (tp - 1)
        if tp <= M + 1:
            return -(gg ** (M - 1))
        return (gg - 1) * gg ** (2 * M - tp)


def spectral_power(es: EigenSystem, t: int) -> Matrix:
    """``sum_j lambda_j**t R_j L_j``: the matrix power rebuilt from its eigenpairs."""
    p = es.precision
    n = es.right.n_rows
    R, L = es.right, es.left
    Ri, Li = R.imag_or_zeros(), L.imag_or_zeros()
    with p.context():
        # scale the columns of R by lambda_j**t, then one product with L
        sr = np.empty_like(R.re)
        si = np.empty_like(R.re)
        for j, lam in enumerate(es.eigenvalues):
            zr, zi = p.one, p.zero
            for _ in range(t):
                zr, zi = zr * lam.re - zi * lam.im, zr * lam.im + zi * lam.re
            sr[:, j] = R.re[:, j] * zr - Ri[:, j] * zi
            si[:, j] = R.re[:, j] * zi + Ri[:, j] * zr
    return mat_mul(Matrix(sr, si, p), Matrix(L.re, Li, p))

"""Scalar fields: exact rationals, MPFR big floats and IEEE doubles.

Every backend stores complex values as an explicit ``(re, im)`` pair of
real field elements.  Field elements are ``gmpy2.mpq`` for the exact
backend, ``gmpy2.mpfr`` for the big-float backend and ``float`` for the
machine backend.  Big-float arithmetic must run inside
:meth:`Precision.context` so that every operation rounds to the selected
mantissa width.
"""
from __future__ import annotations

import contextlib
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq

from .errors import PrecisionError

__all__ = [
    "Precision",
    "ComplexScalar",
    "EXACT",
    "MACHINE",
    "DEFAULT_BITS",
    "big",
    "default_precision",
    "parse_rational_or_float",
]

DEFAULT_BITS = 256
ENV_DEFAULT = "PSEUDOPOWER_DEFAULT_PRECISION"

_KINDS = ("exact", "big", "machine")


@dataclass(frozen=True)
class Precision:
    """Arithmetic backend selector.

    ``kind`` is one of ``"exact"``, ``"big"`` or ``"machine"``; ``bits`` is
    the mantissa width (53 for machine, 0 for exact).
    """

    kind: str
    bits: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise PrecisionError(f"unknown precision kind {self.kind!r}")
        if self.kind == "big" and self.bits < 53:
            raise PrecisionError(f"big-float mantissa must be >= 53 bits, got {self.bits}")
        if self.kind == "machine":
            object.__setattr__(self, "bits", 53)
        elif self.kind == "exact":
            object.__setattr__(self, "bits", 0)

    @classmethod
    def parse(cls, text: str) -> "Precision":
        """Parse ``exact``, ``machine``, ``big`` or ``big:<bits>``."""
        if isinstance(text, Precision):
            return text
        s = str(text).strip().lower()
        if s in ("exact", "machine"):
            return cls(s)
        if s == "big":
            return cls("big", DEFAULT_BITS)
        if s.startswith("big:"):
            try:
                bits = int(s[4:])
            except ValueError:
                raise PrecisionError(f"bad mantissa width in {text!r}") from None
            return cls("big", bits)
        raise PrecisionError(f"cannot parse precision {text!r}; expected exact|big:<bits>|machine")

    def __str__(self):
        return f"big:{self.bits}" if self.kind == "big" else self.kind

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def is_float(self) -> bool:
        return self.kind != "exact"

    @property
    def dtype(self):
        return np.float64 if self.kind == "machine" else object

    @property
    def epsilon(self) -> float:
        """Unit roundoff; zero for the exact backend."""
        return 0.0 if self.is_exact else 2.0 ** (-self.bits)

    def context(self):
        if self.kind == "big":
            return gmpy2.context(gmpy2.get_context(), precision=self.bits)
        return contextlib.nullcontext()

    # -- conversion -------------------------------------------------------

    def convert(self, x):
        """Convert a real Python/gmpy2 number or numeric string into the field."""
        if self.kind == "exact":
            return _to_mpq(x)
        if self.kind == "big":
            if isinstance(x, str):
                x = _parse_string(x, exact_decimal=False, bits=self.bits)
            if isinstance(x, Fraction):
                x = mpq(x.numerator, x.denominator)
            if isinstance(x, (np.floating, np.integer)):
                x = x.item()
            return mpfr(x, self.bits)
        if isinstance(x, str):
            x = _parse_string(x, exact_decimal=False, bits=53)
        return float(x)

    def convert_complex(self, z):
        """Return ``(re, im)`` field elements for a real or complex input."""
        if isinstance(z, ComplexScalar):
            return self.convert(z.re), self.convert(z.im)
        if isinstance(z, tuple) and len(z) == 2:
            return self.convert(z[0]), self.convert(z[1])
        if isinstance(z, (complex, np.complexfloating)):
            return self.convert(z.real), self.convert(z.imag)
        if isinstance(z, gmpy2.mpc):
            return self.convert(z.real), self.convert(z.imag)
        return self.convert(z), self.zero

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def to_float(self, x) -> float:
        return float(x)

    def format(self, x) -> str:
        """Render a field element as a string that parses back bit-exactly."""
        if self.kind == "exact":
            return str(mpq(x))
        if self.kind == "big":
            return str(mpfr(x, self.bits))
        return repr(float(x))

    # -- transcendental helpers (float backends only) ----------------------

    def _need_float(self, what):
        if self.kind == "exact":
            raise PrecisionError(f"{what} is not available in the exact-rational backend")

    def pi(self):
        self._need_float("pi")
        if self.kind == "machine":
            return math.pi
        with self.context():
            return gmpy2.const_pi()

    def sqrt(self, x):
        if self.kind == "machine":
            return math.sqrt(x)
        if self.kind == "exact":
            x = mpq(x)
            rn, rd = gmpy2.isqrt_rem(x.numerator), gmpy2.isqrt_rem(x.denominator)
            if rn[1] == 0 and rd[1] == 0:
                return mpq(rn[0], rd[0])
            self._need_float("irrational sqrt")
        with self.context():
            return gmpy2.sqrt(x)

    def _unary(self, name, x):
        self._need_float(name)
        if self.kind == "machine":
            return getattr(math, name)(x)
        with self.context():
            return getattr(gmpy2, name)(x)

    def cos(self, x):
        return self._unary("cos", x)

    def sin(self, x):
        return self._unary("sin", x)

    def exp(self, x):
        return self._unary("exp", x)

    def log(self, x):
        return self._unary("log", x)


EXACT = Precision("exact")
MACHINE = Precision("machine")


def big(bits: int = DEFAULT_BITS) -> Precision:
    return Precision("big", bits)


def default_precision() -> Precision:
    """Backend used when none is given; ``PSEUDOPOWER_DEFAULT_PRECISION`` overrides."""
    env = os.environ.get(ENV_DEFAULT)
    if env:
        return Precision.parse(env)
    return big(DEFAULT_BITS)


def _parse_string(s, exact_decimal, bits):
    s = s.strip()
    if "/" in s:
        try:
            q = mpq(s)
        except ValueError:
            raise PrecisionError(f"malformed rational {s!r}") from None
        return q
    if exact_decimal:
        try:
            return mpq(s)
        except ValueError:
            raise PrecisionError(f"malformed number {s!r}") from None
    try:
        return mpfr(s, bits) if bits > 53 else float(s)
    except ValueError:
        raise PrecisionError(f"malformed number {s!r}") from None


def _to_mpq(x):
    if isinstance(x, str):
        return _parse_string(x, exact_decimal=True, bits=0)
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, (Integral, np.integer)):
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, mpq):
        return x
    if isinstance(x, (float, np.floating)) and float(x).is_integer():
        return mpq(int(x))
    if isinstance(x, mpfr) and gmpy2.is_integer(x):
        return mpq(int(x))
    raise PrecisionError(
        f"exact-rational backend needs rational input, got {type(x).__name__} {x!r}; "
        "pass an int, Fraction or 'p/q' string"
    )


def parse_rational_or_float(text):
    """Parse a command-line number: ``p/q`` and integers stay exact, decimals become float."""
    s = str(text).strip()
    if "/" in s:
        return _parse_string(s, exact_decimal=True, bits=0)
    try:
        return mpq(int(s))
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        raise PrecisionError(f"not a number: {text!r}") from None


def is_rational(x) -> bool:
    return isinstance(x, (Integral, Fraction)) or isinstance(x, mpq)


@dataclass(frozen=True)
class ComplexScalar:
    """A complex number held as two real field elements."""

    re: object
    im: object = 0

    def __add__(self, other):
        other = _as_cs(other)
        return ComplexScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_cs(other)
        return ComplexScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_cs(other) - self

    def __mul__(self, other):
        o = _as_cs(other)
        return ComplexScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return ComplexScalar(-self.re, -self.im)

    def __eq__(self, other):
        try:
            o = _as_cs(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self):
        return ComplexScalar(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        if self.im == 0:
            return abs(self.re)
        if isinstance(self.re, mpfr) or isinstance(self.im, mpfr):
            return gmpy2.sqrt(self.abs2())
        if isinstance(self.re, mpq) or isinstance(self.im, mpq):
            return gmpy2.sqrt(mpfr(self.abs2(), 256))
        return math.hypot(self.re, self.im)

    def log_abs(self) -> float:
        """``ln|z|`` as a float; works for magnitudes beyond double range."""
        a2 = self.abs2()
        if a2 == 0:
            return -math.inf
        if isinstance(a2, mpq):
            return 0.5 * (math.log(int(a2.numerator)) - math.log(int(a2.denominator)))
        if isinstance(a2, mpfr):
            return 0.5 * float(gmpy2.log(a2))
        return 0.5 * math.log(a2) if a2 > 1e-300 else math.log(math.hypot(self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexScalar({self.re!s}, {self.im!s})"


def _as_cs(x) -> ComplexScalar:
    if isinstance(x, ComplexScalar):
        return x
    if isinstance(x, complex):
        return ComplexScalar(x.real, x.imag)
    if isinstance(x, (int, float, Fraction)) or isinstance(x, (mpq, mpfr)):
        return ComplexScalar(x, 0)
    raise TypeError(f"cannot treat {type(x).__name__} as a complex scalar")

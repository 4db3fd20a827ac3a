import math
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr, mpq
from hypothesis import given, strategies as st

from pseudopower.errors import PrecisionError
from pseudopower.precision import (
    EXACT,
    MACHINE,
    ComplexScalar,
    Precision,
    big,
    default_precision,
    parse_rational_or_float,
)


@pytest.mark.parametrize(
    "text, kind, bits",
    [("exact", "exact", 0), ("machine", "machine", 53), ("big", "big", 256), ("big:128", "big", 128), (" BIG:64 ", "big", 64)],
)
def test_parse(text, kind, bits):
    p = Precision.parse(text)
    assert (p.kind, p.bits) == (kind, bits)


@pytest.mark.parametrize("text", ["", "float", "big:", "big:x", "big:10", "quad"])
def test_parse_rejects(text):
    with pytest.raises(PrecisionError):
        Precision.parse(text)


def test_str_round_trip():
    for p in (EXACT, MACHINE, big(128)):
        assert Precision.parse(str(p)) == p


def test_env_default(monkeypatch):
    monkeypatch.delenv("PSEUDOPOWER_DEFAULT_PRECISION", raising=False)
    assert default_precision() == big(256)
    monkeypatch.setenv("PSEUDOPOWER_DEFAULT_PRECISION", "machine")
    assert default_precision() == MACHINE


def test_exact_rejects_non_integral_float():
    with pytest.raises(PrecisionError):
        EXACT.convert(1.5)
    assert EXACT.convert(2.0) == 2
    assert EXACT.convert("3/2") == mpq(3, 2)
    assert EXACT.convert(Fraction(1, 3)) == mpq(1, 3)


def test_big_convert_uses_mantissa():
    p = big(200)
    with p.context():
        third = p.convert("1/3")
    assert third.precision == 200
    assert abs(mpq(third) - mpq(1, 3)) < mpq(1, 2**199)


def test_parse_number():
    assert parse_rational_or_float("3/2") == mpq(3, 2)
    assert parse_rational_or_float("4") == mpq(4)
    assert isinstance(parse_rational_or_float("1.5"), float)
    with pytest.raises(PrecisionError):
        parse_rational_or_float("two")


def test_transcendentals_need_float():
    with pytest.raises(PrecisionError):
        EXACT.pi()
    with pytest.raises(PrecisionError):
        EXACT.sqrt(2)
    assert EXACT.sqrt(mpq(9, 4)) == mpq(3, 2)


def test_format_round_trips():
    p = big(256)
    with p.context():
        x = gmpy2.const_pi()
    assert mpfr(p.format(x), 256) == x
    assert float(MACHINE.format(0.1)) == 0.1
    assert mpq(EXACT.format(mpq(-7, 3))) == mpq(-7, 3)


def test_complex_scalar_arithmetic():
    a = ComplexScalar(mpq(1), mpq(2))
    b = ComplexScalar(mpq(3), mpq(-1))
    assert a * b == ComplexScalar(5, 5)
    assert a + b == ComplexScalar(4, 1)
    assert a - b == ComplexScalar(-2, 3)
    assert a.conjugate().abs2() == 5
    assert -a == ComplexScalar(-1, -2)


def test_log_abs_beyond_double_range():
    z = ComplexScalar(mpq(2) ** 5000, mpq(0))
    assert z.log_abs() == pytest.approx(5000 * math.log(2), rel=1e-14)
    assert ComplexScalar(0, 0).log_abs() == -math.inf


@given(st.fractions(), st.fractions(), st.fractions(), st.fractions())
def test_complex_product_exact_and_commutative(a, b, c, d):
    x = ComplexScalar(mpq(a), mpq(b))
    y = ComplexScalar(mpq(c), mpq(d))
    assert x * y == y * x
    assert (x * y).abs2() == x.abs2() * y.abs2()

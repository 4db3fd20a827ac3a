import math

import numpy as np
import pytest
import scipy.linalg
from gmpy2 import mpq
from hypothesis import assume, given, settings, strategies as st

from pseudopower.errors import (
    ConvergenceError,
    DimensionError,
    PrecisionError,
    SingularMatrixError,
    ToleranceError,
)
from pseudopower.linalg import (
    LU,
    Matrix,
    Vector,
    identity,
    mat_exp_scaled,
    mat_inverse,
    mat_mul,
    mat_pow,
    matvec,
    s_max,
    s_min,
    singular_extremes,
)
from pseudopower.models import build_block_A, build_ehrenfest_H, build_tilted_pauli, build_toeplitz_B
from pseudopower.precision import EXACT, MACHINE, ComplexScalar, big

P256 = big(256)


def X(g, p=EXACT):
    return build_tilted_pauli(g, p)


def test_identity_is_neutral(any_precision):
    a = Matrix.from_rows([[1, 2], [3, 4]], any_precision)
    assert mat_mul(identity(2, any_precision), a) == a
    assert mat_mul(a, identity(2, any_precision)) == a


def test_tilted_pauli_squares_to_identity():
    x = Matrix.from_rows([[0, 3], ["1/3", 0]], EXACT)
    assert mat_mul(x, x) == identity(2, EXACT)


def test_B_times_e1():
    b = build_toeplitz_B(2, 2, EXACT)
    e1 = Vector.basis(2, 0, EXACT)
    assert matvec(b, e1) == Vector.from_values([0, 2], EXACT)


def test_mat_mul_checks():
    a = Matrix.from_rows([[1, 2, 3]], EXACT)
    with pytest.raises(DimensionError):
        mat_mul(a, a)
    with pytest.raises(PrecisionError):
        mat_mul(identity(2, EXACT), identity(2, MACHINE))


def test_complex_product_matches_numpy():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    got = mat_mul(Matrix.from_numpy(a, MACHINE), Matrix.from_numpy(b, MACHINE)).to_complex()
    assert np.allclose(got, a @ b, rtol=1e-14, atol=1e-14)


def test_mat_pow_zero_is_identity():
    a = build_block_A(6, 2, EXACT)
    assert mat_pow(a, 0) == identity(6, EXACT)


def test_mat_pow_root_of_identity():
    assert mat_pow(build_block_A(6, 2, EXACT), 8) == identity(6, EXACT)
    assert mat_pow(X(mpq(5, 2)), 2) == identity(2, EXACT)


def test_mat_pow_rejects_rectangular():
    with pytest.raises(DimensionError):
        mat_pow(Matrix.from_rows([[1, 2]], EXACT), 2)


def test_matvec_sparse_path_agrees_with_dense():
    a = build_block_A(40, mpq(3, 2), EXACT)
    assert a._csr is not None
    v = Vector.from_values([mpq(k, 7) for k in range(40)], EXACT)
    dense = a.re.dot(v.re)
    assert list(matvec(a, v).re) == list(dense)


def test_inverse_examples():
    assert mat_inverse(identity(3, EXACT)) == identity(3, EXACT)
    assert mat_inverse(X(2)) == Matrix.from_rows([[0, 2], ["1/2", 0]], EXACT)
    d = Matrix.from_rows([[2, 0], [0, 4]], EXACT)
    assert mat_inverse(d) == Matrix.from_rows([["1/2", 0], [0, "1/4"]], EXACT)


def test_inverse_singular():
    s = Matrix.from_rows([[1, 2], [2, 4]], EXACT)
    with pytest.raises(SingularMatrixError):
        mat_inverse(s)
    with pytest.raises(SingularMatrixError):
        LU(s.astype(MACHINE))


def test_complex_inverse_big():
    a = Matrix.from_rows([[(1, 1), 2], [0, (0, -1)]], P256)
    inv = mat_inverse(a)
    with P256.context():
        err = (mat_mul(a, inv) - identity(2, P256)).frobenius_norm()
    assert err < 1e-70


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=9, max_size=9))
def test_inverse_exact_property(entries):
    a = Matrix.from_rows([entries[0:3], entries[3:6], entries[6:9]], EXACT)
    det = round(np.linalg.det(np.array(entries, dtype=float).reshape(3, 3)))
    assume(det != 0)
    inv = mat_inverse(a)
    assert mat_mul(a, inv) == identity(3, EXACT)
    assert mat_mul(inv, a) == identity(3, EXACT)


@pytest.mark.parametrize("p", [MACHINE, big(128)])
def test_singular_extremes_tilted_pauli(p):
    hi, lo = singular_extremes(X(2, p))
    assert float(hi) == pytest.approx(2, rel=1e-12)
    assert float(lo) == pytest.approx(0.5, rel=1e-12)


def test_singular_extremes_identity():
    hi, lo = singular_extremes(identity(5, P256))
    assert float(hi) == pytest.approx(1, abs=1e-15)
    assert float(lo) == pytest.approx(1, abs=1e-15)


def test_singular_values_match_lapack():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    s = scipy.linalg.svdvals(a)
    m = Matrix.from_numpy(a, big(128))
    assert float(s_max(m)) == pytest.approx(s[0], rel=1e-10)
    assert float(s_min(m)) == pytest.approx(s[-1], rel=1e-10)


def test_s_min_of_shifted_block_matrix():
    # oracle: mpmath svd_r at 40 digits of 2I - A(N=40, g=2)
    a = build_block_A(40, 2, big(128))
    assert float(s_min(a.shift(2))) == pytest.approx(0.096713472245179575816, rel=1e-10)


def test_s_min_singular_gives_zero():
    # A(N=2) = [[0, 1], [-1, 0]] has eigenvalues +-i, both exactly representable
    two = build_block_A(2, 1, P256)
    assert s_min(two.shift((0, 1))) == 0
    # 3I - A = [[3, -1], [1, 3]] is sqrt(10) times a rotation
    assert float(s_min(two.shift(3))) == pytest.approx(math.sqrt(10), rel=1e-12)


def test_singular_values_reject_exact():
    with pytest.raises(PrecisionError):
        s_max(identity(2, EXACT))


def test_iteration_cap_reported():
    # nearly degenerate top singular values: power iteration needs many steps
    a = Matrix.from_rows([[1, 0], [0, "0.999999999"]], MACHINE)
    with pytest.raises(ConvergenceError) as info:
        s_max(a, max_iter=3, fallback=False)
    assert info.value.iterations == 3
    assert info.value.estimate is not None


def test_exp_of_zero_is_identity():
    h = build_ehrenfest_H(4, P256)
    assert mat_exp_scaled(h, 0) == identity(4, P256)


def test_exp_of_involution():
    h = Matrix.from_rows([[0, 1], [1, 0]], P256)
    with P256.context():
        scale = ComplexScalar(P256.zero, P256.pi() / 4)
        c = P256.cos(P256.pi() / 4)
        expected = Matrix.from_rows([[c, (0, c)], [(0, c), c]], P256)
    got = mat_exp_scaled(h, scale, tol=1e-60)
    with P256.context():
        assert float((got - expected).frobenius_norm()) < 1e-60


def test_exp_matches_scipy_machine():
    h = build_ehrenfest_H(8, MACHINE)
    got = mat_exp_scaled(h, ComplexScalar(0.0, math.pi / 16), tol=1e-11).to_complex()
    want = scipy.linalg.expm(1j * math.pi / 16 * h.re)
    assert np.allclose(got, want, rtol=0, atol=1e-11)


def test_exp_tolerance_beyond_mantissa():
    h = build_ehrenfest_H(6, MACHINE)
    with pytest.raises(ToleranceError) as info:
        mat_exp_scaled(h, ComplexScalar(0.0, 0.3), tol=1e-30)
    assert info.value.required_bits > 53


def test_ehrenfest_power_is_minus_identity():
    # spectrum {-49, ..., 49} of odd integers: exp(i pi/100 * odd * 100) = -1
    from pseudopower.models import ehrenfest_propagator

    p = P256
    a = ehrenfest_propagator(50, p)
    with p.context():
        err = (mat_pow(a, 100) + identity(50, p)).frobenius_norm()
    assert float(err) < 1e-20


def test_matrix_is_immutable():
    a = identity(2, MACHINE)
    with pytest.raises(ValueError):
        a.re[0, 0] = 5.0

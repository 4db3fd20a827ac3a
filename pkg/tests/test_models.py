import json

import numpy as np
import pytest
import sympy
from gmpy2 import mpq

from pseudopower.errors import DimensionError, PrecisionError, SingularMatrixError, ValidationError
from pseudopower.linalg import Matrix, identity, mat_mul, mat_pow
from pseudopower.models import (
    ModelSpec,
    build_block_A,
    build_ehrenfest_H,
    build_matrix,
    build_tilted_pauli,
    build_toeplitz_B,
    load_matrix,
    matrix_from_dict,
    matrix_to_dict,
    propagator,
    save_matrix,
    transfer_from_tight_binding,
)
from pseudopower.precision import EXACT, MACHINE, big


def rows(m):
    return [[m.re[i, j] for j in range(m.n_cols)] for i in range(m.n_rows)]


def test_toeplitz_examples():
    assert rows(build_toeplitz_B(2, 2, EXACT)) == [[0, mpq(1, 2)], [2, 0]]
    assert rows(build_toeplitz_B(1, 7, EXACT)) == [[0]]
    b = build_toeplitz_B(3, 1, EXACT)
    assert rows(b) == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]


@pytest.mark.parametrize("g", [0, -1])
def test_bad_g(g):
    with pytest.raises(ValidationError):
        build_toeplitz_B(3, g, EXACT)
    with pytest.raises(ValidationError):
        build_tilted_pauli(g, EXACT)


def test_block_examples():
    assert rows(build_block_A(4, 2, EXACT)) == [
        [0, mpq(1, 2), 1, 0],
        [2, 0, 0, 1],
        [-1, 0, 0, 0],
        [0, -1, 0, 0],
    ]
    assert rows(build_block_A(2, mpq(5, 3), EXACT)) == [[0, 1], [-1, 0]]


@pytest.mark.parametrize("n", [0, 3, 5])
def test_block_rejects_odd(n):
    with pytest.raises(ValidationError):
        build_block_A(n, 2, EXACT)


@pytest.mark.parametrize("n, g", [(2, mpq(3)), (8, mpq(1, 2)), (12, mpq(7, 5))])
def test_block_is_root_of_identity(n, g):
    assert mat_pow(build_block_A(n, g, EXACT), n + 2) == identity(n, EXACT)


def test_ehrenfest_examples():
    assert rows(build_ehrenfest_H(2, EXACT)) == [[0, 1], [1, 0]]
    assert rows(build_ehrenfest_H(3, EXACT)) == [[0, 1, 0], [2, 0, 2], [0, 1, 0]]


@pytest.mark.parametrize("n", [4, 5, 9])
def test_ehrenfest_spectrum_independent(n):
    # oracle: sympy's exact eigenvalues
    h = sympy.Matrix(rows(build_ehrenfest_H(n, EXACT))).applyfunc(lambda x: sympy.Integer(int(x)))
    assert sorted(h.eigenvals(multiple=True)) == list(range(-(n - 1), n, 2))


def test_tilted_pauli():
    assert rows(build_tilted_pauli(1, EXACT)) == [[0, 1], [1, 0]]
    x = build_tilted_pauli(2, EXACT)
    assert rows(x) == [[0, 2], [mpq(1, 2), 0]]
    assert mat_mul(x, x) == identity(2, EXACT)


def test_tight_binding_trivial():
    z = Matrix.from_rows([[0, 0], [0, 0]], EXACT)
    t = transfer_from_tight_binding(0, z, identity(2, EXACT))
    assert rows(t) == [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]


def test_tight_binding_scalar_block():
    # W = 1: h = 1, h0 = -b gives top-left (E - h0)/h = b at E = 0
    h0 = Matrix.from_rows([["-5/2"]], EXACT)
    t = transfer_from_tight_binding(0, h0, identity(1, EXACT))
    assert rows(t) == [[mpq(5, 2), -1], [1, 0]]


def test_tight_binding_hermitian_hop():
    h = Matrix.from_rows([[2, 1], [1, 3]], EXACT)
    h0 = Matrix.from_rows([[0, 1], [1, 0]], EXACT)
    t = transfer_from_tight_binding(mpq(1, 2), h0, h)
    # h^-1 h^H = I for hermitian h: top-right block is exactly -I
    assert [r[2:] for r in rows(t)[:2]] == [[-1, 0], [0, -1]]


def test_tight_binding_singular_hop():
    z = Matrix.from_rows([[1, 1], [1, 1]], EXACT)
    with pytest.raises(SingularMatrixError):
        transfer_from_tight_binding(0, identity(2, EXACT), z)


def test_spec_validation():
    with pytest.raises(ValidationError):
        ModelSpec("nope", n=4)
    with pytest.raises(ValidationError):
        ModelSpec("block-transfer", n=5)
    with pytest.raises(ValidationError):
        ModelSpec("external-file")
    spec = ModelSpec("block-transfer", n=6, g=1.5)
    with pytest.raises(PrecisionError):
        spec.check_precision(EXACT)
    assert ModelSpec("block-transfer", n=6).g == 2
    assert ModelSpec("block-transfer", n=6).period == 8
    assert ModelSpec("ehrenfest", n=6).period == 12


def test_spec_round_trip():
    spec = ModelSpec("toeplitz-b", n=5, g=mpq(3, 2))
    assert ModelSpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec


def test_build_and_propagator():
    spec = ModelSpec("ehrenfest", n=4)
    assert build_matrix(spec, EXACT) == build_ehrenfest_H(4, EXACT)
    a = propagator(spec, MACHINE)
    assert np.allclose(np.linalg.matrix_power(a.to_complex(), 8), -np.eye(4), atol=1e-10)


def test_save_load_round_trip(tmp_path):
    a = build_block_A(4, mpq(3, 2), EXACT)
    path = tmp_path / "a.json"
    save_matrix(a, path)
    assert load_matrix(path) == a


def test_load_machine_matrix(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n_rows": 1, "n_cols": 2, "precision": "machine", "entries": [[0.25, 0], [1, -1]]}))
    m = load_matrix(path)
    assert m.precision == MACHINE
    assert m.to_complex().tolist() == [[0.25, 1 - 1j]]


def test_big_round_trip_is_bit_exact():
    p = big(192)
    a = propagator(ModelSpec("ehrenfest", n=3), p)
    assert matrix_from_dict(matrix_to_dict(a)) == a


@pytest.mark.parametrize(
    "doc, err",
    [
        ({"n_rows": 2, "n_cols": 2, "precision": "exact", "entries": [[1, 0]] * 3}, DimensionError),
        ({"n_rows": 1, "n_cols": 1, "precision": "exact", "entries": [[0.5, 0]]}, PrecisionError),
        ({"n_rows": 1, "n_cols": 1, "precision": "exact"}, ValidationError),
        ({"n_rows": 1, "n_cols": 1, "precision": "exact", "entries": [[1]]}, ValidationError),
    ],
)
def test_malformed_documents(doc, err):
    with pytest.raises(err):
        matrix_from_dict(doc)


def test_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(ValidationError):
        load_matrix(path)

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from holonomic.numkit import (
    NotHermitianError,
    gate_distance,
    herm_expm,
    matrix_from_json,
    matrix_to_json,
    phase_aligned_error,
    unitarity_defect,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def taylor_expm(m, terms=30):
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    return out


def hermitian(dim):
    floats = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
    return st.tuples(arrays(float, (dim, dim), elements=floats),
                     arrays(float, (dim, dim), elements=floats)).map(
        lambda p: (p[0] + 1j * p[1]) + (p[0] + 1j * p[1]).conj().T)


@pytest.mark.parametrize("dim", [1, 2, 5])
def test_expm_of_zero_is_identity(dim):
    assert np.array_equal(herm_expm(np.zeros((dim, dim)), 1.0), np.eye(dim))


def test_expm_sigma_x_pi_against_taylor():
    expected = taylor_expm(1j * math.pi * SX)
    np.testing.assert_allclose(expected, -np.eye(2), atol=1e-12)
    np.testing.assert_allclose(herm_expm(SX, math.pi), expected, atol=1e-12)


def test_expm_diagonal():
    got = herm_expm(np.diag([1.0, 2.0]), math.pi / 2)
    np.testing.assert_allclose(got, np.diag([np.exp(0.5j * math.pi), np.exp(1j * math.pi)]),
                               atol=1e-15)


def test_expm_rejects_non_hermitian():
    with pytest.raises(NotHermitianError) as info:
        herm_expm(np.array([[0, 1], [0, 0]], dtype=complex))
    assert info.value.residual == pytest.approx(1.0)


def test_unitarity_defect_examples():
    assert unitarity_defect(np.eye(3)) == 0.0
    assert unitarity_defect(herm_expm(SY, 0.3)) < 1e-12
    assert unitarity_defect(2 * np.eye(2)) == pytest.approx(3 * math.sqrt(2), rel=1e-14)


def test_gate_distance_examples():
    u = herm_expm(SX + 0.3 * SZ, 0.8)
    assert gate_distance(u, u) < 1e-15
    assert gate_distance(SZ, np.exp(1.234j) * SZ) < 1e-15
    assert gate_distance(SX, SZ) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gate_distance(np.eye(2), np.eye(3))


def test_phase_aligned_error_is_linear_in_perturbation():
    u = herm_expm(SX, 0.4)
    e1 = phase_aligned_error(u, herm_expm(SZ, 1e-4) @ u)
    e2 = phase_aligned_error(u, herm_expm(SZ, 2e-4) @ u)
    assert e2 / e1 == pytest.approx(2.0, rel=1e-3)
    assert phase_aligned_error(u, np.exp(0.7j) * u) < 1e-15


def test_matrix_json_round_trip():
    m = herm_expm(SX + SY, 0.37)
    obj = json.loads(json.dumps(matrix_to_json(m)))
    assert obj["dim"] == 2 and len(obj["re"]) == 4
    assert np.array_equal(matrix_from_json(obj), m)
    with pytest.raises(ValueError):
        matrix_from_json({"dim": 2, "re": [0.0], "im": [0.0]})


@settings(max_examples=60, deadline=None)
@given(hermitian(3), st.floats(-5, 5))
def test_expm_is_unitary(m, s):
    assert unitarity_defect(herm_expm(m, s)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(hermitian(4), st.floats(-2, 2), st.floats(-2, 2))
def test_expm_group_property(m, s, r):
    lhs = herm_expm(m, s) @ herm_expm(m, r)
    np.testing.assert_allclose(lhs, herm_expm(m, s + r), atol=1e-11)


@settings(max_examples=60, deadline=None)
@given(hermitian(2), hermitian(2), st.floats(-10, 10))
def test_gate_distance_symmetric_and_phase_blind(a, b, chi):
    u, v = herm_expm(a, 1.0), herm_expm(b, 1.0)
    d = gate_distance(u, v)
    assert 0.0 <= d <= 1.0
    assert abs(d - gate_distance(v, u)) < 1e-14
    assert abs(d - gate_distance(np.exp(1j * chi) * u, v)) < 1e-13

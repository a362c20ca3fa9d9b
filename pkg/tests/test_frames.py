import json
import math

import numpy as np
import pytest

from holonomic import frames, spherepaths as sp
from conftest import make_frame

PI = math.pi


def gram_oracle(frame, t):
    n = frame.N
    g = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            g[j, k] = np.vdot(frame.nu(j + 1, t), frame.nu(k + 1, t))
    return g


def test_one_qubit_frame_at_pole():
    theta, varphi = 1.1, 0.4
    f = make_frame(sp.three_arc(1.0), theta, varphi)
    nu2 = np.array([math.sin(theta / 2) * np.exp(-1j * varphi), -math.cos(theta / 2), 0])
    np.testing.assert_allclose(f.nu(2, 0.0), nu2, atol=1e-15)
    np.testing.assert_allclose(f.nu(3, 0.0), [0, 0, -1], atol=1e-15)
    assert f.N == 3 and f.L == 2


def test_theta_zero_keeps_nu1_fixed():
    f = make_frame(sp.minimal_circle(1.0), 0.0, 0.9)
    for t in np.linspace(0, f.tau, 17):
        np.testing.assert_allclose(f.nu(1, t), [1, 0, 0], atol=1e-15)


@pytest.mark.parametrize("two_qubit", [False, True])
def test_gram_is_identity(two_qubit, pi8_paths):
    for path in pi8_paths.values():
        f = make_frame(path, 0.8, 2.1, two_qubit)
        for t in np.linspace(0, f.tau, 100):
            assert np.max(np.abs(gram_oracle(f, t) - np.eye(f.N))) < 1e-10


def test_orthonormality_on_fine_grid(pi8_paths):
    for path in pi8_paths.values():
        for two in (False, True):
            f = make_frame(path, 2.0, -0.6, two)
            worst = max(frames.orthonormality_residual(f, t) for t in np.linspace(0, f.tau, 1000))
            assert worst <= 1e-10


def test_orthonormality_examples():
    f1 = make_frame(sp.orange_slice(PI / 8))
    assert frames.orthonormality_residual(f1, 0.0) < 1e-12
    f2 = make_frame(sp.three_arc(PI / 4), two_qubit=True)
    assert frames.orthonormality_residual(f2, f2.tau / 3) < 1e-12
    bad = frames.CallableFrame(3, 2, 1.0, lambda t: np.array([[1, 1, 0], [0, 0, 0], [0, 0, 1]]))
    assert frames.orthonormality_residual(bad, 0.5) == pytest.approx(1.0)


def test_two_qubit_frame_structure():
    theta, varphi = 0.9, 1.3
    path = sp.minimal_circle(1.2)
    f1 = make_frame(path, theta, varphi)
    f2 = make_frame(path, theta, varphi, two_qubit=True)
    assert (f2.N, f2.L) == (5, 4)
    for t in np.linspace(0, f2.tau, 9):
        assert np.all(f2.nu_dot(1, t) == 0) and np.all(f2.nu_dot(2, t) == 0)
        np.testing.assert_array_equal(f2.nu(4, t)[2:], f1.nu(2, t))
        np.testing.assert_array_equal(f2.nu(5, t)[2:], f1.nu(3, t))
        np.testing.assert_array_equal(f2.vectors(t)[2:, 2:], f1.vectors(t))


def test_cyclicity_and_initial_span(pi8_paths):
    for path in pi8_paths.values():
        for two in (False, True):
            f = make_frame(path, 1.7, 0.2, two)
            assert frames.cyclicity_residual(f) <= 1e-10
            assert frames.initial_span_residual(f) <= 1e-10


def test_open_path_rejected():
    open_path = sp.SpherePath([sp.meridian(0.0, 0.0, 0.3)])
    params = frames.FrameParams(1.0, 0.0, open_path)
    with pytest.raises(sp.PathError):
        frames.one_qubit_frame(params)
    with pytest.raises(sp.PathError):
        frames.two_qubit_frame(params)
    frames.one_qubit_frame(params, check_closed=False)


def test_gauge_rate():
    f = make_frame(sp.three_arc(1.0))
    t = PI / 2 + 0.5  # on the parallel segment, alpha = pi / 2, beta' = 1
    assert f.gamma_dot(t) == pytest.approx(1.5, abs=1e-14)
    assert f.gamma_dot(0.3) == 0.0


def test_derivative_selfcheck_constant_frame():
    const = frames.CallableFrame(3, 2, 1.0, lambda t: np.eye(3), lambda t: np.zeros((3, 3)))
    assert frames.derivative_selfcheck(const, 0.5, 1e-3) == 0.0


def test_derivative_selfcheck_second_order():
    f = make_frame(sp.minimal_circle(PI / 8), 1.1, 0.4)
    t = 0.37 * f.tau
    h = 1e-4 * f.tau
    r1 = frames.derivative_selfcheck(f, t, h)
    r2 = frames.derivative_selfcheck(f, t, h / 2)
    assert r1 <= 1e-6
    assert 3.5 <= r1 / r2 <= 4.5
    with pytest.raises(ValueError):
        frames.derivative_selfcheck(f, t, 0.0)


def test_callable_frame_finite_difference_derivatives():
    ref = make_frame(sp.minimal_circle(1.0), 0.6, 0.2)
    fd = frames.CallableFrame(3, 2, ref.tau, ref.vectors, gamma_dot=ref.gamma_dot)
    for t in np.linspace(0.1, ref.tau - 0.1, 7):
        np.testing.assert_allclose(fd.derivatives(t), ref.derivatives(t), atol=1e-8)


def test_callable_frame_needs_single_auxiliary():
    with pytest.raises(frames.FrameError):
        frames.CallableFrame(4, 2, 1.0, lambda t: np.eye(4))


def tabulate(frame, n):
    grid = np.linspace(0, frame.tau, n)
    vecs = np.array([frame.vectors(t) for t in grid])
    return {
        "N": frame.N, "L": frame.L, "tau": frame.tau, "grid": grid.tolist(),
        "vectors": np.stack([vecs.real, vecs.imag], axis=-1).tolist(),
        "gamma_dot": [frame.gamma_dot(t) for t in grid],
    }


def test_tabulated_frame_from_json():
    ref = make_frame(sp.minimal_circle(1.0), 0.6, 0.2)
    obj = json.loads(json.dumps(tabulate(ref, 401)))
    tab = frames.frame_from_json(obj)
    assert (tab.N, tab.L) == (3, 2)
    for t in np.linspace(0, ref.tau, 13):
        assert frames.orthonormality_residual(tab, t) < 1e-12
        np.testing.assert_allclose(tab.vectors(t), ref.vectors(t), atol=1e-6)
    assert frames.cyclicity_residual(tab) < 1e-10
    with pytest.raises(frames.FrameError):
        frames.frame_from_json({**obj, "vectors": obj["vectors"][:-1]})

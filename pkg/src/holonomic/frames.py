"""
Auxiliary frames: time-dependent orthonormal bases with a closed period.

A frame holds ``N = L + 1`` vectors ``nu_1(t) .. nu_N(t)``; the first ``L``
span the computational subspace at ``t = 0`` and the last is the auxiliary
direction. Vectors are stored as the columns of an ``N x N`` matrix in a
fixed canonical basis:

* one qubit: ``|0>, |1>, |e>``
* two qubits: ``|00>, |01>, |10>, |11>, |ee>``
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .spherepaths import PathError

__all__ = [
    "FrameError",
    "FrameParams",
    "AuxiliaryFrame",
    "OneQubitFrame",
    "TwoQubitFrame",
    "CallableFrame",
    "one_qubit_frame",
    "two_qubit_frame",
    "frame_from_json",
    "gauge_gamma_dot",
    "orthonormality_residual",
    "derivative_selfcheck",
    "cyclicity_residual",
    "initial_span_residual",
]

ONE_QUBIT_BASIS = ("0", "1", "e")
TWO_QUBIT_BASIS = ("00", "01", "10", "11", "ee")


class FrameError(ValueError):
    """Frame construction or evaluation failed a consistency check."""


@dataclass(frozen=True)
class FrameParams:
    """Fixed axis angles ``theta``, ``varphi`` and the control path."""

    theta: float
    varphi: float
    path: object


class AuxiliaryFrame:
    """
    Base class for frames.

    Subclasses implement :meth:`vectors`, :meth:`derivatives` and
    :meth:`gamma_dot`. ``breakpoints`` lists the times where derivatives may
    jump; integrators split their steps there.
    """

    N: int
    L: int
    tau: float
    basis_labels: tuple = ()

    @property
    def breakpoints(self):
        return np.array([0.0, self.tau])

    def vectors(self, t):
        raise NotImplementedError

    def derivatives(self, t):
        raise NotImplementedError

    def gamma_dot(self, t):
        return 0.0

    def nu(self, k, t):
        """``k``-th frame vector, counted from 1."""
        return self.vectors(t)[:, k - 1]

    def nu_dot(self, k, t):
        return self.derivatives(t)[:, k - 1]


def gauge_gamma_dot(alpha, dbeta):
    """Phase rate ``beta' (3 + cos alpha) / 2`` that removes the unwanted coupling."""
    return 0.5 * dbeta * (3.0 + math.cos(alpha))


def _qutrit_block(theta, varphi, a, b, da, db):
    """Frame vectors and time derivatives on the ``(g0, g1, e)`` block."""
    st, ct = math.sin(theta / 2), math.cos(theta / 2)
    sa, ca = math.sin(a / 2), math.cos(a / 2)
    ephi = np.exp(-1j * varphi)
    eb = np.exp(1j * b)
    emb = np.conj(eb)

    v = np.empty((3, 3), dtype=complex)
    v[:, 0] = (ct, st / ephi, 0.0)
    v[:, 1] = (ca * st * ephi, -ca * ct, sa * eb)
    v[:, 2] = (sa * st * ephi * emb, -sa * ct * emb, -ca)

    # chain rule: d/dt = alpha' d/dalpha + beta' d/dbeta
    d_alpha = np.array([
        [0.0, -0.5 * sa * st * ephi, 0.5 * ca * st * ephi * emb],
        [0.0, 0.5 * sa * ct, -0.5 * ca * ct * emb],
        [0.0, 0.5 * ca * eb, 0.5 * sa],
    ], dtype=complex)
    d_beta = np.array([
        [0.0, 0.0, -1j * sa * st * ephi * emb],
        [0.0, 0.0, 1j * sa * ct * emb],
        [0.0, 1j * sa * eb, 0.0],
    ], dtype=complex)
    return v, da * d_alpha + db * d_beta


class _PathFrame(AuxiliaryFrame):
    def __init__(self, params, check_closed=True):
        path = params.path
        if check_closed and not path.is_closed:
            a0, _ = path.point(0.0)
            a1, _ = path.point(path.duration)
            raise PathError(
                f"frame path must start and end at the pole; alpha(0)={a0}, alpha(tau)={a1}")
        self.params = params
        self.path = path
        self.tau = float(path.duration)

    @property
    def breakpoints(self):
        return self.path.breakpoints

    def gamma_dot(self, t):
        a, _, _, db = self.path.rates(t)
        return gauge_gamma_dot(a, db)

    def _block(self, t):
        p = self.params
        a, b, da, db = self.path.rates(t)
        return _qutrit_block(p.theta, p.varphi, a, b, da, db)


class OneQubitFrame(_PathFrame):
    """Three-level frame on ``|0>, |1>, |e>`` driven by a sphere path."""

    N, L = 3, 2
    basis_labels = ONE_QUBIT_BASIS

    def vectors(self, t):
        return self._block(t)[0]

    def derivatives(self, t):
        return self._block(t)[1]

    def state(self, t):
        return self._block(t)


class TwoQubitFrame(_PathFrame):
    """
    Five-level frame: ``|00>, |01>`` fixed, the one-qubit frame on
    ``|10>, |11>, |ee>``.
    """

    N, L = 5, 4
    basis_labels = TWO_QUBIT_BASIS

    def state(self, t):
        v3, d3 = self._block(t)
        v = np.zeros((5, 5), dtype=complex)
        d = np.zeros((5, 5), dtype=complex)
        v[0, 0] = v[1, 1] = 1.0
        v[2:, 2:] = v3
        d[2:, 2:] = d3
        return v, d

    def vectors(self, t):
        return self.state(t)[0]

    def derivatives(self, t):
        return self.state(t)[1]


def one_qubit_frame(params, check_closed=True):
    """
    Build the one-qubit frame for ``params``.

    Raises
    ------
    PathError
        If the path does not start and end at the north pole and
        ``check_closed`` is true.
    """
    return OneQubitFrame(params, check_closed)


def two_qubit_frame(params, check_closed=True):
    return TwoQubitFrame(params, check_closed)


class CallableFrame(AuxiliaryFrame):
    """
    Frame defined by user callables.

    Parameters
    ----------
    N, L : int
        Space and computational dimensions; ``N`` must equal ``L + 1``.
    tau : float
        Period.
    vectors : callable
        ``t -> (N, N)`` complex array whose columns are the frame vectors.
    derivatives : callable, optional
        Time derivative of ``vectors``. Central differences with step
        ``1e-6 * tau`` are used when omitted.
    gamma_dot : callable, optional
        Phase rate of the auxiliary solution; zero when omitted.
    breakpoints : sequence of float, optional
    """

    def __init__(self, N, L, tau, vectors, derivatives=None, gamma_dot=None,
                 breakpoints=None, basis_labels=()):
        if N != L + 1:
            raise FrameError(f"only one auxiliary direction is supported: N={N}, L={L}")
        self.N, self.L, self.tau = int(N), int(L), float(tau)
        self._vectors = vectors
        self._derivatives = derivatives
        self._gamma_dot = gamma_dot
        self._breaks = (np.array([0.0, self.tau]) if breakpoints is None
                        else np.asarray(breakpoints, dtype=float))
        self.basis_labels = tuple(basis_labels)
        self.fd_step = 1e-6 * self.tau

    @property
    def breakpoints(self):
        return self._breaks.copy()

    def vectors(self, t):
        return np.asarray(self._vectors(t), dtype=complex)

    def derivatives(self, t):
        if self._derivatives is not None:
            return np.asarray(self._derivatives(t), dtype=complex)
        h = self.fd_step
        return (self.vectors(t + h) - self.vectors(t - h)) / (2.0 * h)

    def gamma_dot(self, t):
        return 0.0 if self._gamma_dot is None else float(self._gamma_dot(t))


def _lowdin(m):
    """Closest unitary to ``m`` (polar factor)."""
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def frame_from_json(obj):
    """
    Tabulated frame from ``{"N", "L", "tau", "grid", "vectors"}``.

    ``vectors`` holds, for each grid time, an ``N x N`` table whose columns are
    the frame vectors. Complex entries are ``[re, im]`` pairs or plain reals.
    Values between nodes come from cubic splines followed by polar
    re-orthonormalization; derivatives fall back to central differences.
    An optional ``"gamma_dot"`` list gives the phase rate on the same grid.
    """
    N, L, tau = int(obj["N"]), int(obj["L"]), float(obj["tau"])
    grid = np.asarray(obj["grid"], dtype=float)
    raw = np.asarray(obj["vectors"], dtype=float)
    if raw.shape == (grid.size, N, N, 2):
        table = raw[..., 0] + 1j * raw[..., 1]
    elif raw.shape == (grid.size, N, N):
        table = raw.astype(complex)
    else:
        raise FrameError(f"vectors table has shape {raw.shape}, expected ({grid.size}, {N}, {N}[, 2])")
    if abs(grid[0]) > 1e-12 or abs(grid[-1] - tau) > 1e-12 * max(1.0, tau):
        raise FrameError("frame grid must run from 0 to tau")
    closed = np.allclose(table[0], table[-1], atol=1e-10)
    bc = "periodic" if closed else "not-a-knot"
    spline_re = CubicSpline(grid, table.real, axis=0, bc_type=bc)
    spline_im = CubicSpline(grid, table.imag, axis=0, bc_type=bc)

    def vectors(t):
        return _lowdin(spline_re(t) + 1j * spline_im(t))

    gamma = None
    if "gamma_dot" in obj:
        g_spline = CubicSpline(grid, np.asarray(obj["gamma_dot"], dtype=float))
        gamma = lambda t: float(g_spline(t))  # noqa: E731
    return CallableFrame(N, L, tau, vectors, gamma_dot=gamma)


def orthonormality_residual(frame, t):
    """Largest entry of ``|G - I|`` for the Gram matrix ``G`` at time ``t``."""
    v = frame.vectors(t)
    gram = v.conj().T @ v
    return float(np.max(np.abs(gram - np.eye(v.shape[1]))))


def derivative_selfcheck(frame, t, h):
    """
    ``max_k || (nu_k(t+h) - nu_k(t-h)) / 2h - nu_dot_k(t) ||``.

    Second order in ``h`` for smooth frames.
    """
    if not h > 0.0:
        raise ValueError("step must be positive")
    fd = (frame.vectors(t + h) - frame.vectors(t - h)) / (2.0 * h)
    return float(np.max(np.linalg.norm(fd - frame.derivatives(t), axis=0)))


def cyclicity_residual(frame):
    """``max_k ||nu_k(tau) - nu_k(0)||``."""
    diff = frame.vectors(frame.tau) - frame.vectors(0.0)
    return float(np.max(np.linalg.norm(diff, axis=0)))


def initial_span_residual(frame):
    """
    Distance between the projector on ``nu_1(0) .. nu_L(0)`` and the projector
    on the first ``L`` canonical basis vectors (max entry).
    """
    v = frame.vectors(0.0)[:, :frame.L]
    proj = v @ v.conj().T
    target = np.zeros((frame.N, frame.N))
    target[:frame.L, :frame.L] = np.eye(frame.L)
    return float(np.max(np.abs(proj - target)))

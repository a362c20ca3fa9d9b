"""
Target gates, pulse channels and the link between path geometry and gates.
"""

import math
from dataclasses import dataclass

import numpy as np

from .frames import gauge_gamma_dot
from .spherepaths import _wrap_angle, enclosed_angle

__all__ = [
    "PAULI",
    "GateSpec",
    "PulseProfile",
    "analytic_one_qubit",
    "analytic_two_qubit",
    "pulse_profile",
    "hamiltonian_from_pulses",
    "hamiltonian_reference",
    "gate_from_geometry",
]

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class GateSpec:
    """Rotation about axis ``n(theta, varphi)`` by ``angle`` in ``[0, 2 pi)``."""

    theta: float
    varphi: float
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", _wrap_angle(float(self.angle)))

    @property
    def axis(self):
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.varphi), st * math.sin(self.varphi),
                         math.cos(self.theta)])

    def n_sigma(self):
        n = self.axis
        return n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]

    def to_json(self):
        return {"theta": self.theta, "varphi": self.varphi, "angle": self.angle}

    @classmethod
    def from_json(cls, obj):
        return cls(float(obj["theta"]), float(obj["varphi"]), float(obj["angle"]))


def analytic_one_qubit(spec):
    """``exp(i angle n.sigma / 2) = cos(angle/2) I + i sin(angle/2) n.sigma``."""
    half = 0.5 * spec.angle
    return math.cos(half) * np.eye(2, dtype=complex) + 1j * math.sin(half) * spec.n_sigma()


def analytic_two_qubit(spec):
    """
    ``|0><0| (x) I + exp(-i angle/2) |1><1| (x) exp(i angle n.sigma / 2)`` on
    ``|00>, |01>, |10>, |11>``.
    """
    u = np.zeros((4, 4), dtype=complex)
    u[:2, :2] = np.eye(2)
    u[2:, 2:] = np.exp(-0.5j * spec.angle) * analytic_one_qubit(spec)
    return u


@dataclass(frozen=True)
class PulseProfile:
    """Rabi frequencies and detuning sampled on time nodes."""

    t: np.ndarray
    omega0: np.ndarray
    omega1: np.ndarray
    delta: np.ndarray
    gamma_dot: np.ndarray

    def to_csv(self):
        lines = ["t,re_omega0,im_omega0,re_omega1,im_omega1,delta"]
        for t, o0, o1, d in zip(self.t, self.omega0, self.omega1, self.delta):
            lines.append(",".join(repr(float(x)) for x in
                                  (t, o0.real, o0.imag, o1.real, o1.imag, d)))
        return "\n".join(lines) + "\n"


def _pulses_at(theta, varphi, a, b, da, db):
    drive = 0.5 * (1j * da + db * math.sin(a))
    o0 = drive * math.sin(theta / 2) * np.exp(1j * (varphi + b))
    o1 = -drive * math.cos(theta / 2) * np.exp(1j * b)
    return o0, o1, -db * (1.0 + math.cos(a))


def pulse_profile(params, grid):
    """
    Sample the drive fields on the grid nodes.

    ``Omega0 = (i alpha' + beta' sin alpha) sin(theta/2) exp(i(varphi + beta)) / 2``,
    ``Omega1 = -(i alpha' + beta' sin alpha) cos(theta/2) exp(i beta) / 2``,
    ``Delta = -beta' (1 + cos alpha)``.
    """
    t = grid.nodes
    o0 = np.empty(t.size, dtype=complex)
    o1 = np.empty(t.size, dtype=complex)
    delta = np.empty(t.size)
    gd = np.empty(t.size)
    for m, x in enumerate(t):
        a, b, da, db = params.path.rates(x)
        o0[m], o1[m], delta[m] = _pulses_at(params.theta, params.varphi, a, b, da, db)
        gd[m] = gauge_gamma_dot(a, db)
    return PulseProfile(t, o0, o1, delta, gd)


def hamiltonian_from_pulses(omega0, omega1, delta):
    """``Delta |e><e| + (Omega0 |e><0| + Omega1 |e><1| + h.c.)`` on ``|0>, |1>, |e>``."""
    h = np.zeros((3, 3), dtype=complex)
    h[2, 2] = delta
    h[2, 0], h[2, 1] = omega0, omega1
    h[0, 2], h[1, 2] = np.conj(omega0), np.conj(omega1)
    return h


def hamiltonian_reference(params, t):
    """Closed-form three-level Hamiltonian for the one-qubit frame at ``t``."""
    a, b, da, db = params.path.rates(t)
    return hamiltonian_from_pulses(*_pulses_at(params.theta, params.varphi, a, b, da, db))


def gate_from_geometry(path, theta, varphi):
    """
    Gate realized by a closed path: the rotation angle is the enclosed angle.

    Raises
    ------
    PathError
        If the path is not closed at the north pole.
    """
    return GateSpec(float(theta), float(varphi), enclosed_angle(path))

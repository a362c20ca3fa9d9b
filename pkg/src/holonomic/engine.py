"""
Hamiltonian construction and propagation for a cyclic auxiliary frame.

Given a frame ``nu_1 .. nu_{L+1}`` and phase rate ``gamma'``, the Hamiltonian

    H = [i sum_{i<=L} <nu_i|nu_{L+1}'> |nu_i><nu_{L+1}| + h.c.]
        + (i <nu_{L+1}|nu_{L+1}'> - gamma') |nu_{L+1}><nu_{L+1}|

makes ``phi_k = sum_i C_ik nu_i`` (``k <= L``) solve the Schrodinger
equation, where ``C`` is the time-ordered exponential of ``i A`` with
``A_ij = i <nu_i|nu_j'>``. The gate on the computational subspace is
``C(tau)``.

Time ordering is discretized with exponential midpoint steps, later times on
the left. A uniform step that straddles a frame breakpoint is split there so
each sub-step samples a smooth piece.
"""

from dataclasses import dataclass, field

import numpy as np

from .frames import FrameError, orthonormality_residual
from .numkit import gate_distance, herm_expm, unitarity_defect

__all__ = [
    "DEFAULT_STEPS",
    "PropagationError",
    "InconsistencyError",
    "TimeGrid",
    "EvolutionRecord",
    "connection",
    "hamiltonian",
    "holonomy_matrix",
    "propagate",
    "check_cyclic",
    "check_parallel_transport",
    "computational_basis_change",
    "holonomic_gate",
    "block_restriction",
]

DEFAULT_STEPS = 4096
ORTHONORMALITY_TOL = 1e-10
GAUGE_IMAG_TOL = 1e-10
UNITARITY_TOL = 1e-10


class PropagationError(RuntimeError):
    """A propagated matrix drifted out of tolerance."""

    def __init__(self, node, quantity, value, tol):
        self.node, self.quantity, self.value, self.tol = node, quantity, value, tol
        super().__init__(f"{quantity} = {value:.3e} exceeds {tol:.1e} at node {node}")


class InconsistencyError(RuntimeError):
    """The two holonomy routes disagree beyond tolerance."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_m = m tau / steps``."""

    steps: int
    tau: float

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 16:
            raise ValueError(f"grid needs an integer number of steps >= 16, got {self.steps}")
        if not self.tau > 0.0:
            raise ValueError("grid period must be positive")

    @classmethod
    def for_frame(cls, frame, steps=DEFAULT_STEPS):
        return cls(int(steps), float(frame.tau))

    @property
    def dt(self):
        return self.tau / self.steps

    @property
    def nodes(self):
        return np.linspace(0.0, self.tau, self.steps + 1)


def _substeps(grid, breakpoints):
    """Yield lists of ``(t0, t1)`` pieces for each grid step."""
    nodes = grid.nodes
    bps = np.asarray(breakpoints, dtype=float)
    tol = 1e-12 * grid.tau
    bps = bps[(bps > tol) & (bps < grid.tau - tol)]
    for t0, t1 in zip(nodes[:-1], nodes[1:]):
        inner = bps[(bps > t0 + tol) & (bps < t1 - tol)]
        cuts = np.concatenate(([t0], inner, [t1]))
        yield list(zip(cuts[:-1], cuts[1:]))


def _checked_frame(frame, t, tol=ORTHONORMALITY_TOL):
    v = frame.vectors(t)
    resid = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))
    if resid > tol:
        raise FrameError(f"frame not orthonormal at t={t}: residual {resid:.3e}")
    return v, frame.derivatives(t)


def _connection_from(v, d, L):
    return 1j * (v[:, :L].conj().T @ d[:, :L])


def _hamiltonian_from(v, d, L, gamma_dot, t):
    comp, aux = v[:, :L], v[:, L]
    aux_dot = d[:, L]
    coupling = comp.conj().T @ aux_dot          # <nu_i|nu_{L+1}'>
    gauge = 1j * np.vdot(aux, aux_dot)
    if abs(gauge.imag) > GAUGE_IMAG_TOL * (1.0 + np.linalg.norm(aux_dot)):
        raise FrameError(f"auxiliary phase term has imaginary part {gauge.imag:.3e} at t={t}")
    off = 1j * np.outer(comp @ coupling, aux.conj())
    return off + off.conj().T + (gauge.real - gamma_dot) * np.outer(aux, aux.conj())


def connection(frame, t, tol=ORTHONORMALITY_TOL):
    """
    Connection matrix ``A_ij = i <nu_i|nu_j'>`` on the computational block.

    Raises
    ------
    FrameError
        If the frame fails the orthonormality check at ``t``.
    """
    v, d = _checked_frame(frame, t, tol)
    return _connection_from(v, d, frame.L)


def hamiltonian(frame, t, tol=ORTHONORMALITY_TOL):
    """
    Hamiltonian at time ``t`` in the frame's canonical basis.

    Raises
    ------
    FrameError
        If the frame is not orthonormal at ``t`` or the auxiliary phase term
        ``i <nu_{L+1}|nu_{L+1}'>`` has an imaginary part above ``1e-10``.
    """
    v, d = _checked_frame(frame, t, tol)
    return _hamiltonian_from(v, d, frame.L, frame.gamma_dot(t), t)


def _both(frame, t):
    v, d = _checked_frame(frame, t)
    L = frame.L
    return _hamiltonian_from(v, d, L, frame.gamma_dot(t), t), _connection_from(v, d, L)


def _ordered_products(frame, grid, hamiltonian_too, store=False):
    """
    Ordered products of midpoint exponentials, later factors on the left.

    Returns ``(U, C)`` final values, or their node histories if ``store``.
    ``U`` is ``None`` unless ``hamiltonian_too``.
    """
    N, L = frame.N, frame.L
    u = np.eye(N, dtype=complex)
    c = np.eye(L, dtype=complex)
    us, cs = [u], [c]
    for pieces in _substeps(grid, frame.breakpoints):
        for t0, t1 in pieces:
            tm, dt = 0.5 * (t0 + t1), t1 - t0
            if hamiltonian_too:
                h, a = _both(frame, tm)
                u = herm_expm(h, -dt, rtol=1e-9) @ u
            else:
                a = connection(frame, tm)
            c = herm_expm(a, dt, rtol=1e-9) @ c
        if store:
            us.append(u)
            cs.append(c)
    if store:
        return (np.array(us) if hamiltonian_too else None), np.array(cs)
    return (u if hamiltonian_too else None), c


def holonomy_matrix(frame, grid):
    """
    Time-ordered exponential ``C(tau) = T exp(i integral A dt)``.

    The result is expressed in the basis ``nu_1(0) .. nu_L(0)``.
    """
    return _ordered_products(frame, grid, hamiltonian_too=False)[1]


@dataclass(frozen=True)
class EvolutionRecord:
    """
    Propagation output on the grid nodes.

    ``U`` holds the full ``N x N`` propagators and ``C`` the ``L x L``
    holonomy partial products. ``H`` is the Hamiltonian at each node.
    """

    times: np.ndarray
    U: np.ndarray
    C: np.ndarray
    H: np.ndarray
    unitarity: np.ndarray
    parallel_transport: np.ndarray
    frame0: np.ndarray = field(repr=False)

    @property
    def L(self):
        return self.C.shape[1]

    def phi(self, m):
        """Propagated solutions ``U(t_m) nu_k(0)``, ``k <= L``, as columns."""
        return self.U[m] @ self.frame0[:, :self.L]

    def to_csv(self, pulses=None):
        """
        CSV with ``t``, unitarity defect, parallel-transport residual and,
        when ``pulses`` is given, the six real pulse channels.
        """
        cols = ["t", "unitarity_defect", "parallel_transport"]
        data = [self.times, self.unitarity, self.parallel_transport]
        if pulses is not None:
            cols += ["re_omega0", "im_omega0", "re_omega1", "im_omega1", "delta", "gamma_dot"]
            data += [pulses.omega0.real, pulses.omega0.imag, pulses.omega1.real,
                     pulses.omega1.imag, pulses.delta, pulses.gamma_dot]
        lines = [",".join(cols)]
        for row in zip(*data):
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def _pt_residual(h, phi):
    return float(np.max(np.abs(phi.conj().T @ h @ phi)))


def propagate(frame, grid, unitarity_tol=UNITARITY_TOL):
    """
    Propagate the Schrodinger equation ``i U' = H U`` over one period.

    Parameters
    ----------
    frame : AuxiliaryFrame
    grid : TimeGrid
    unitarity_tol : float
        Abort if any stored propagator has ``||U^H U - I||_F`` above this.

    Returns
    -------
    EvolutionRecord

    Raises
    ------
    PropagationError
        With the offending node index and value.
    """
    U, C = _ordered_products(frame, grid, hamiltonian_too=True, store=True)
    times = grid.nodes
    frame0 = frame.vectors(0.0)
    L = frame.L
    H = np.array([hamiltonian(frame, t) for t in times])
    unit = np.empty(times.size)
    pt = np.empty(times.size)
    for m in range(times.size):
        unit[m] = unitarity_defect(U[m])
        if unit[m] > unitarity_tol:
            raise PropagationError(m, "unitarity defect", unit[m], unitarity_tol)
        cdef = unitarity_defect(C[m])
        if cdef > unitarity_tol:
            raise PropagationError(m, "holonomy unitarity defect", cdef, unitarity_tol)
        pt[m] = _pt_residual(H[m], U[m] @ frame0[:, :L])
    return EvolutionRecord(times, U, C, H, unit, pt, frame0)


def check_cyclic(record, frame):
    """
    Frobenius distance between the projectors onto the propagated
    computational subspace at ``t = tau`` and ``t = 0``.
    """
    phi0 = record.phi(0)
    phi1 = record.phi(len(record.times) - 1)
    p0 = phi0 @ phi0.conj().T
    p1 = phi1 @ phi1.conj().T
    return float(np.linalg.norm(p1 - p0))


def check_parallel_transport(record, frame=None):
    """``max_{t, k, l <= L} |<phi_k(t)|H(t)|phi_l(t)>|`` over the record."""
    return float(np.max(record.parallel_transport))


def computational_basis_change(frame):
    """
    ``L x L`` matrix whose columns are ``nu_1(0) .. nu_L(0)`` expressed in the
    first ``L`` canonical basis vectors.
    """
    return frame.vectors(0.0)[:frame.L, :frame.L]


def block_restriction(U_full, frame):
    """Computational-block of ``U_full`` expressed in the ``nu_k(0)`` basis."""
    v = computational_basis_change(frame)
    return v.conj().T @ U_full[:frame.L, :frame.L] @ v


def holonomic_gate(frame, grid, tol=1e-6, record=None):
    """
    Holonomic gate on the computational subspace, in the canonical basis.

    ``C(tau)`` is computed from the connection and rotated out of the
    ``nu_k(0)`` basis. As an independent check the full propagator is
    computed too (or taken from ``record``) and its computational block,
    expressed in the ``nu_k(0)`` basis, must agree with ``C(tau)`` within
    ``tol`` in :func:`~holonomic.numkit.gate_distance`.

    Raises
    ------
    InconsistencyError
        If the two routes disagree.
    """
    if record is None:
        record = propagate(frame, grid)
    c_tau = record.C[-1]
    restricted = block_restriction(record.U[-1], frame)
    dist = gate_distance(restricted, c_tau)
    if dist > tol:
        raise InconsistencyError(
            f"propagated block and holonomy disagree: gate distance {dist:.3e} > {tol:.1e}")
    v = computational_basis_change(frame)
    return v @ c_tau @ v.conj().T

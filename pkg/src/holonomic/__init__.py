"""Hamiltonians for nonadiabatic holonomic gates built from cyclic auxiliary frames."""

from .numkit import gate_distance, herm_expm, phase_aligned_error, unitarity_defect
from .spherepaths import (
    SpherePath,
    enclosed_angle,
    minimal_circle,
    orange_slice,
    path_length,
    reparametrize,
    three_arc,
    time_ratio,
)
from .frames import FrameParams, one_qubit_frame, two_qubit_frame
from .engine import (
    TimeGrid,
    check_cyclic,
    check_parallel_transport,
    connection,
    hamiltonian,
    holonomic_gate,
    holonomy_matrix,
    propagate,
)
from .gates import GateSpec, analytic_one_qubit, analytic_two_qubit, gate_from_geometry, pulse_profile

__version__ = "0.1.0"

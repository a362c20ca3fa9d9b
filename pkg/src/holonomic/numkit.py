"""
Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Only Hermitian
generators are ever exponentiated, so the exponential goes through an
eigendecomposition and is unitary by construction.
"""

import numpy as np

__all__ = [
    "HERMITICITY_RTOL",
    "NotHermitianError",
    "hermiticity_residual",
    "herm_expm",
    "unitarity_defect",
    "gate_distance",
    "phase_aligned_error",
    "matrix_to_json",
    "matrix_from_json",
]

HERMITICITY_RTOL = 1e-12


class NotHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not."""

    def __init__(self, residual, scale):
        self.residual = residual
        self.scale = scale
        super().__init__(
            f"matrix is not Hermitian: max|M - M^H| = {residual:.3e} "
            f"(max|M| = {scale:.3e})"
        )


def _as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_residual(m):
    """Return ``max|M[i, j] - conj(M[j, i])|``."""
    m = _as_square(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def herm_expm(m, s=1.0, rtol=HERMITICITY_RTOL):
    """
    Compute ``exp(i * s * M)`` for a Hermitian matrix ``M``.

    Parameters
    ----------
    m : array_like
        Hermitian matrix.
    s : float
        Real scale factor multiplying the generator.
    rtol : float, optional
        Hermiticity tolerance, relative to ``max(1, max|M|)``.

    Returns
    -------
    numpy.ndarray
        The unitary ``V diag(exp(i s w)) V^H`` where ``M = V diag(w) V^H``.

    Raises
    ------
    NotHermitianError
        If ``max|M - M^H| > rtol * max(1, max|M|)``.
    """
    m = _as_square(m)
    scale = float(np.max(np.abs(m), initial=0.0))
    residual = hermiticity_residual(m)
    if residual > rtol * max(1.0, scale):
        raise NotHermitianError(residual, scale)
    # symmetrize so eigh sees an exactly Hermitian input
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.exp(1j * s * w)) @ v.conj().T


def unitarity_defect(u):
    """Frobenius norm of ``U^H U - I``."""
    u = _as_square(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def gate_distance(u, v):
    """
    Phase-insensitive distance ``1 - |tr(U^H V)| / d``.

    Zero exactly when ``U = exp(i chi) V`` for some real ``chi``.
    """
    u = _as_square(u)
    v = _as_square(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    d = u.shape[0]
    overlap = abs(np.trace(u.conj().T @ v)) / d
    return float(max(0.0, 1.0 - overlap))


def phase_aligned_error(u, v):
    """
    ``min_chi ||U - exp(i chi) V||_F``.

    Unlike :func:`gate_distance`, which is quadratic in a small perturbation,
    this error is linear in it, so it is the quantity to use when fitting
    convergence orders.
    """
    u = _as_square(u)
    v = _as_square(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    tr = np.trace(v.conj().T @ u)
    phase = tr / abs(tr) if abs(tr) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def matrix_to_json(m):
    """Encode a square matrix as ``{"dim", "re", "im"}`` in row-major order."""
    m = _as_square(m)
    return {
        "dim": int(m.shape[0]),
        "re": [float(x) for x in m.real.ravel()],
        "im": [float(x) for x in m.imag.ravel()],
    }


def matrix_from_json(obj):
    d = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if d <= 0 or re.size != d * d or im.size != d * d:
        raise ValueError(f"matrix JSON needs dim**2 = {d * d} entries per part")
    return (re + 1j * im).reshape(d, d)

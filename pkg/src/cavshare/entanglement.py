"""Two-qubit entanglement kernel: spin flip and Wootters concurrence."""

from __future__ import annotations

import numpy as np

from .errors import NotADensityMatrix

# Tolerances for density-matrix hygiene.
_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-10
_EIGENVALUE_FLOOR = -1e-10
_IMAG_TOL = 1e-9

# sigma_y (x) sigma_y in the product basis {|00>, |01>, |10>, |11>}
_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ],
    dtype=complex,
)


def _as_matrix(rho) -> np.ndarray:
    entries = getattr(rho, "entries", rho)
    mat = np.asarray(entries, dtype=complex)
    if mat.shape != (4, 4):
        raise NotADensityMatrix(f"expected a 4x4 matrix, got shape {mat.shape}")
    return mat


def _check_density(mat: np.ndarray) -> None:
    if np.max(np.abs(mat - mat.conj().T)) > _HERMITICITY_TOL:
        raise NotADensityMatrix("not Hermitian within 1e-12")
    if abs(np.trace(mat).real - 1.0) > _TRACE_TOL or abs(np.trace(mat).imag) > _TRACE_TOL:
        raise NotADensityMatrix("trace differs from 1 beyond 1e-10")
    if np.linalg.eigvalsh(mat).min() < _EIGENVALUE_FLOOR:
        raise NotADensityMatrix("negative eigenvalue beyond -1e-10")


def spin_flip(rho) -> np.ndarray:
    """Return (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).

    Complex conjugation is taken entrywise in the standard product basis.
    Accepts a TwoQubitDensity or a bare 4x4 array.
    """
    mat = _as_matrix(rho)
    return _FLIP @ mat.conj() @ _FLIP


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    Computed as max(0, l1 - l2 - l3 - l4) where the l_i are the decreasingly
    sorted square roots of the eigenvalues of rho * spin_flip(rho). Input
    hygiene (Hermiticity, unit trace, positivity) is enforced; tiny negative
    eigenvalues from rounding are clamped to zero.
    """
    mat = _as_matrix(rho)
    _check_density(mat)
    product = mat @ spin_flip(mat)
    eigs = np.linalg.eigvals(product)
    if np.max(np.abs(eigs.imag)) > _IMAG_TOL:
        raise NotADensityMatrix("eigenvalues of rho * flip(rho) not real within 1e-9")
    real = eigs.real
    if real.min() < _EIGENVALUE_FLOOR:
        raise NotADensityMatrix("negative eigenvalue of rho * flip(rho) beyond -1e-10")
    lam = np.sqrt(np.clip(real, 0.0, None))
    lam[::-1].sort()
    value = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(value, 0.0), 1.0))

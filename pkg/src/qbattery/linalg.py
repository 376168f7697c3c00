"""Dense Hermitian/unitary eigendecompositions, exponentials, principal logs.

All exponentials and logarithms go through a full eigendecomposition: exact
for unitaries generated by Hermitian matrices, and the eigensystem of a
Floquet operator is reused for every stroboscopic power and for quasi-energy
spectra.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real ascending (Hermitian) or unit-modulus complex
    eigenvectors: np.ndarray  # unitary, columns


def _hermiticity_defect(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - A.conj().T)))


def hermitian_eig(A: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    if _hermiticity_defect(A) > 1e-10:
        raise ValueError("matrix is not Hermitian to 1e-10")
    if np.isrealobj(A) or not np.any(A.imag):
        # real symmetric path (H1/H2 carry only X and Z strings)
        vals, vecs = np.linalg.eigh(np.ascontiguousarray(A.real))
        return EigenDecomposition(vals, vecs)
    vals, vecs = np.linalg.eigh(A)
    return EigenDecomposition(vals, vecs)


def unitary_eig(U: np.ndarray) -> EigenDecomposition:
    """Diagonalize a unitary with an orthonormal eigenbasis (complex Schur).

    Schur vectors stay unitary even in degenerate eigenphase clusters, which
    resonant Floquet operators (U = +-1 blocks) hit routinely.
    """
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError("expected a square matrix")
    dim = U.shape[0]
    defect = np.max(np.abs(U.conj().T @ U - np.eye(dim)))
    if defect > 1e-10:
        raise ValueError("matrix is not unitary to 1e-10")
    T, Z = scipy.linalg.schur(U, output="complex")
    lam = np.diag(T).copy()
    off = np.max(np.abs(T - np.diag(lam)))
    if off > 1e-9 * max(1.0, float(np.max(np.abs(lam)))):
        raise ValueError("Schur form of a unitary should be diagonal")
    return EigenDecomposition(lam, Z)


def unitary_exp(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian H via eigendecomposition."""
    vals, vecs = hermitian_eig(H)
    phases = np.exp(-1j * vals * t)
    return (vecs * phases) @ vecs.conj().T


def principal_log(U: np.ndarray, T: float) -> np.ndarray:
    """Hermitian H with U = exp(-i H T), eigenphases on the branch (-pi, pi].

    The +pi endpoint is included so U = -1 maps to (pi/T) * identity.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    lam, vecs = unitary_eig(U)
    theta = -np.angle(lam)  # in [-pi, pi)
    theta[theta <= -np.pi] += 2 * np.pi
    H = (vecs * (theta / T)) @ vecs.conj().T
    return 0.5 * (H + H.conj().T)


def quasi_energies(U: np.ndarray, T: float) -> np.ndarray:
    """Sorted eigenvalues of principal_log(U, T) without forming the matrix."""
    lam, _ = unitary_eig(U)
    theta = -np.angle(lam)
    theta[theta <= -np.pi] += 2 * np.pi
    return np.sort(theta / T)

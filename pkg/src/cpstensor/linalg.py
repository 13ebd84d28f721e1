"""Dense complex linear-algebra kernel used by every other module.

All functions are pure, operate on plain ``complex128`` numpy arrays and
keep no shared state, so they are safe to call concurrently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NoConvergence, NonHermitianInput, SingularMatrix, ZeroMatrix

TOL_EIG = 1e-10
TOL_LIN = 1e-10
TOL_STRUCT = 1e-8
TOL_PIVOT = 1e-12

# absolute floor so zero matrices pass relative structure checks
ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class HermEigen:
    """Spectral decomposition X = V diag(w) V^H with real w in descending order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]


def hermitian_residual(x: np.ndarray) -> float:
    """Frobenius norm of the skew part X - X^H."""
    x = np.asarray(x, dtype=complex)
    return float(np.linalg.norm(x - x.conj().T))


def require_hermitian(x: np.ndarray, tol: float = TOL_STRUCT) -> np.ndarray:
    """Return X symmetrized, or raise NonHermitianInput if it is not Hermitian."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {x.shape}")
    res = hermitian_residual(x)
    if res > max(tol * np.linalg.norm(x), ABS_FLOOR):
        raise NonHermitianInput(f"symmetry residual {res:.3e} exceeds tolerance")
    return 0.5 * (x + x.conj().T)


def herm_eig(x: np.ndarray, tol: float = TOL_STRUCT) -> HermEigen:
    """Full spectral decomposition of a Hermitian matrix, eigenvalues descending."""
    xh = require_hermitian(x, tol)
    try:
        w, v = np.linalg.eigh(xh)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(w)[::-1]
    return HermEigen(eigenvalues=w[order], eigenvectors=v[:, order])


def project_psd(x: np.ndarray) -> np.ndarray:
    """Nearest (Frobenius) positive semidefinite matrix: clip negative eigenvalues."""
    eig = herm_eig(x)
    w = np.maximum(eig.eigenvalues, 0.0)
    v = eig.eigenvectors
    return (v * w) @ v.conj().T


def eig_soft_threshold(x: np.ndarray, tau: float) -> np.ndarray:
    """Nuclear-norm proximal operator on Hermitian matrices.

    Shrinks every eigenvalue toward zero by ``tau``, clamping at zero, which
    keeps the sign pattern of the spectrum.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    eig = herm_eig(x)
    w = np.sign(eig.eigenvalues) * np.maximum(np.abs(eig.eigenvalues) - tau, 0.0)
    v = eig.eigenvectors
    return (v * w) @ v.conj().T


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve Ax = b by partial-pivot LU; raise SingularMatrix on tiny pivots."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SingularMatrix(f"expected a square matrix, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise SingularMatrix("right-hand side length does not match")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    scale = pivots.max(initial=0.0)
    if scale == 0.0 or pivots.min() < TOL_PIVOT * scale:
        raise SingularMatrix("pivot magnitude below tolerance")
    return scipy.linalg.lu_solve((lu, piv), b)


def top_singular_ratio(x: np.ndarray) -> float:
    """|lambda_2| / |lambda_1| over the Hermitian spectrum sorted by modulus.

    Zero signals a numerically rank-one matrix.
    """
    eig = herm_eig(x)
    mods = np.sort(np.abs(eig.eigenvalues))[::-1]
    if mods[0] <= 0.0:
        raise ZeroMatrix("matrix is numerically zero")
    if len(mods) == 1:
        return 0.0
    return float(mods[1] / mods[0])

"""Dense complex linear algebra for small matrices (d <= ~16).

Everything operates on plain ``complex128`` numpy arrays.  The routines are
thin, contract-enforcing wrappers around LAPACK (via ``numpy.linalg``): they
validate shape and symmetry preconditions, fix ordering conventions, and
return factors in the forms the model layer relies on.  All functions are
pure; nothing here holds state.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

# Relative tolerance for Hermitian / symmetry precondition checks.
HERMITIAN_TOL = 1e-10

# Relative tolerance for reconstruction-style postconditions.
RECONSTRUCTION_TOL = 1e-9


class SvdResult(NamedTuple):
    """Factors of ``m = u @ diag(s) @ v.conj().T`` with ``s`` descending."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


class PolarForm(NamedTuple):
    """Polar factors of a complex symmetric matrix: ``xi = psd @ unitary``.

    ``psd`` is Hermitian positive semi-definite (the squeezing strengths),
    ``unitary`` encodes the mode pairing and phases.
    """

    psd: np.ndarray
    unitary: np.ndarray


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_square_matrix(m, name: str = "matrix") -> np.ndarray:
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with ``m = v @ diag(w) @ v.conj().T`` and the columns
    of ``v`` orthonormal.  The input is symmetrized defensively before the
    decomposition; deviations from Hermitian symmetry beyond
    ``HERMITIAN_TOL`` (relative) are rejected.
    """
    a = as_square_matrix(m)
    scale = 1.0 + np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def svd(m) -> SvdResult:
    """Singular value decomposition with descending singular values."""
    a = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - not seen at d <= 16
        raise ValueError(f"SVD failed to converge: {exc}") from exc
    return SvdResult(u=u, s=s, v=vh.conj().T)


def polar_decompose(xi) -> PolarForm:
    """Polar decomposition ``xi = psd @ unitary`` of a complex symmetric matrix.

    With ``xi = u @ diag(s) @ v.conj().T`` the factors are
    ``psd = u @ diag(s) @ u.conj().T`` and ``unitary = u @ v.conj().T``.
    For ``xi == 0`` the unitary factor is conventional and the identity is
    returned.  On degenerate singular subspaces the individual factors depend
    on the basis the SVD happens to pick; only ``psd``, unitarity, and the
    product ``psd @ unitary == xi`` are contractual.
    """
    a = as_square_matrix(xi, "squeezing matrix")
    scale = 1.0 + np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > HERMITIAN_TOL * scale:
        raise ValueError("squeezing matrix must be complex symmetric")
    d = a.shape[0]
    if not a.any():
        return PolarForm(psd=np.zeros((d, d), dtype=np.complex128),
                         unitary=np.eye(d, dtype=np.complex128))
    u, s, v = svd(a)
    psd = (u * s) @ u.conj().T
    psd = (psd + psd.conj().T) / 2
    return PolarForm(psd=psd, unitary=u @ v.conj().T)


def hermitian_matrix_function(m, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian PSD matrix via its eigenvalues.

    ``f`` must act elementwise on a real vector (e.g. ``np.cosh``).
    Eigenvalues that are negative by no more than round-off are clamped to 0
    so nominally PSD inputs stay PSD; genuinely negative spectra are rejected.
    """
    w, v = eig_hermitian(m)
    floor = -HERMITIAN_TOL * (1.0 + float(np.abs(w).max()))
    if w[-1] < floor:
        raise ValueError("matrix is not positive semi-definite")
    w = np.maximum(w, 0.0)
    out = (v * f(w)) @ v.conj().T
    return (out + out.conj().T) / 2


def determinant(m) -> complex:
    """Determinant of a square complex matrix (LU-based)."""
    return complex(np.linalg.det(as_square_matrix(m)))

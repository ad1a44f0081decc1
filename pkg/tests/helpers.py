"""Shared test utilities: random matrix factories and independent oracles."""

from __future__ import annotations

import numpy as np


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    w, r = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    # fix the QR phase ambiguity so the distribution is Haar-like
    return w * (np.diag(r) / np.abs(np.diag(r)))


def random_symmetric_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    w = random_unitary(rng, d)
    return w @ w.T


def random_symmetric(rng: np.random.Generator, d: int, norm: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    xi = (a + a.T) / 2
    return xi * (norm / np.linalg.norm(xi, 2))


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def random_hermitian_psd(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a @ a.conj().T / d


def det_cofactor(m: np.ndarray) -> complex:
    """Brute-force determinant by first-row cofactor expansion."""
    d = m.shape[0]
    if d == 1:
        return complex(m[0, 0])
    total = 0.0 + 0.0j
    for j in range(d):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1) ** j * m[0, j] * det_cofactor(minor)
    return total

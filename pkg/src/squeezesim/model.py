"""Classical model of multi-mode squeezed light.

A state is specified by a d x d complex symmetric squeezing matrix.  Vacuum
(or thermal) mode amplitudes are proper complex Gaussian draws, and squeezing
acts through the classical Bogoliubov map

    b = cosh(R) a + sinh(R) Q conj(a),

where ``(R, Q)`` is the polar form of the squeezing matrix.  The transformed
vector is still Gaussian but generally *improper*: its pseudo-covariance
``E[b b^T]`` is nonzero, meaning real and imaginary parts are correlated.

Sampling convention: a standard complex Gaussian component has independent
real and imaginary parts of variance 1/2, so ``E[z conj(z)] = 1`` and
``E[z z] = 0``.  Amplitudes are ``a = sigma * z``; ``sigma2 = 1/2`` is the
pure vacuum, larger values model thermal states.

Mode order for two-photon polarization states is fixed as
``(AH, AV, BH, BV)`` throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .linalg import (
    HERMITIAN_TOL,
    PolarForm,
    as_square_matrix,
    hermitian_matrix_function,
    polar_decompose,
)

_MASK64 = (1 << 64) - 1

# Rows generated per PRNG substream; fixed so the sampled batch is a pure
# function of (seed, n, d) no matter how generation is scheduled.
_SAMPLE_CHUNK = 1 << 16


def mix_seed(base: int, index: int) -> int:
    """Derive an independent 64-bit substream seed from ``(base, index)``.

    This is the SplitMix64 output function applied to
    ``base + (index + 1) * 0x9E3779B97F4A7C15`` (all arithmetic mod 2**64).
    It is part of the reproducibility contract: every derived stream depends
    only on the two integers, never on execution order, so adding grid points
    or changing worker counts cannot perturb existing streams.
    """
    z = (int(base) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SqueezingSpec:
    """A d x d complex symmetric squeezing matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square_matrix(self.matrix, "squeezing matrix")
        scale = 1.0 + np.linalg.norm(m)
        if np.linalg.norm(m - m.T) > HERMITIAN_TOL * scale:
            raise ValueError("squeezing matrix must be complex symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def polar(self) -> PolarForm:
        return polar_decompose(self.matrix)

    def to_json_dict(self) -> dict:
        entries = [[float(z.real), float(z.imag)] for z in self.matrix.ravel()]
        return {"d": self.d, "entries": entries}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SqueezingSpec":
        try:
            d = int(doc["d"])
            entries = doc["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"squeezing-matrix document needs 'd' and 'entries': {exc}") from exc
        if d < 1:
            raise ValueError("'d' must be >= 1")
        if len(entries) != d * d:
            raise ValueError(f"expected {d * d} entries in row-major order, got {len(entries)}")
        flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
        return cls(matrix=flat.reshape(d, d))


def load_xi_file(path) -> SqueezingSpec:
    """Read a squeezing matrix from a JSON document (symmetry validated)."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return SqueezingSpec.from_json_dict(doc)


@dataclass(frozen=True)
class StateMoments:
    """Second moments of a zero-mean complex Gaussian vector.

    ``cov`` is the covariance ``E[b b^H]`` (Hermitian PSD), ``pseudo_cov``
    the pseudo-covariance ``E[b b^T]`` (symmetric).  ``sigma2`` records the
    source variance scale when known; empirical estimates leave it ``None``.
    """

    cov: np.ndarray
    pseudo_cov: np.ndarray
    sigma2: float | None = None

    def __post_init__(self):
        g = as_square_matrix(self.cov, "covariance")
        c = as_square_matrix(self.pseudo_cov, "pseudo-covariance")
        if g.shape != c.shape:
            raise ValueError("covariance and pseudo-covariance must have equal shape")
        object.__setattr__(self, "cov", g)
        object.__setattr__(self, "pseudo_cov", c)

    @property
    def d(self) -> int:
        return self.cov.shape[0]


@dataclass(frozen=True)
class SampleBatch:
    """n complex mode-amplitude realizations, one row per draw.

    Reproducible: the amplitudes are a pure function of ``(seed, n, d)`` and
    of any transform applied afterwards.
    """

    amplitudes: np.ndarray
    seed: int

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128)
        if a.ndim != 2:
            raise ValueError(f"amplitudes must be 2-D, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes have non-finite entries")
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def d(self) -> int:
        return self.amplitudes.shape[1]


def sample_vacuum(d: int, n: int, sigma2: float, seed: int) -> SampleBatch:
    """Draw n proper complex Gaussian amplitude vectors over d modes.

    Each component is ``sigma * z`` with ``z`` standard complex Gaussian:
    real and imaginary parts independent N(0, 1/2), so ``E[|a_k|^2] = sigma2``
    and ``E[a_k^2] = 0``.

    Rows are generated in fixed chunks of 2**16, each from its own Philox
    counter-based stream keyed by ``mix_seed(seed, chunk_index)``, so the
    batch is bit-identical for a given ``(seed, n, d)`` regardless of how
    the chunks are scheduled.
    """
    if d < 1:
        raise ValueError("mode count d must be >= 1")
    if n < 1:
        raise ValueError("realization count n must be >= 1")
    if not sigma2 > 0:
        raise ValueError("sigma2 must be > 0")
    scale = math.sqrt(sigma2 / 2.0)
    out = np.empty((n, d), dtype=np.complex128)
    for chunk_index, start in enumerate(range(0, n, _SAMPLE_CHUNK)):
        stop = min(start + _SAMPLE_CHUNK, n)
        rng = np.random.Generator(np.random.Philox(key=mix_seed(seed, chunk_index)))
        xy = rng.standard_normal((stop - start, 2 * d))
        out[start:stop] = scale * (xy[:, :d] + 1j * xy[:, d:])
    return SampleBatch(amplitudes=out, seed=int(seed) & _MASK64)


def bogoliubov_transform(batch: SampleBatch, polar: PolarForm) -> SampleBatch:
    """Apply ``b = cosh(R) a + sinh(R) Q conj(a)`` row-wise to a batch."""
    d = polar.psd.shape[0]
    if batch.d != d:
        raise ValueError(f"batch has {batch.d} modes but polar form has {d}")
    cosh_r = hermitian_matrix_function(polar.psd, np.cosh)
    sinh_r = hermitian_matrix_function(polar.psd, np.sinh)
    a = batch.amplitudes
    b = a @ cosh_r.T + a.conj() @ (sinh_r @ polar.unitary).T
    return SampleBatch(amplitudes=b, seed=batch.seed)


def analytic_moments(polar: PolarForm, sigma2: float) -> StateMoments:
    """Exact second moments of the squeezed vector.

    ``cov = sigma2 * cosh(2R)`` and
    ``pseudo_cov = sigma2 * (cosh(R) Q^T sinh(R)^T + sinh(R) Q cosh(R)^T)``,
    which is symmetric; symmetry is enforced exactly against round-off.
    """
    if not sigma2 > 0:
        raise ValueError("sigma2 must be > 0")
    cosh_r = hermitian_matrix_function(polar.psd, np.cosh)
    sinh_r = hermitian_matrix_function(polar.psd, np.sinh)
    q = polar.unitary
    cov = sigma2 * hermitian_matrix_function(polar.psd, lambda w: np.cosh(2.0 * w))
    pc = sigma2 * (cosh_r @ q.T @ sinh_r.T + sinh_r @ q @ cosh_r.T)
    pc = (pc + pc.T) / 2
    return StateMoments(cov=cov, pseudo_cov=pc, sigma2=float(sigma2))


def empirical_moments(batch: SampleBatch, sigma2: float | None = None) -> StateMoments:
    """Monte Carlo estimates ``(1/n) sum b b^H`` and ``(1/n) sum b b^T``.

    The estimates are made exactly Hermitian / symmetric, matching the
    structure of what they estimate.
    """
    if batch.n < 2:
        raise ValueError("need at least two realizations to estimate moments")
    b = batch.amplitudes
    n = batch.n
    g = b.T @ b.conj() / n
    g = (g + g.conj().T) / 2
    c = b.T @ b / n
    c = (c + c.T) / 2
    return StateMoments(cov=g, pseudo_cov=c, sigma2=sigma2)


def impropriety(moments: StateMoments) -> float:
    """Degree of impropriety ``|det C|^2 / (det Gamma)^2`` in [0, 1].

    Zero for proper vectors and whenever the pseudo-covariance is singular;
    one for maximally improper vectors.  The ratio is evaluated in log space
    so extreme determinant magnitudes cannot overflow; round-off excursions
    above 1 (at most 1e-12) are clamped.
    """
    sign_g, log_g = np.linalg.slogdet(moments.cov)
    if not (np.isfinite(log_g) and sign_g.real > 0.5):
        raise ValueError("covariance must be nonsingular (positive determinant)")
    _, log_c = np.linalg.slogdet(moments.pseudo_cov)
    if log_c == -np.inf:
        return 0.0
    if not np.isfinite(log_c):
        raise ValueError("pseudo-covariance has no finite determinant")
    value = float(np.exp(2.0 * (log_c - log_g)))
    if value > 1.0 + 1e-12:
        raise ValueError(f"moments are not a valid covariance pair (impropriety {value})")
    return min(value, 1.0)


def impropriety_isotropic(r: float, d: int) -> float:
    """Closed form ``tanh(2r)**(2d)`` for isotropic squeezing strength r.

    Valid when the positive polar factor is ``r * I`` (the unitary factor is
    then symmetric because the squeezing matrix is); the value is independent
    of that unitary and of the source variance.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if d < 1:
        raise ValueError("d must be >= 1")
    return float(np.tanh(2.0 * r) ** (2 * d))


def log_density(beta, moments: StateMoments):
    """Log pdf of the zero-mean improper Gaussian at one or more points.

    ``beta`` is a length-d complex vector or an array of shape (..., d);
    the result is a float or an array of the leading shape.  Uses the
    augmented covariance ``[[G, C], [C*, G*]]`` with normalization
    ``pi**-d * det(aug)**-0.5``.
    """
    g = moments.cov
    c = moments.pseudo_cov
    d = moments.d
    aug = np.block([[g, c], [c.conj(), g.conj()]])
    sign, logdet = np.linalg.slogdet(aug)
    if abs(sign) == 0 or sign.real <= 0 or not np.isfinite(logdet):
        raise ValueError("augmented covariance is singular")
    pts = np.asarray(beta, dtype=np.complex128)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != d:
        raise ValueError(f"beta has {pts.shape[-1]} components, moments have {d} modes")
    lead = pts.shape[:-1]
    u = np.concatenate([pts, pts.conj()], axis=-1).reshape(-1, 2 * d)
    sol = np.linalg.solve(aug, u.T).T
    quad = np.einsum("ij,ij->i", u.conj(), sol).real
    out = -0.5 * quad - d * math.log(math.pi) - 0.5 * float(logdet.real)
    out = out.reshape(lead)
    return float(out[0]) if single else out


def log_density_isotropic(beta, r: float, unitary: np.ndarray, sigma2: float):
    """Closed-form log pdf for isotropic squeezing strength ``r * I``:

    ``-||cosh(r) beta - sinh(r) Q conj(beta)||^2 / sigma2 - d log(pi sigma2)``.
    """
    q = as_square_matrix(unitary, "unitary factor")
    d = q.shape[0]
    pts = np.asarray(beta, dtype=np.complex128)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != d:
        raise ValueError("beta dimension mismatch")
    w = math.cosh(r) * pts - math.sinh(r) * (pts.conj() @ q.T)
    out = -np.sum(np.abs(w) ** 2, axis=-1) / sigma2 - d * math.log(math.pi * sigma2)
    return float(out[0]) if single else out


class SeparabilityVerdict(NamedTuple):
    entangled: bool
    threshold_r: float


def separability_threshold(sigma2: float, r: float) -> SeparabilityVerdict:
    """Continuous-variable separability test for the symmetric two-mode state.

    The state is entangled iff ``sigma2 * exp(-2r) < 1/2`` (strict), i.e.
    beyond ``threshold_r = max(0, log(2 sigma2) / 2)``.  At the vacuum scale
    ``sigma2 = 1/2`` any positive squeezing entangles.
    """
    if not sigma2 > 0:
        raise ValueError("sigma2 must be > 0")
    if r < 0:
        raise ValueError("r must be >= 0")
    entangled = sigma2 * math.exp(-2.0 * r) < 0.5
    threshold = max(0.0, 0.5 * math.log(2.0 * sigma2))
    return SeparabilityVerdict(entangled=entangled, threshold_r=threshold)


# Two-photon polarization amplitudes (|HH>, |HV>, |VH>, |VV>) for the
# named presets.
BELL_SINGLET_ALPHA = (0.0, 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0), 0.0)
SEPARABLE_UNIFORM_ALPHA = (0.5, 0.5, 0.5, 0.5)


def two_photon_squeezing(alpha, r: float) -> SqueezingSpec:
    """Squeezing matrix of the two-photon polarization family.

    ``alpha`` holds the four amplitudes on (|HH>, |HV>, |VH>, |VV>); they are
    renormalized to unit length.  The returned 4x4 matrix couples the A modes
    to the B modes in the fixed order (AH, AV, BH, BV):

        r * [[0, 0, a1, a2],
             [0, 0, a3, a4],
             [a1, a3, 0, 0],
             [a2, a4, 0, 0]]
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    a = np.asarray(alpha, dtype=np.complex128).reshape(4)
    norm = np.linalg.norm(a)
    if norm == 0:
        raise ValueError("alpha must be nonzero")
    a = a / norm
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 2] = m[2, 0] = a[0]
    m[0, 3] = m[3, 0] = a[1]
    m[1, 2] = m[2, 1] = a[2]
    m[1, 3] = m[3, 1] = a[3]
    return SqueezingSpec(matrix=r * m)


def symmetric_two_mode_squeezing(r: float, phi: float = 0.0) -> SqueezingSpec:
    """Symmetric two-mode squeezing matrix ``r e^{i phi} [[0, 1], [1, 0]]``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    off = r * np.exp(1j * phi)
    return SqueezingSpec(matrix=np.array([[0.0, off], [off, 0.0]], dtype=np.complex128))

"""Threshold detection and post-selected Bell-CHSH statistics.

A mode "clicks" when its amplitude modulus strictly exceeds the threshold
gamma, mimicking a single-photon detector.  Each side of a four-mode batch
(modes ordered AH, AV, BH, BV) is first rotated by the conjugate transpose
of its measurement setting, then thresholded.  An outcome of +1 / -1 on a
side means exactly one of its two channels clicked (H or V respectively);
realizations where both or neither click carry no outcome.

Post-selection keeps exclusive coincidences: exactly one click on *each*
side.  Correlations over those events, the CHSH combination
``|C11 + C12| + |C21 - C22|``, and a heralding-style detection efficiency
are what the experiment driver reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .linalg import as_square_matrix, polar_decompose
from .model import SampleBatch, SqueezingSpec, bogoliubov_transform, sample_vacuum

# Alice measures observable 1 (diagonal) or 2 (Pauli x); Bob measures the
# two diagonal-basis rotations of (Z +/- X)/sqrt(2).
SETTING_LABELS = ("A1", "A2", "B1", "B2")
SETTING_PAIRS = (("A1", "B1"), ("A1", "B2"), ("A2", "B1"), ("A2", "B2"))


class UndefinedStatisticError(ValueError):
    """Raised when post-selection starves an estimator (no events to count)."""


class SideOutcome(Enum):
    PLUS = "plus"      # only the H channel clicked
    MINUS = "minus"    # only the V channel clicked
    NONE = "none"      # no click
    DOUBLE = "double"  # both channels clicked; excluded from coincidences


@dataclass(frozen=True)
class MeasurementSetting:
    """A labelled 2x2 unitary applied as U^H (channel pair) before thresholding."""

    label: str
    rotation: np.ndarray

    def __post_init__(self):
        u = as_square_matrix(self.rotation, "rotation")
        if u.shape != (2, 2):
            raise ValueError("rotation must be 2x2")
        if np.abs(u.conj().T @ u - np.eye(2)).max() > 1e-10:
            raise ValueError("rotation must be unitary")
        object.__setattr__(self, "rotation", u)


def setting_rotation(label: str) -> MeasurementSetting:
    """Rotation that diagonalizes the labelled observable.

    A1 is already diagonal (identity rotation).  A2 uses the Hadamard-type
    reflection H = [[1, 1], [1, -1]]/sqrt(2) with H^H X H = Z.  B1 and B2 use
    the reflections with entries (+/-)sin(pi/8), cos(pi/8) that bring
    (Z + X)/sqrt(2) and (Z - X)/sqrt(2) to Z.
    """
    c, s = math.cos(math.pi / 8.0), math.sin(math.pi / 8.0)
    if label == "A1":
        u = np.eye(2, dtype=np.complex128)
    elif label == "A2":
        u = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
    elif label == "B1":
        u = np.array([[c, s], [s, -c]], dtype=np.complex128)
    elif label == "B2":
        u = np.array([[c, -s], [-s, -c]], dtype=np.complex128)
    else:
        raise ValueError(f"unknown setting label {label!r}; expected one of {SETTING_LABELS}")
    return MeasurementSetting(label=label, rotation=u)


def threshold_detect(pair, gamma: float) -> SideOutcome:
    """Classify one side's channel pair by strict threshold exceedance."""
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    values = np.asarray(pair, dtype=np.complex128).reshape(2)
    if not np.all(np.isfinite(values)):
        raise ValueError("amplitudes must be finite")
    h = bool(abs(values[0]) > gamma)
    v = bool(abs(values[1]) > gamma)
    if h and v:
        return SideOutcome.DOUBLE
    if h:
        return SideOutcome.PLUS
    if v:
        return SideOutcome.MINUS
    return SideOutcome.NONE


@dataclass(frozen=True)
class EventCounts:
    """Post-selection tallies for one setting pair.

    ``n_hh .. n_vv`` count exclusive coincidences (exactly one click per
    side, the named channels).  ``n_single_a`` / ``n_single_b`` count
    realizations with an exclusive single click on that side, regardless of
    the other side; doubles are excluded.  ``n_clicks_a`` / ``n_clicks_b``
    count raw channel exceedances (a double contributes two) and are the
    singles rates a counting experiment would report.
    """

    n_hh: int
    n_hv: int
    n_vh: int
    n_vv: int
    n_single_a: int
    n_single_b: int
    n_clicks_a: int
    n_clicks_b: int
    n_total: int

    def __post_init__(self):
        for name in ("n_hh", "n_hv", "n_vh", "n_vv", "n_single_a", "n_single_b",
                     "n_clicks_a", "n_clicks_b", "n_total"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.n_coincidence > min(self.n_single_a, self.n_single_b):
            raise ValueError("coincidences cannot exceed either side's singles")
        if max(self.n_single_a, self.n_single_b) > self.n_total:
            raise ValueError("singles cannot exceed the number of realizations")

    @property
    def n_coincidence(self) -> int:
        return self.n_hh + self.n_hv + self.n_vh + self.n_vv


def classify_events(batch: SampleBatch, setting_a: MeasurementSetting,
                    setting_b: MeasurementSetting, gamma: float) -> EventCounts:
    """Tally threshold outcomes of a four-mode batch under one setting pair.

    Rotations act per realization as ``U^H (channel pair)`` on each side
    before thresholding.  The four coincidence events are mutually exclusive
    by construction.
    """
    if batch.d != 4:
        raise ValueError(f"batch must have 4 modes (AH, AV, BH, BV), got {batch.d}")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    amplitudes = batch.amplitudes
    # row convention: (U^H b)^T = b^T conj(U)
    rot_a = amplitudes[:, :2] @ setting_a.rotation.conj()
    rot_b = amplitudes[:, 2:] @ setting_b.rotation.conj()
    click_a = np.abs(rot_a) > gamma
    click_b = np.abs(rot_b) > gamma
    plus_a = click_a[:, 0] & ~click_a[:, 1]
    minus_a = ~click_a[:, 0] & click_a[:, 1]
    plus_b = click_b[:, 0] & ~click_b[:, 1]
    minus_b = ~click_b[:, 0] & click_b[:, 1]
    return EventCounts(
        n_hh=int(np.count_nonzero(plus_a & plus_b)),
        n_hv=int(np.count_nonzero(plus_a & minus_b)),
        n_vh=int(np.count_nonzero(minus_a & plus_b)),
        n_vv=int(np.count_nonzero(minus_a & minus_b)),
        n_single_a=int(np.count_nonzero(plus_a | minus_a)),
        n_single_b=int(np.count_nonzero(plus_b | minus_b)),
        n_clicks_a=int(np.count_nonzero(click_a)),
        n_clicks_b=int(np.count_nonzero(click_b)),
        n_total=batch.n,
    )


def correlation(counts: EventCounts) -> float:
    """Correlation over exclusive coincidences:

    ``(n_hh - n_hv - n_vh + n_vv) / (n_hh + n_hv + n_vh + n_vv)``.

    Raises :class:`UndefinedStatisticError` when there are no coincidences;
    that is an explicit flagged state distinct from a correlation of zero.
    """
    n = counts.n_coincidence
    if n == 0:
        raise UndefinedStatisticError("no coincidences: correlation undefined")
    return (counts.n_hh - counts.n_hv - counts.n_vh + counts.n_vv) / n


def correlation_stderr(counts: EventCounts) -> float:
    """Standard error ``sqrt((1 - C^2) / n_coincidence)`` of the correlation."""
    n = counts.n_coincidence
    if n == 0:
        raise UndefinedStatisticError("no coincidences: correlation undefined")
    c = correlation(counts)
    return math.sqrt(max(0.0, 1.0 - c * c) / n)


def bell_statistic(c11: float, c12: float, c21: float, c22: float) -> float:
    """CHSH combination ``|c11 + c12| + |c21 - c22|`` in [0, 4]."""
    for value in (c11, c12, c21, c22):
        if not -1.0 <= value <= 1.0:
            raise ValueError(f"correlations must lie in [-1, 1], got {value}")
    return abs(c11 + c12) + abs(c21 - c22)


def efficiency(all_counts: Iterable[EventCounts]) -> float:
    """Coincident detection efficiency, heralding style.

    For each setting pair and each side this is the probability that a
    detector firing on that side belongs to a post-selected coincidence:
    ``n_coincidence / n_clicks_side``.  The reported efficiency is the
    minimum over the setting pairs and the two sides.
    """
    ratios = []
    for counts in all_counts:
        if counts.n_clicks_a == 0 or counts.n_clicks_b == 0:
            raise UndefinedStatisticError("no detections on one side: efficiency undefined")
        ratios.append(counts.n_coincidence / counts.n_clicks_a)
        ratios.append(counts.n_coincidence / counts.n_clicks_b)
    if not ratios:
        raise UndefinedStatisticError("no setting pairs supplied")
    return min(ratios)


@dataclass(frozen=True)
class BellResult:
    """Correlations, CHSH statistic, efficiency, and raw tallies of one run."""

    c11: float
    c12: float
    c21: float
    c22: float
    s: float
    s_stderr: float
    eta: float
    counts: Mapping[tuple[str, str], EventCounts]

    @property
    def n_coincidence_min(self) -> int:
        return min(c.n_coincidence for c in self.counts.values())


def run_chsh(spec: SqueezingSpec, sigma2: float = 0.5, gamma: float = 1.0,
             n: int = 1 << 20, seed: int = 0) -> BellResult:
    """Run the full post-selected CHSH experiment on one squeezed state.

    One batch of n vacuum realizations is drawn, squeezed once, and reused
    across all four setting pairs; only the measurement rotations differ, so
    the post-selected event set is setting-dependent (the source of the
    contextuality that lets S exceed the classical bound).
    """
    if spec.d != 4:
        raise ValueError("CHSH experiment needs the 4-mode (AH, AV, BH, BV) layout")
    polar = polar_decompose(spec.matrix)
    squeezed = bogoliubov_transform(sample_vacuum(4, n, sigma2, seed), polar)
    settings = {label: setting_rotation(label) for label in SETTING_LABELS}
    counts = {
        (la, lb): classify_events(squeezed, settings[la], settings[lb], gamma)
        for la, lb in SETTING_PAIRS
    }
    c11 = correlation(counts[("A1", "B1")])
    c12 = correlation(counts[("A1", "B2")])
    c21 = correlation(counts[("A2", "B1")])
    c22 = correlation(counts[("A2", "B2")])
    s = bell_statistic(c11, c12, c21, c22)
    s_stderr = math.sqrt(sum(correlation_stderr(counts[pair]) ** 2 for pair in SETTING_PAIRS))
    eta = efficiency(counts.values())
    return BellResult(c11=c11, c12=c12, c21=c21, c22=c22, s=s, s_stderr=s_stderr,
                      eta=eta, counts=counts)

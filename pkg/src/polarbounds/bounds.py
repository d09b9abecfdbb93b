"""Frobenius-norm enclosures for the range-conforming Sylvester solution.

Given ``A X + X B = A C + D B`` with Hermitian PSD coefficients, every
routine here encloses ``||X||_F`` using only norms of the data matrices
and coarse spectral information about `A` and `B`:

- a crude upper bound ``sqrt(||C||_F^2 + ||D||_F^2)``, optionally divided
  by a scale-free separation of the spectra of `A` and `-B`;
- a midpoint enclosure ``(||C + D||_F -+ ||C - D||_F) / 2``;
- a weighted enclosure with data-dependent coefficients `a`, `b`, `c`;
- a symmetric enclosure that replaces the gap weight by a single factor
  ``mu < 1`` derived from the worst conditioning of the two coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import matrixcore
from .exceptions import DomainError, SpectralOverlapError

__all__ = [
    "BoundKind",
    "BoundPair",
    "SpectralSeparation",
    "WeightedBoundParams",
    "SymmetricBoundParams",
    "spectral_separation",
    "separation_bound",
    "norm_sum_bound",
    "midpoint_bounds",
    "weighted_bound_params",
    "weighted_params_from_spectra",
    "weighted_bounds",
    "symmetric_bound_params",
    "symmetric_params_from_spectra",
    "symmetric_bounds",
]


class BoundKind(Enum):
    MIDPOINT = "midpoint"
    WEIGHTED = "weighted"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class SpectralSeparation:
    """Scale-free separation ``min |omega - gamma| / sqrt(omega^2 + gamma^2)``
    over all pairs drawn from two real spectra."""

    value: float


@dataclass(frozen=True)
class BoundPair:
    """Two-sided enclosure ``lower <= ||X||_F <= upper``.

    The lower member can be negative; it is reported as computed, a
    negative lower bound is simply uninformative.
    """

    lower: float
    upper: float
    kind: BoundKind


@dataclass(frozen=True)
class WeightedBoundParams:
    """Coefficients of the weighted enclosure.

    ``lambda1 = ||pinv(A)||_2 ||B||_2`` and ``lambda2 = ||A||_2 ||pinv(B)||_2``
    give ``a = 1 + 1/lambda1``, ``b = 1 + 1/lambda2`` and
    ``c = sqrt(1 - 1/(lambda1 lambda2))``; always ``c < min(a, b)``.
    """

    lambda1: float
    lambda2: float
    a: float
    b: float
    c: float


@dataclass(frozen=True)
class SymmetricBoundParams:
    """Single gap weight ``mu = sqrt((lam - 1)/(lam + 1)) < 1`` where
    ``lam = max(lambda1, lambda2)``."""

    lam: float
    mu: float


def _real_spectrum(values, name: str) -> np.ndarray:
    try:
        w = np.asarray(values, dtype=np.float64).ravel()
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a real spectrum") from exc
    if w.size == 0:
        raise DomainError(f"{name} must be nonempty")
    if not np.isfinite(w).all():
        raise DomainError(f"{name} contains non-finite values")
    return w


def spectral_separation(
    omega, gamma, overlap_rtol: float = 1e-12
) -> SpectralSeparation:
    """Scale-free minimum separation between two real spectra.

    Parameters
    ----------
    omega, gamma : array_like
        Nonempty real spectra.
    overlap_rtol : float, optional
        The spectra count as overlapping, and the separation as undefined,
        when the smallest gap ``|omega_i - gamma_j|`` is at most
        ``overlap_rtol`` times the largest magnitude in either spectrum.

    Raises
    ------
    SpectralOverlapError
        If the spectra overlap in the sense above, including the case
        where both contain zero.
    """
    w = _real_spectrum(omega, "omega")
    g = _real_spectrum(gamma, "gamma")
    num = np.abs(w[:, None] - g[None, :])
    scale = max(float(np.abs(w).max()), float(np.abs(g).max()))
    if float(num.min()) <= overlap_rtol * scale:
        raise SpectralOverlapError(
            "spectra overlap; the scale-free separation is undefined"
        )
    den = np.sqrt(w[:, None] ** 2 + g[None, :] ** 2)
    return SpectralSeparation(float(np.min(num / den)))


def separation_bound(C, D, sep: SpectralSeparation) -> float:
    """Upper bound ``sqrt(||C||_F^2 + ||D||_F^2) / sep`` on ``||X||_F``."""
    if not sep.value > 0.0:
        raise DomainError(f"separation must be positive, got {sep.value}")
    fc = matrixcore.frobenius_norm(C)
    fd = matrixcore.frobenius_norm(D)
    return math.sqrt(fc * fc + fd * fd) / sep.value


def norm_sum_bound(C, D) -> float:
    """Upper bound ``sqrt(||C||_F^2 + ||D||_F^2)`` on ``||X||_F``.

    Valid because the solution is a pointwise convex-like mix of `C` and
    `D` in the joint eigenbasis; it needs no spectral information at all.
    """
    fc = matrixcore.frobenius_norm(C)
    fd = matrixcore.frobenius_norm(D)
    return math.sqrt(fc * fc + fd * fd)


def midpoint_bounds(C, D) -> BoundPair:
    """Enclosure ``(||C + D||_F -+ ||C - D||_F) / 2``."""
    s = matrixcore.frobenius_norm(np.asarray(C) + np.asarray(D))
    d = matrixcore.frobenius_norm(np.asarray(C) - np.asarray(D))
    return BoundPair(lower=(s - d) / 2.0, upper=(s + d) / 2.0, kind=BoundKind.MIDPOINT)


def _min_positive_and_max(w: np.ndarray, name: str) -> tuple[float, float]:
    largest = max(float(w.max()), 0.0)
    pos = w > matrixcore.rank_cutoff((w.size, w.size), largest)
    if not pos.any():
        raise DomainError(
            f"{name} has no eigenvalue above the rank tolerance; "
            "bound coefficients need a nonzero matrix"
        )
    return float(w[pos].min()), largest


def weighted_params_from_spectra(spectrum_a, spectrum_b) -> WeightedBoundParams:
    """Weighted-enclosure coefficients from PSD spectra of `A` and `B`."""
    wa = _real_spectrum(spectrum_a, "spectrum_a")
    wb = _real_spectrum(spectrum_b, "spectrum_b")
    min_a, max_a = _min_positive_and_max(wa, "A")
    min_b, max_b = _min_positive_and_max(wb, "B")
    lambda1 = (1.0 / min_a) * max_b
    lambda2 = max_a * (1.0 / min_b)
    a = 1.0 + 1.0 / lambda1
    b = 1.0 + 1.0 / lambda2
    c = math.sqrt(max(0.0, 1.0 - 1.0 / (lambda1 * lambda2)))
    return WeightedBoundParams(lambda1=lambda1, lambda2=lambda2, a=a, b=b, c=c)


def weighted_bound_params(A, B, rtol: float = 1e-10) -> WeightedBoundParams:
    """Weighted-enclosure coefficients for Hermitian PSD `A` and `B`.

    Raises
    ------
    DomainError
        If either matrix fails the Hermitian PSD check or is zero.
    """
    wa, _ = matrixcore.psd_eigh(A, "A", rtol)
    wb, _ = matrixcore.psd_eigh(B, "B", rtol)
    return weighted_params_from_spectra(wa, wb)


def weighted_bounds(C, D, params: WeightedBoundParams) -> BoundPair:
    """Enclosure ``(||a C + b D||_F -+ c ||C - D||_F) / (a + b)``.

    Exact on both sides when ``C == D`` and when `A` and `B` are positive
    scalar matrices, where ``c == 0`` collapses the enclosure to a point.
    """
    a, b, c = params.a, params.b, params.c
    blend = matrixcore.frobenius_norm(a * np.asarray(C) + b * np.asarray(D))
    gap = c * matrixcore.frobenius_norm(np.asarray(C) - np.asarray(D))
    s = a + b
    return BoundPair(lower=(blend - gap) / s, upper=(blend + gap) / s, kind=BoundKind.WEIGHTED)


def symmetric_params_from_spectra(spectrum_a, spectrum_b) -> SymmetricBoundParams:
    """Symmetric-enclosure parameters from PSD spectra of `A` and `B`."""
    wa = _real_spectrum(spectrum_a, "spectrum_a")
    wb = _real_spectrum(spectrum_b, "spectrum_b")
    min_a, max_a = _min_positive_and_max(wa, "A")
    min_b, max_b = _min_positive_and_max(wb, "B")
    lam = max((1.0 / min_a) * max_b, max_a * (1.0 / min_b))
    if lam < 1.0:
        lam = 1.0
    mu = math.sqrt((lam - 1.0) / (lam + 1.0))
    return SymmetricBoundParams(lam=lam, mu=mu)


def symmetric_bound_params(A, B, rtol: float = 1e-10) -> SymmetricBoundParams:
    """Symmetric-enclosure parameters for Hermitian PSD `A` and `B`."""
    wa, _ = matrixcore.psd_eigh(A, "A", rtol)
    wb, _ = matrixcore.psd_eigh(B, "B", rtol)
    return symmetric_params_from_spectra(wa, wb)


def symmetric_bounds(C, D, params: SymmetricBoundParams) -> BoundPair:
    """Enclosure ``(||C + D||_F -+ mu ||C - D||_F) / 2`` with ``mu < 1``.

    Always at least as tight as the midpoint enclosure on both sides.
    """
    s = matrixcore.frobenius_norm(np.asarray(C) + np.asarray(D))
    gap = params.mu * matrixcore.frobenius_norm(np.asarray(C) - np.asarray(D))
    return BoundPair(lower=(s - gap) / 2.0, upper=(s + gap) / 2.0, kind=BoundKind.SYMMETRIC)

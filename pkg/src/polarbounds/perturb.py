"""Bounds on polar factor changes under two-sided multiplicative perturbation.

A perturbed matrix ``B = D1* A D2`` with nonsingular `D1`, `D2` has the
same rank as `A`, so both polar factors of `B` are comparable with those
of `A`.  For any pair of complex probe parameters ``(s, t)`` three
computable terms bound the subunitary factor change ``||V - U||_F`` and
three more bound the PSD factor change ``|| |B| - |A| ||_F``, in both
cases through ``sqrt(term1^2 + term2^2 - term3^2)``.  The probe ``(1, 1)``
already dominates the classical bounds; searching over probes can only
tighten the result.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from . import matrixcore
from .exceptions import DomainError, NumericalError
from .polar import PolarFactors, generalized_polar

__all__ = [
    "SearchStrategy",
    "PerturbationScenario",
    "PolarPerturbReport",
    "make_scenario",
    "subunitary_terms",
    "psd_terms",
    "subunitary_bound",
    "psd_factor_bound",
    "chen_li_sun_bound",
    "hong_meng_zheng_bound",
]

_COND_WARN = 1e12
_GRID_POINTS = 5
_LOCAL_SEARCH_EVALS = 200


class SearchStrategy(Enum):
    """How to pick the probe pair ``(s, t)`` for a bound evaluation."""

    AT_ONE_ONE = "at-one-one"
    GRID_THEN_LOCAL_SEARCH = "grid-then-local-search"


@dataclass(frozen=True, eq=False)
class PerturbationScenario:
    """Original matrix, perturbers, and everything derived from them.

    `A` is m x n, `D1` (m x m) and `D2` (n x n) are nonsingular, and
    ``B = D1* A D2``.  `polar_a` and `polar_b` hold the generalized polar
    factors of `A` and `B`; their subunitary factors are written `U` and
    `V` in the term formulas.  `lam` is
    ``max(||pinv(A)||_2 ||B||_2, ||A||_2 ||pinv(B)||_2)``, clamped to at
    least 1, which scales the correction term of each bound.  Inverses and
    the three projectors appearing in the terms are precomputed.
    """

    A: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    B: np.ndarray
    polar_a: PolarFactors
    polar_b: PolarFactors
    lam: float
    norm_a: float
    norm_b: float
    d1_inv: np.ndarray
    d2_inv: np.ndarray
    proj_corange_a: np.ndarray
    proj_range_b: np.ndarray
    proj_corange_b: np.ndarray
    eye_left: np.ndarray
    eye_right: np.ndarray


@dataclass(frozen=True)
class PolarPerturbReport:
    """Bound evaluation at one probe pair, next to the true factor changes.

    `subunitary_bound` dominates ``||V - U||_F`` and `psd_bound` dominates
    ``|| |B| - |A| ||_F`` at every valid probe; the clamp flags record
    whether the squared-term combination went negative and was clamped to
    zero before the square root.
    """

    s: complex
    t: complex
    subunitary_terms: tuple[float, float, float]
    psd_terms: tuple[float, float, float]
    subunitary_bound: float
    psd_bound: float
    subunitary_diff: float
    psd_diff: float
    subunitary_clamped: bool
    psd_clamped: bool


def _inverse_norms(M: np.ndarray) -> tuple[float, float]:
    """Spectral norms of `M` and of its pseudoinverse."""
    s = np.linalg.svd(M, compute_uv=False)
    largest = float(s[0]) if s.size else 0.0
    cutoff = matrixcore.rank_cutoff(M.shape, largest)
    kept = s[s > cutoff]
    return largest, (1.0 / float(kept.min()) if kept.size else 0.0)


def _checked_inverse(D: np.ndarray, name: str) -> np.ndarray:
    s = np.linalg.svd(D, compute_uv=False)
    if float(s[-1]) <= matrixcore.rank_cutoff(D.shape, float(s[0])):
        raise DomainError(f"{name} is singular within working precision")
    cond = float(s[0]) / float(s[-1])
    if cond > _COND_WARN:
        warnings.warn(
            f"{name} has condition number {cond:.2e}; inverse-based terms "
            "may lose accuracy",
            RuntimeWarning,
            stacklevel=3,
        )
    try:
        return np.linalg.inv(D)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"inversion of {name} failed") from exc


def make_scenario(A, D1, D2) -> PerturbationScenario:
    """Build a perturbation scenario ``B = D1* A D2``.

    Parameters
    ----------
    A : (m, n) array_like
        Matrix to perturb; any rank.
    D1 : (m, m) array_like
        Nonsingular left perturber.
    D2 : (n, n) array_like
        Nonsingular right perturber.

    Raises
    ------
    DomainError
        On shape mismatch or if either perturber is singular within
        working precision.  A condition number above 1e12 only warns.
    """
    A = matrixcore.as_matrix(A, "A")
    D1 = matrixcore.require_square(D1, "D1")
    D2 = matrixcore.require_square(D2, "D2")
    m, n = A.shape
    if D1.shape != (m, m) or D2.shape != (n, n):
        raise DomainError(
            f"perturbers must be {m} x {m} and {n} x {n}, "
            f"got {D1.shape} and {D2.shape}"
        )
    d1_inv = _checked_inverse(D1, "D1")
    d2_inv = _checked_inverse(D2, "D2")
    B = (D1.conj().T @ A) @ D2
    polar_a = generalized_polar(A)
    polar_b = generalized_polar(B)
    norm_a, norm_pinv_a = _inverse_norms(A)
    norm_b, norm_pinv_b = _inverse_norms(B)
    lam = max(norm_pinv_a * norm_b, norm_a * norm_pinv_b, 1.0)
    U, V = polar_a.U, polar_b.U
    return PerturbationScenario(
        A=A,
        D1=D1,
        D2=D2,
        B=B,
        polar_a=polar_a,
        polar_b=polar_b,
        lam=lam,
        norm_a=norm_a,
        norm_b=norm_b,
        d1_inv=d1_inv,
        d2_inv=d2_inv,
        proj_corange_a=U.conj().T @ U,
        proj_range_b=V @ V.conj().T,
        proj_corange_b=V.conj().T @ V,
        eye_left=np.eye(m, dtype=np.complex128),
        eye_right=np.eye(n, dtype=np.complex128),
    )


def subunitary_terms(
    scenario: PerturbationScenario, s: complex, t: complex
) -> tuple[float, float, float]:
    """The three terms bounding ``||V - U||_F`` at probe ``(s, t)``.

    All three vanish at ``(1, 1)`` when ``D1 == D2 == I``.
    """
    s, t = complex(s), complex(t)
    sc = scenario
    U, V = sc.polar_a.U, sc.polar_b.U
    Im, In = sc.eye_left, sc.eye_right
    D1a, D2a = sc.D1.conj().T, sc.D2.conj().T
    t1 = V @ (In - t * sc.d2_inv) + sc.proj_range_b @ (np.conj(s) * sc.d1_inv - Im) @ U
    t2 = U.conj().T @ (np.conj(t) * sc.D1 - Im) + sc.proj_corange_a @ (
        In - s * sc.D2
    ) @ V.conj().T
    t3 = (
        V @ (np.conj(s) * D2a - t * sc.d2_inv) @ sc.proj_corange_a
        + sc.proj_range_b @ (np.conj(s) * sc.d1_inv - t * D1a) @ U
    )
    return (
        matrixcore.frobenius_norm(t1),
        matrixcore.frobenius_norm(t2),
        matrixcore.frobenius_norm(t3) / math.sqrt(sc.lam + 1.0),
    )


def psd_terms(
    scenario: PerturbationScenario, s: complex, t: complex
) -> tuple[float, float, float]:
    """The three terms bounding ``|| |B| - |A| ||_F`` at probe ``(s, t)``."""
    s, t = complex(s), complex(t)
    sc = scenario
    V = sc.polar_b.U
    In = sc.eye_right
    D1a, D2a = sc.D1.conj().T, sc.D2.conj().T
    abs_a, abs_b = sc.polar_a.H, sc.polar_b.H
    left_mix = V.conj().T @ (t * D1a - np.conj(s) * sc.d1_inv) @ sc.A
    t1 = abs_b @ (In - t * sc.d2_inv) + left_mix
    t2 = abs_a @ (s * sc.D2 - In)
    t3 = (
        abs_b @ (In - t * sc.d2_inv) @ sc.proj_corange_a
        + left_mix
        - sc.proj_corange_b @ (np.conj(s) * D2a - In) @ abs_a
    )
    return (
        matrixcore.frobenius_norm(t1),
        matrixcore.frobenius_norm(t2),
        matrixcore.frobenius_norm(t3) / math.sqrt(sc.lam + 1.0),
    )


def _combine(terms: tuple[float, float, float]) -> tuple[float, bool]:
    t1, t2, t3 = terms
    radicand = t1 * t1 + t2 * t2 - t3 * t3
    if radicand < 0.0:
        return 0.0, True
    return math.sqrt(radicand), False


def _report_at(scenario: PerturbationScenario, s: complex, t: complex) -> PolarPerturbReport:
    sub = subunitary_terms(scenario, s, t)
    psd = psd_terms(scenario, s, t)
    sub_bound, sub_clamped = _combine(sub)
    psd_bound, psd_clamped = _combine(psd)
    return PolarPerturbReport(
        s=complex(s),
        t=complex(t),
        subunitary_terms=sub,
        psd_terms=psd,
        subunitary_bound=sub_bound,
        psd_bound=psd_bound,
        subunitary_diff=matrixcore.frobenius_norm(scenario.polar_b.U - scenario.polar_a.U),
        psd_diff=matrixcore.frobenius_norm(scenario.polar_b.H - scenario.polar_a.H),
        subunitary_clamped=sub_clamped,
        psd_clamped=psd_clamped,
    )


def _grid_then_local(scenario, objective) -> tuple[complex, complex]:
    """Minimize over a probe grid around (1, 1), then refine locally.

    The grid covers real parts in [0, 2] and imaginary parts in [-1, 1]
    and contains (1, 1), so the result never exceeds the value there.
    The refinement is a bounded-budget simplex descent; the best point
    ever evaluated wins, so the search is deterministic and monotone.
    """
    reals = np.linspace(0.0, 2.0, _GRID_POINTS)
    imags = np.linspace(-1.0, 1.0, _GRID_POINTS)
    best_val = math.inf
    best = (1 + 0j, 1 + 0j)
    for sr in reals:
        for si in imags:
            s = complex(sr, si)
            for tr in reals:
                for ti in imags:
                    t = complex(tr, ti)
                    val = objective(scenario, s, t)
                    if val < best_val:
                        best_val, best = val, (s, t)

    def fun(x):
        return objective(scenario, complex(x[0], x[1]), complex(x[2], x[3]))

    x0 = [best[0].real, best[0].imag, best[1].real, best[1].imag]
    out = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={"maxfev": _LOCAL_SEARCH_EVALS, "xatol": 1e-5, "fatol": 1e-12},
    )
    if out.fun < best_val:
        best = (complex(out.x[0], out.x[1]), complex(out.x[2], out.x[3]))
    return best


def _subunitary_objective(scenario, s, t) -> float:
    return _combine(subunitary_terms(scenario, s, t))[0]


def _psd_objective(scenario, s, t) -> float:
    return _combine(psd_terms(scenario, s, t))[0]


def subunitary_bound(
    scenario: PerturbationScenario,
    strategy: SearchStrategy = SearchStrategy.AT_ONE_ONE,
) -> PolarPerturbReport:
    """Bound ``||V - U||_F`` at (1, 1) or at the best probe found.

    Returns the full report at the chosen probe; every probe yields a
    valid bound, so the searched result is valid and never worse than
    the bound at (1, 1).
    """
    if strategy is SearchStrategy.AT_ONE_ONE:
        return _report_at(scenario, 1 + 0j, 1 + 0j)
    s, t = _grid_then_local(scenario, _subunitary_objective)
    return _report_at(scenario, s, t)


def psd_factor_bound(
    scenario: PerturbationScenario,
    strategy: SearchStrategy = SearchStrategy.AT_ONE_ONE,
) -> PolarPerturbReport:
    """Bound ``|| |B| - |A| ||_F`` at (1, 1) or at the best probe found."""
    if strategy is SearchStrategy.AT_ONE_ONE:
        return _report_at(scenario, 1 + 0j, 1 + 0j)
    s, t = _grid_then_local(scenario, _psd_objective)
    return _report_at(scenario, s, t)


def chen_li_sun_bound(D1, D2) -> float:
    """Classical subunitary-factor bound from the perturbers alone.

    ``sqrt((||I - inv(D1)||_F + ||I - inv(D2)||_F)^2
    + (||I - D1||_F + ||I - D2||_F)^2)``; the bound at probe (1, 1) never
    exceeds it.
    """
    D1 = matrixcore.require_square(D1, "D1")
    D2 = matrixcore.require_square(D2, "D2")
    d1_inv = _checked_inverse(D1, "D1")
    d2_inv = _checked_inverse(D2, "D2")
    Im = np.eye(D1.shape[0], dtype=D1.dtype)
    In = np.eye(D2.shape[0], dtype=D2.dtype)
    inv_part = matrixcore.frobenius_norm(Im - d1_inv) + matrixcore.frobenius_norm(
        In - d2_inv
    )
    direct_part = matrixcore.frobenius_norm(Im - D1) + matrixcore.frobenius_norm(In - D2)
    return math.sqrt(inv_part * inv_part + direct_part * direct_part)


def hong_meng_zheng_bound(scenario: PerturbationScenario) -> float:
    """Classical PSD-factor bound; the bound at probe (1, 1) never exceeds it.

    With ``rho = ||B||_2 ||I - inv(D2)||_F + ||D1* - inv(D1)||_F ||A||_2``
    the bound is ``sqrt(rho^2 + ||A||_2^2 ||I - D2||_F^2)``.
    """
    sc = scenario
    In = sc.eye_right
    rho = sc.norm_b * matrixcore.frobenius_norm(In - sc.d2_inv) + matrixcore.frobenius_norm(
        sc.D1.conj().T - sc.d1_inv
    ) * sc.norm_a
    direct = sc.norm_a * matrixcore.frobenius_norm(In - sc.D2)
    return math.sqrt(rho * rho + direct * direct)

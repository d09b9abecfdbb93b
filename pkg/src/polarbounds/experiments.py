"""Reproducible experiment drivers: worked example, Monte Carlo, sweep.

Every random quantity derives from counter-based substreams of a single
seed, ``SeedSequence((seed, trial_index))``, so results are identical
across runs, chunk sizes, and worker counts.  The environment variable
``POLAR_PERTURB_THREADS`` caps the Monte Carlo worker count; all other
drivers are single-threaded.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import bounds, matrixcore, perturb, sylvester
from .exceptions import DomainError, NumericalError, SpectralOverlapError

__all__ = [
    "DEFAULT_SEED",
    "THREADS_ENV_VAR",
    "ComparisonTest",
    "SampleDistribution",
    "ExperimentConfig",
    "TrialTally",
    "ExampleReport",
    "SweepRow",
    "run_example",
    "run_montecarlo",
    "run_perturb_sweep",
]

DEFAULT_SEED = 20250814
THREADS_ENV_VAR = "POLAR_PERTURB_THREADS"

_MAX_REDRAWS = 100
_CHUNK = 4096

_TALLY_HEADER = ["test_id", "trials", "seed", "alpha", "beta", "gamma", "redraws"]
_SWEEP_HEADER = [
    "size",
    "rank",
    "epsilon",
    "trial",
    "actual_U",
    "actual_H",
    "phi_bound_11",
    "gamma_bound_11",
    "phi_bound_opt",
    "gamma_bound_opt",
    "cls_bound",
    "hmz_bound",
]


class ComparisonTest(Enum):
    """How the data matrices `C` and `D` relate in a Monte Carlo trial."""

    INDEPENDENT = "i"
    ZERO_D = "ii"
    ZERO_C = "iii"
    OPPOSITE = "iv"
    EQUAL = "v"


class SampleDistribution(Enum):
    UNIFORM_REAL = "uniform-real"
    COMPLEX_GAUSSIAN = "complex-gaussian"


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration of one Monte Carlo comparison run."""

    test: ComparisonTest = ComparisonTest.INDEPENDENT
    trials: int = 100_000
    seed: int = DEFAULT_SEED
    size: int = 3
    dist: SampleDistribution = SampleDistribution.UNIFORM_REAL
    out_path: str | None = None


@dataclass(frozen=True)
class TrialTally:
    """Counts of bound comparisons over all trials; ties count as wins.

    `alpha` counts trials with weighted upper <= separation upper,
    `beta` weighted upper <= symmetric upper, and `gamma` symmetric
    upper <= separation upper.  `redraws` counts trials redrawn because
    the spectral separation was undefined.
    """

    test: ComparisonTest
    trials: int
    seed: int
    alpha: int
    beta: int
    gamma: int
    redraws: int


@dataclass(frozen=True)
class ExampleReport:
    """All quantities of the built-in 2 x 2 worked comparison."""

    x_norm: float
    separation: float
    lam: float
    mu: float
    upper_separation: float
    upper_norm_sum: float
    upper_midpoint: float
    upper_weighted: float
    upper_symmetric: float

    @property
    def uppers(self) -> tuple[float, float, float, float, float]:
        return (
            self.upper_separation,
            self.upper_norm_sum,
            self.upper_midpoint,
            self.upper_weighted,
            self.upper_symmetric,
        )

    @property
    def relative_errors(self) -> tuple[float, float, float, float, float]:
        """Overestimation ``(upper - ||X||_F) / ||X||_F`` of each bound."""
        return tuple((u - self.x_norm) / self.x_norm for u in self.uppers)


@dataclass(frozen=True)
class SweepRow:
    """One perturbation sweep record; mirrors the CSV columns."""

    size: int
    rank: int
    epsilon: float
    trial: int
    actual_u: float
    actual_h: float
    subunitary_at_identity: float
    psd_at_identity: float
    subunitary_optimized: float
    psd_optimized: float
    chen_li_sun: float
    hong_meng_zheng: float


def _symmetric_blend(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta) / 4.0
    return np.array([[c, s], [s, c]])


def run_example() -> ExampleReport:
    """Solve the built-in 2 x 2 instance and evaluate every enclosure.

    The instance has identity `A`, a fixed positive definite `B`, and two
    nearby symmetric data matrices, so the solution has a closed form and
    all five upper bounds are directly comparable.
    """
    A = np.eye(2)
    B = np.array([[1.0, math.sqrt(3.0)], [math.sqrt(3.0), 4.0]])
    C = _symmetric_blend(5.0 * math.pi / 32.0)
    D = _symmetric_blend(math.pi / 6.0)
    problem = sylvester.structured_problem(A, B, C, D)
    solution = sylvester.solve_structured(problem)
    x_norm = matrixcore.frobenius_norm(solution.X)
    wa, wb = problem.eigenvalues_a, problem.eigenvalues_b
    sep = bounds.spectral_separation(wa, -wb)
    weighted = bounds.weighted_params_from_spectra(wa, wb)
    symmetric = bounds.symmetric_params_from_spectra(wa, wb)
    return ExampleReport(
        x_norm=x_norm,
        separation=sep.value,
        lam=symmetric.lam,
        mu=symmetric.mu,
        upper_separation=bounds.separation_bound(C, D, sep),
        upper_norm_sum=bounds.norm_sum_bound(C, D),
        upper_midpoint=bounds.midpoint_bounds(C, D).upper,
        upper_weighted=bounds.weighted_bounds(C, D, weighted).upper,
        upper_symmetric=bounds.symmetric_bounds(C, D, symmetric).upper,
    )


def _draw(rng: np.random.Generator, n: int, dist: SampleDistribution) -> np.ndarray:
    if dist is SampleDistribution.UNIFORM_REAL:
        return rng.random((n, n))
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return z / math.sqrt(2.0)


def _trial_data(
    rng: np.random.Generator, test: ComparisonTest, n: int, dist: SampleDistribution
):
    A1 = _draw(rng, n, dist)
    B1 = _draw(rng, n, dist)
    if test is ComparisonTest.INDEPENDENT:
        C = _draw(rng, n, dist)
        D = _draw(rng, n, dist)
    elif test is ComparisonTest.ZERO_D:
        C = _draw(rng, n, dist)
        D = np.zeros_like(C)
    elif test is ComparisonTest.ZERO_C:
        D = _draw(rng, n, dist)
        C = np.zeros_like(D)
    elif test is ComparisonTest.OPPOSITE:
        C = _draw(rng, n, dist)
        D = -C
    else:
        C = _draw(rng, n, dist)
        D = C
    return A1.conj().T @ A1, B1.conj().T @ B1, C, D


def _run_trial(
    seed: int, index: int, test: ComparisonTest, n: int, dist: SampleDistribution
) -> tuple[bool, bool, bool, int]:
    """One comparison trial; redraws from a deeper substream if the
    separation is undefined."""
    for attempt in range(_MAX_REDRAWS):
        key = (seed, index) if attempt == 0 else (seed, index, attempt)
        rng = np.random.default_rng(np.random.SeedSequence(key))
        A, B, C, D = _trial_data(rng, test, n, dist)
        wa = np.linalg.eigvalsh(A)
        wb = np.linalg.eigvalsh(B)
        try:
            sep = bounds.spectral_separation(wa, -wb)
        except SpectralOverlapError:
            continue
        ub_separation = bounds.separation_bound(C, D, sep)
        ub_weighted = bounds.weighted_bounds(
            C, D, bounds.weighted_params_from_spectra(wa, wb)
        ).upper
        ub_symmetric = bounds.symmetric_bounds(
            C, D, bounds.symmetric_params_from_spectra(wa, wb)
        ).upper
        return (
            ub_weighted <= ub_separation,
            ub_weighted <= ub_symmetric,
            ub_symmetric <= ub_separation,
            attempt,
        )
    raise NumericalError(
        f"trial {index} could not draw coefficients with separated spectra "
        f"after {_MAX_REDRAWS} attempts"
    )


def _tally_range(
    seed: int, start: int, stop: int, test: ComparisonTest, n: int, dist: SampleDistribution
) -> tuple[int, int, int, int]:
    alpha = beta = gamma = redraws = 0
    for index in range(start, stop):
        a, b, g, extra = _run_trial(seed, index, test, n, dist)
        alpha += a
        beta += b
        gamma += g
        redraws += extra
    return alpha, beta, gamma, redraws


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    cpus = os.cpu_count() or 1
    if raw is None:
        return cpus
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(
            f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}"
        ) from exc
    if cap < 1:
        raise DomainError(f"{THREADS_ENV_VAR} must be a positive integer, got {cap}")
    return min(cap, cpus)


def run_montecarlo(config: ExperimentConfig) -> TrialTally:
    """Tally the three bound comparisons over independent seeded trials.

    Trials are independent substreams of the seed, so the tally does not
    depend on chunking or on the worker count.  Writes a one-row CSV when
    `config.out_path` is set.
    """
    if config.trials <= 0:
        raise DomainError(f"trials must be positive, got {config.trials}")
    if config.size <= 0:
        raise DomainError(f"size must be positive, got {config.size}")
    spans = [
        (start, min(start + _CHUNK, config.trials))
        for start in range(0, config.trials, _CHUNK)
    ]
    workers = min(_worker_count(), len(spans))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda span: _tally_range(
                    config.seed, span[0], span[1], config.test, config.size, config.dist
                ),
                spans,
            )
        )
    alpha = sum(p[0] for p in parts)
    beta = sum(p[1] for p in parts)
    gamma = sum(p[2] for p in parts)
    redraws = sum(p[3] for p in parts)
    tally = TrialTally(
        test=config.test,
        trials=config.trials,
        seed=config.seed,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        redraws=redraws,
    )
    if config.out_path is not None:
        _write_tally(config.out_path, tally)
    return tally


def _write_tally(path: str, tally: TrialTally) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_TALLY_HEADER)
        writer.writerow(
            [
                tally.test.value,
                tally.trials,
                tally.seed,
                tally.alpha,
                tally.beta,
                tally.gamma,
                tally.redraws,
            ]
        )


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _sweep_trial(seed: int, si: int, size: int, ei: int, epsilon: float, trial: int) -> SweepRow:
    rng = np.random.default_rng(np.random.SeedSequence((seed, si, ei, trial)))
    rank = int(rng.integers(1, size + 1))
    A = _complex_gaussian(rng, (size, rank)) @ _complex_gaussian(rng, (rank, size))
    D1 = np.eye(size) + epsilon * _complex_gaussian(rng, (size, size))
    D2 = np.eye(size) + epsilon * _complex_gaussian(rng, (size, size))
    scenario = perturb.make_scenario(A, D1, D2)
    at_identity_sub = perturb.subunitary_bound(scenario)
    at_identity_psd = perturb.psd_factor_bound(scenario)
    searched_sub = perturb.subunitary_bound(
        scenario, perturb.SearchStrategy.GRID_THEN_LOCAL_SEARCH
    )
    searched_psd = perturb.psd_factor_bound(
        scenario, perturb.SearchStrategy.GRID_THEN_LOCAL_SEARCH
    )
    row = SweepRow(
        size=size,
        rank=rank,
        epsilon=epsilon,
        trial=trial,
        actual_u=at_identity_sub.subunitary_diff,
        actual_h=at_identity_psd.psd_diff,
        subunitary_at_identity=at_identity_sub.subunitary_bound,
        psd_at_identity=at_identity_psd.psd_bound,
        subunitary_optimized=searched_sub.subunitary_bound,
        psd_optimized=searched_psd.psd_bound,
        chen_li_sun=perturb.chen_li_sun_bound(D1, D2),
        hong_meng_zheng=perturb.hong_meng_zheng_bound(scenario),
    )
    _check_sweep_row(row)
    return row


def _check_sweep_row(row: SweepRow) -> None:
    """Row-wise validity: actual changes below bounds, searched bounds
    below the bounds at (1, 1), and (1, 1) below the classical bounds."""
    checks = [
        ("actual_U <= phi_bound_11", row.actual_u, row.subunitary_at_identity),
        ("actual_H <= gamma_bound_11", row.actual_h, row.psd_at_identity),
        ("phi_bound_opt <= phi_bound_11", row.subunitary_optimized, row.subunitary_at_identity),
        ("gamma_bound_opt <= gamma_bound_11", row.psd_optimized, row.psd_at_identity),
        ("phi_bound_11 <= cls_bound", row.subunitary_at_identity, row.chen_li_sun),
        ("gamma_bound_11 <= hmz_bound", row.psd_at_identity, row.hong_meng_zheng),
    ]
    for label, left, right in checks:
        if left > right + 1e-9 * (1.0 + abs(right)):
            raise NumericalError(
                f"sweep row size={row.size} rank={row.rank} "
                f"epsilon={row.epsilon} trial={row.trial} violates {label}: "
                f"{left!r} > {right!r}"
            )


def run_perturb_sweep(
    sizes,
    epsilons,
    trials: int,
    seed: int = DEFAULT_SEED,
    out_path: str | None = None,
) -> list[SweepRow]:
    """Sweep random perturbation scenarios and record bounds per row.

    For each size, epsilon, and trial index, draws a complex matrix of
    random rank and perturbers ``I + epsilon E`` with Gaussian `E`, then
    evaluates both factor bounds at (1, 1) and after the probe search
    next to the two classical bounds.  Every row is checked for the
    validity orderings before it is recorded.
    """
    sizes = [int(n) for n in sizes]
    epsilons = [float(e) for e in epsilons]
    if not sizes or min(sizes) <= 0:
        raise DomainError(f"sizes must be positive integers, got {sizes}")
    if not epsilons or min(epsilons) < 0:
        raise DomainError(f"epsilons must be nonnegative, got {epsilons}")
    if trials <= 0:
        raise DomainError(f"trials must be positive, got {trials}")
    rows = [
        _sweep_trial(seed, si, size, ei, epsilon, trial)
        for si, size in enumerate(sizes)
        for ei, epsilon in enumerate(epsilons)
        for trial in range(trials)
    ]
    if out_path is not None:
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_SWEEP_HEADER)
            for row in rows:
                writer.writerow(
                    [
                        row.size,
                        row.rank,
                        repr(row.epsilon),
                        row.trial,
                        repr(row.actual_u),
                        repr(row.actual_h),
                        repr(row.subunitary_at_identity),
                        repr(row.psd_at_identity),
                        repr(row.subunitary_optimized),
                        repr(row.psd_optimized),
                        repr(row.chen_li_sun),
                        repr(row.hong_meng_zheng),
                    ]
                )
    return rows

"""Shared random-instance generators for the test suite."""

import numpy as np

from polarbounds import matrixcore


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def rank_r_matrix(rng, m, n, r, complex_entries=True):
    """Random m x n matrix of exact rank `r` (r = 0 gives the zero matrix)."""
    if r == 0:
        return np.zeros((m, n), dtype=complex if complex_entries else float)
    if complex_entries:
        return complex_gaussian(rng, (m, r)) @ complex_gaussian(rng, (r, n))
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


def random_psd(rng, n, rank):
    """Random n x n Hermitian PSD matrix of the given rank."""
    G = complex_gaussian(rng, (rank, n))
    H = G.conj().T @ G
    return (H + H.conj().T) / 2


def structured_instance(rng, m, n, rank_a=None, rank_b=None):
    """Random structured problem data with all four compatibility
    conditions enforced by projecting C and D onto the coefficient ranges."""
    if rank_a is None:
        rank_a = int(rng.integers(1, m + 1))
    if rank_b is None:
        rank_b = int(rng.integers(1, n + 1))
    A = random_psd(rng, m, rank_a)
    B = random_psd(rng, n, rank_b)
    Pa = matrixcore.range_projector(A)
    Pb = matrixcore.range_projector(B)
    C = Pa @ complex_gaussian(rng, (m, n)) @ Pb
    D = Pa @ complex_gaussian(rng, (m, n)) @ Pb
    return A, B, C, D


def kronecker_solve(A, B, S):
    """Dense oracle for A X + X B = S via column-stacking vectorization."""
    m, n = A.shape[0], B.shape[0]
    K = np.kron(np.eye(n), A) + np.kron(B.T, np.eye(m))
    x = np.linalg.solve(K, S.reshape(-1, order="F"))
    return x.reshape((m, n), order="F")

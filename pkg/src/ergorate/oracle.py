"""Independent verification by gamma-weighted truncation.

W(i, j) = gamma**(j-i) P(i, j) on i, j < N is the matrix of the transition
operator in the weighted basis; its sub-dominant spectrum is a biased but
converging estimator of the exact rate, with no shared machinery with the
elimination pipeline.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, SizeTooSmall


@dataclass(frozen=True)
class WeightedTruncation:
    size: int
    gamma: float
    matrix: np.ndarray
    clipped_mass: float


def truncate(model, N, gamma):
    """Weighted N x N truncation; tail rows are substochastic (mass dropped)
    and the worst dropped gamma-weighted mass is reported."""
    if N <= model.g + model.d + model.c:
        raise SizeTooSmall(f"need N > g+d+c = {model.g + model.d + model.c}")
    W = np.zeros((N, N))
    clipped = 0.0
    for i in range(N):
        for j in model.row_support(i):
            p = model.prob(i, j)
            if p == 0.0:
                continue
            w = p * gamma ** (j - i)
            if j < N:
                W[i, j] = w
            else:
                clipped = max(clipped, w)
    return WeightedTruncation(size=N, gamma=gamma, matrix=W, clipped_mass=clipped)


def subdominant_modulus(W):
    """Second-largest eigenvalue modulus after deflating the Perron root."""
    vals = np.linalg.eigvals(np.asarray(W))
    moduli = np.sort(np.abs(vals))[::-1]
    return float(moduli[1])


def empirical_rate(model, N, gamma):
    """Finite-scale surrogate of the convergence rate: second-largest
    eigenvalue modulus of the weighted truncation.  Biased; converges to the
    exact rate as N grows."""
    tr = truncate(model, N, gamma)
    return subdominant_modulus(tr.matrix)


def spectrum_of(model, N, gamma):
    """All eigenvalues of the weighted truncation (diagnostics)."""
    tr = truncate(model, N, gamma)
    return np.linalg.eigvals(tr.matrix)


def stationary(model, N):
    """Invariant distribution of the row-renormalized truncation.

    The left Perron vector is taken from the dense eigendecomposition and
    polished by power iterations until ||pi P - pi||_1 <= 1e-10.
    """
    tr = truncate(model, N, gamma=1.0)
    P = tr.matrix
    sums = P.sum(axis=1)
    sums[sums == 0.0] = 1.0
    P = P / sums[:, None]
    vals, vecs = np.linalg.eig(P.T)
    k = int(np.argmin(np.abs(vals - 1.0)))
    pi = np.real(vecs[:, k])
    if pi.sum() < 0:
        pi = -pi
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    for _ in range(10000):
        resid = float(np.abs(pi @ P - pi).sum())
        if resid <= 1e-10:
            return pi
        pi = pi @ P
        pi = pi / pi.sum()
    raise NonConvergence(f"stationary vector residual {resid:.2e} after polish")

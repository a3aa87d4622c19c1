"""Pure-numpy backend for the annulus detector scan.

The scan evaluates, for a batch of lambda values, the smallest singular value
of the column-normalized boundary system assembled in a Newton
divided-difference basis over the inside characteristic roots.  Divided
differences of the row polynomials tend to derivative columns as roots
collide, so near-multiple roots never produce a spurious rank drop.
"""

import numpy as np

name = "pure"


def _horner_rows(coeffs, z):
    """Evaluate each row's polynomial at that row's points; coeffs (M, L), z (M, n)."""
    acc = np.broadcast_to(coeffs[:, -1][:, None], z.shape).astype(complex)
    for k in range(coeffs.shape[1] - 2, -1, -1):
        acc = acc * z + coeffs[:, k][:, None]
    return acc


def _companion_roots(coeffs):
    """Roots of each row of an ascending coefficient batch (M, n+1)."""
    M, L = coeffs.shape
    n = L - 1
    monic = coeffs / coeffs[:, -1:]
    A = np.zeros((M, n, n), dtype=complex)
    if n > 1:
        A[:, np.arange(1, n), np.arange(0, n - 1)] = 1.0
    A[:, :, -1] = -monic[:, :-1]
    roots = np.linalg.eigvals(A)
    dcoef = coeffs[:, 1:] * np.arange(1, n + 1)
    for _ in range(2):
        pv = _horner_rows(coeffs, roots)
        dv = _horner_rows(dcoef, roots)
        ok = np.abs(dv) > 1e-300
        roots = np.where(ok, roots - np.where(ok, pv, 0) / np.where(ok, dv, 1), roots)
    return roots


def scan_sigma_min(base, g, rows, gamma_hat, lambdas):
    """Detector values over a lambda batch.

    Parameters
    ----------
    base : complex (n+1,) ascending coefficients of z**g * phi(z)
    g : index of the lambda term (E = base - lambda * z**g)
    rows : (g, c+1) boundary transition rows
    gamma_hat : classification radius for inside roots
    lambdas : complex (M,) evaluation points

    Returns
    -------
    sigma : (M,) smallest singular value of the normalized boundary system
    gap : (M,) min over roots of | |z| - gamma_hat |
    count : (M,) int32 number of inside roots (with multiplicity)
    """
    base = np.asarray(base, dtype=complex).ravel()
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    lambdas = np.asarray(lambdas, dtype=complex).ravel()
    M = lambdas.size
    n = base.size - 1
    grows, ncols = rows.shape
    L = max(ncols, grows)

    coeffs = np.broadcast_to(base, (M, n + 1)).copy()
    coeffs[:, g] -= lambdas
    roots = _companion_roots(coeffs)

    amod = np.abs(roots)
    gap = np.min(np.abs(amod - gamma_hat), axis=1)
    inside = amod < gamma_hat
    count = inside.sum(axis=1).astype(np.int32)
    sigma = np.full(M, np.inf)

    for cval in np.unique(count):
        idx = np.nonzero(count == cval)[0]
        if cval == 0:
            continue
        if cval > grows:
            sigma[idx] = 0.0  # wide system: a nonzero kernel always exists
            continue
        K = idx.size
        # canonical (modulus, angle) order via lexicographic complex sort
        key = np.where(inside[idx], amod[idx], np.inf) + 1j * np.angle(roots[idx])
        order = np.argsort(key, axis=1)[:, :cval]
        zin = np.take_along_axis(roots[idx], order, axis=1)

        B = np.empty((K, grows, cval), dtype=complex)
        mag = np.zeros((K, grows, cval), dtype=float)
        lam = lambdas[idx]
        zmod = np.abs(zin)
        for r in range(grows):
            q = np.zeros((K, L), dtype=complex)
            q[:, :ncols] = rows[r]
            q[:, r] -= lam
            # term-scale majorant: |coefficients| evaluated at |z|
            aq = np.abs(q)
            for j in range(cval):
                macc = aq[:, -1].copy()
                for i in range(L - 2, -1, -1):
                    macc = macc * zmod[:, j] + aq[:, i]
                mag[:, r, j] = macc
            width = L
            for j in range(cval):
                z = zin[:, j]
                acc = q[:, width - 1].copy()
                newq = np.empty((K, width - 1), dtype=complex)
                for i in range(width - 2, -1, -1):
                    newq[:, i] = acc
                    acc = q[:, i] + z * acc
                B[:, r, j] = acc
                if width > 1:
                    q = newq
                    width -= 1
                else:
                    q = np.zeros((K, 1), dtype=complex)
        scales = np.maximum(np.linalg.norm(mag, axis=1), 1e-300)
        svals = np.linalg.svd(B / scales[:, None, :], compute_uv=False)
        sigma[idx] = svals[:, -1]
    return sigma, gap, count

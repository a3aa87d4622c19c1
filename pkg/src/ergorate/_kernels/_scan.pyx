# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled detector-scan kernel.

Same contract as the pure backend: for each lambda, find the characteristic
roots (Aberth-Ehrlich simultaneous iteration), split them against the
classification radius, assemble the boundary system in the Newton
divided-difference basis, scale columns by their term magnitude, and return
the smallest singular value via a Jacobi eigensolver on the Gram matrix.

Points where the root iteration fails to converge return sigma = -1 and are
recomputed by the caller on the pure backend.
"""

import numpy as np

from libc.math cimport atan2, cos, fabs, pow, sin, sqrt

name = "compiled"

DEF MAXN = 24    # max polynomial degree
DEF MAXL = 40    # max boundary-row coefficient count
DEF MAXG = 12    # max boundary rows / inside roots

cdef double M_PI = 3.141592653589793238462643383279502884


cdef bint _aberth(double complex *c, int n, double complex *z) noexcept nogil:
    """Simultaneous root iteration for an ascending-coefficient polynomial."""
    cdef int i, j, it
    cdef double complex p, dp, w, s, corr, denom
    cdef double r0, ang, maxcorr, rel
    r0 = pow(abs(c[0] / c[n]), 1.0 / n)
    if r0 <= 0.0 or r0 != r0:
        r0 = 1.0
    for i in range(n):
        ang = 2.0 * M_PI * i / n + 0.376
        z[i] = r0 * (cos(ang) + 1j * sin(ang))
    for it in range(120):
        maxcorr = 0.0
        for i in range(n):
            p = c[n]
            dp = 0.0
            for j in range(n - 1, -1, -1):
                dp = dp * z[i] + p
                p = p * z[i] + c[j]
            if p == 0.0:
                continue
            if dp == 0.0:
                z[i] = z[i] * 1.000001 + 1e-8
                maxcorr = 1.0
                continue
            w = p / dp
            s = 0.0
            for j in range(n):
                if j != i:
                    s = s + 1.0 / (z[i] - z[j])
            denom = 1.0 - w * s
            if denom == 0.0:
                corr = w
            else:
                corr = w / denom
            z[i] = z[i] - corr
            rel = abs(corr) / (1.0 + abs(z[i]))
            if rel > maxcorr:
                maxcorr = rel
        if maxcorr < 1e-14:
            return True
    return maxcorr < 1e-10


cdef double _gram_min_eig(double complex *B, int g, int k) noexcept nogil:
    """Smallest eigenvalue of B^H B for B (g x k, row-major), k <= g."""
    cdef double complex A[MAXG][MAXG]
    cdef double complex apq, phase, apm, aqm
    cdef int p, q, m, sweep
    cdef double app, aqq, r, tau, t, cc, ss, off, scale, best
    for p in range(k):
        for q in range(k):
            A[p][q] = 0.0
            for m in range(g):
                A[p][q] = A[p][q] + B[m * k + p].conjugate() * B[m * k + q]
    scale = 0.0
    for p in range(k):
        if fabs(A[p][p].real) > scale:
            scale = fabs(A[p][p].real)
    if scale == 0.0:
        return 0.0
    for sweep in range(60):
        off = 0.0
        for p in range(k - 1):
            for q in range(p + 1, k):
                if abs(A[p][q]) > off:
                    off = abs(A[p][q])
        if off <= 1e-15 * scale:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = A[p][q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                app = A[p][p].real
                aqq = A[q][q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                cc = 1.0 / sqrt(1.0 + t * t)
                ss = t * cc
                for m in range(k):
                    if m == p or m == q:
                        continue
                    apm = A[p][m]
                    aqm = A[q][m]
                    A[p][m] = cc * apm - ss * phase * aqm
                    A[m][p] = A[p][m].conjugate()
                    A[q][m] = ss * phase.conjugate() * apm + cc * aqm
                    A[m][q] = A[q][m].conjugate()
                A[p][p] = app * cc * cc + aqq * ss * ss - 2.0 * cc * ss * r
                A[q][q] = app * ss * ss + aqq * cc * cc + 2.0 * cc * ss * r
                A[p][q] = 0.0
                A[q][p] = 0.0
    best = A[0][0].real
    for p in range(1, k):
        if A[p][p].real < best:
            best = A[p][p].real
    if best < 0.0:
        best = 0.0
    return best


def scan_sigma_min(base, int g, rows, double gamma_hat, lambdas):
    """Detector values over a lambda batch; see the pure backend docstring."""
    cdef double complex[::1] cbase = np.ascontiguousarray(base, dtype=np.complex128)
    cdef double[:, ::1] crows = np.ascontiguousarray(rows, dtype=np.float64)
    cdef double complex[::1] clam = np.ascontiguousarray(lambdas, dtype=np.complex128)
    cdef Py_ssize_t M = clam.shape[0]
    cdef int n = cbase.shape[0] - 1
    cdef int grows = crows.shape[0]
    cdef int ncols = crows.shape[1]
    cdef int L = ncols if ncols > grows else grows
    if n < 1 or n >= MAXN or grows >= MAXG or L >= MAXL:
        raise ValueError("model size outside compiled-kernel bounds")

    sigma_np = np.empty(M, dtype=np.float64)
    gap_np = np.empty(M, dtype=np.float64)
    count_np = np.empty(M, dtype=np.int32)
    cdef double[::1] sigma = sigma_np
    cdef double[::1] gap = gap_np
    cdef int[::1] count = count_np

    cdef double complex coeffs[MAXN + 1]
    cdef double complex roots[MAXN]
    cdef double complex zin[MAXN]
    cdef double complex q[MAXL]
    cdef double complex B[MAXG * MAXG]
    cdef double aq[MAXL]
    cdef double colscale[MAXG]
    cdef double mag
    cdef double complex lam, zkey, acc, zj
    cdef Py_ssize_t m
    cdef int i, j, r, cnt, w
    cdef double gmin, dmod, s2
    cdef bint ok

    with nogil:
        for m in range(M):
            lam = clam[m]
            for i in range(n + 1):
                coeffs[i] = cbase[i]
            coeffs[g] = coeffs[g] - lam
            ok = _aberth(coeffs, n, roots)
            if not ok:
                sigma[m] = -1.0
                gap[m] = -1.0
                count[m] = -1
                continue
            gmin = 1e300
            cnt = 0
            for i in range(n):
                dmod = fabs(abs(roots[i]) - gamma_hat)
                if dmod < gmin:
                    gmin = dmod
                if abs(roots[i]) < gamma_hat:
                    zin[cnt] = roots[i]
                    cnt = cnt + 1
            gap[m] = gmin
            count[m] = cnt
            if cnt == 0:
                sigma[m] = 1e308
                continue
            if cnt > grows:
                sigma[m] = 0.0
                continue
            # insertion sort by (modulus, angle)
            for i in range(1, cnt):
                zkey = zin[i]
                j = i - 1
                while j >= 0 and (
                    abs(zin[j]) > abs(zkey)
                    or (abs(zin[j]) == abs(zkey)
                        and atan2(zin[j].imag, zin[j].real) > atan2(zkey.imag, zkey.real))
                ):
                    zin[j + 1] = zin[j]
                    j = j - 1
                zin[j + 1] = zkey
            for j in range(cnt):
                colscale[j] = 0.0
            for r in range(grows):
                for i in range(L):
                    q[i] = crows[r][i] if i < ncols else 0.0
                q[r] = q[r] - lam
                for i in range(L):
                    aq[i] = abs(q[i])
                # term-scale majorant per column
                for j in range(cnt):
                    dmod = abs(zin[j])
                    mag = aq[L - 1]
                    for i in range(L - 2, -1, -1):
                        mag = mag * dmod + aq[i]
                    colscale[j] = colscale[j] + mag * mag
                # divided-difference values with in-place deflation
                w = L
                for j in range(cnt):
                    zj = zin[j]
                    acc = q[w - 1]
                    for i in range(w - 2, -1, -1):
                        # store quotient coefficient, continue Horner
                        q[i + 1] = acc  # quotient coeff of degree i (shifted)
                        acc = q[i] + zj * acc
                    B[r * cnt + j] = acc
                    if w > 1:
                        # quotient currently sits in q[1..w-1]; shift down
                        for i in range(w - 1):
                            q[i] = q[i + 1]
                        w = w - 1
                    else:
                        q[0] = 0.0
            for j in range(cnt):
                colscale[j] = sqrt(colscale[j])
                if colscale[j] < 1e-300:
                    colscale[j] = 1e-300
            for r in range(grows):
                for j in range(cnt):
                    B[r * cnt + j] = B[r * cnt + j] / colscale[j]
            s2 = _gram_min_eig(B, grows, cnt)
            sigma[m] = sqrt(s2)
    return sigma_np, gap_np, count_np

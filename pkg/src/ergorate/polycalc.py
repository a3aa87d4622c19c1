"""Dense complex polynomial arithmetic.

Evaluation, derivatives, root finding with multiplicity clustering, Sylvester
resultants, and resultants of z-polynomials whose coefficients are themselves
polynomials in a parameter (eliminated by sampling on the unit circle and
inverse-DFT interpolation).

Coefficients are always stored in ascending degree order.  The zero
polynomial is represented by an empty coefficient array.
"""

import numpy as np

from .errors import (
    DegreeBoundTooSmall,
    DegreeZero,
    NonConvergence,
    ZeroPolynomial,
)

RESIDUAL_TOL = 1e-10
CLUSTER_TOL = 1e-7


class ComplexPoly:
    """Dense univariate polynomial over the complex numbers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        k = c.size
        while k > 0 and c[k - 1] == 0:
            k -= 1
        self.coeffs = c[:k].copy()

    @property
    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def degree(self):
        """Degree after trailing-zero strip; -1 for the zero polynomial."""
        return self.coeffs.size - 1

    def __call__(self, z):
        if self.is_zero:
            return np.zeros(np.shape(z), dtype=complex) if np.ndim(z) else 0j
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc if acc.shape else complex(acc)

    def deriv(self, order=1):
        c = self.coeffs
        for _ in range(order):
            if c.size <= 1:
                return ComplexPoly([])
            c = c[1:] * np.arange(1, c.size)
        return ComplexPoly(c)

    def scale(self):
        """Largest coefficient magnitude (0 for the zero polynomial)."""
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def monic(self):
        if self.is_zero:
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return ComplexPoly(self.coeffs / self.coeffs[-1])

    def deflate(self, root):
        """Exact synthetic division by (z - root); the remainder is dropped."""
        if self.degree < 1:
            raise DegreeZero("cannot deflate a constant polynomial")
        c = self.coeffs
        q = np.empty(c.size - 1, dtype=complex)
        acc = c[-1]
        for i in range(c.size - 2, -1, -1):
            q[i] = acc
            acc = c[i] + root * acc
        return ComplexPoly(q)

    def __repr__(self):
        return f"ComplexPoly(degree={self.degree})"


class RootSet:
    """Clustered roots of a polynomial, each with a multiplicity."""

    __slots__ = ("roots", "cluster_tol")

    def __init__(self, roots, cluster_tol):
        self.roots = [(complex(z), int(m)) for z, m in roots]
        self.cluster_tol = float(cluster_tol)

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.roots)

    def values(self):
        return [z for z, _ in self.roots]

    def multiplicities(self):
        return [m for _, m in self.roots]

    def expanded(self):
        """Roots repeated according to multiplicity."""
        out = []
        for z, m in self.roots:
            out.extend([z] * m)
        return out

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __repr__(self):
        return f"RootSet({self.roots})"


def _polish(p, raw, steps=2):
    dp = p.deriv()
    z = np.asarray(raw, dtype=complex).copy()
    for _ in range(steps):
        pv = p(z)
        dv = dp(z)
        ok = np.abs(dv) > 1e-300
        step = np.where(ok, pv, 0.0) / np.where(ok, dv, 1.0)
        # clip to keep a near-multiple root from being thrown far off
        cap = 0.5 * (1.0 + np.abs(z))
        big = np.abs(step) > cap
        step[big] *= (cap[big] / np.abs(step[big]))
        z = z - np.where(ok, step, 0.0)
    return z


def _cluster(p, raw, cluster_tol):
    order = sorted(range(len(raw)), key=lambda i: (abs(raw[i]), np.angle(raw[i])))
    clusters = []  # list of lists of root values
    for i in order:
        z = raw[i]
        placed = False
        for cl in clusters:
            center = np.mean(cl)
            if abs(z - center) <= cluster_tol * max(1.0, abs(center)):
                cl.append(z)
                placed = True
                break
        if not placed:
            clusters.append([z])
    out = []
    for cl in clusters:
        center = complex(np.mean(cl))
        m = len(cl)
        if m > 1:
            # polish the center on the (m-1)-th derivative, where it is simple
            dm = p.deriv(m - 1)
            c = np.array([center])
            c = _polish(dm, c, steps=3)
            center = complex(c[0])
        out.append((center, m))
    out.sort(key=lambda zm: (abs(zm[0]), np.angle(zm[0])))
    return RootSet(out, cluster_tol)


def _residuals_ok(p, rootset):
    s = p.scale()
    deg = p.degree
    for z, _ in rootset:
        bound = RESIDUAL_TOL * s * max(1.0, abs(z)) ** deg
        if abs(p(z)) > bound:
            return False
    return True


def find_roots(p, cluster_tol=CLUSTER_TOL):
    """All roots of p with multiplicities, via companion-matrix eigenvalues
    plus one Newton polish, then greedy clustering at relative cluster_tol.
    """
    if p.is_zero:
        raise ZeroPolynomial("root finding needs a nonzero polynomial")
    if p.degree < 1:
        raise DegreeZero("constant polynomial has no roots")
    c = p.coeffs
    wobble = 1.0 + np.arange(c.size)  # index-dependent restart perturbation
    for attempt in range(4):
        try:
            raw = np.roots((c * (1.0 + attempt * 1e-12 * wobble))[::-1])
        except np.linalg.LinAlgError:
            continue
        raw = _polish(p, raw)
        rs = _cluster(p, raw, cluster_tol)
        if _residuals_ok(p, rs):
            return rs
    raise NonConvergence(f"root finder failed for degree {p.degree} polynomial")


def sylvester(p, q):
    """Sylvester matrix of (p, q), rows of p's coefficients first.

    Nominal degrees are taken from the input lengths, so callers may pad with
    zero leading coefficients to pin a degree convention.
    """
    pc = np.asarray(p.coeffs if isinstance(p, ComplexPoly) else p, dtype=complex)
    qc = np.asarray(q.coeffs if isinstance(q, ComplexPoly) else q, dtype=complex)
    m, n = pc.size - 1, qc.size - 1
    if m < 0 or n < 0:
        raise ZeroPolynomial("resultant of a zero polynomial")
    S = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        S[i, i : i + m + 1] = pc[::-1]
    for i in range(m):
        S[n + i, i : i + n + 1] = qc[::-1]
    return S

def resultant(p, q):
    """det of the Sylvester matrix; equals lc(p)^deg(q) * prod q(root of p)."""
    S = sylvester(p, q)
    if S.size == 0:
        return 1.0 + 0j
    return complex(np.linalg.det(S))


class LambdaPoly:
    """z-polynomial whose coefficients are polynomials in a parameter.

    coeffs_in_z[k] is the parameter-polynomial multiplying z**k.  The declared
    z-degree is len(coeffs_in_z) - 1 and fixes the Sylvester convention even
    when the leading coefficient vanishes at particular parameter values.
    """

    __slots__ = ("coeffs_in_z",)

    def __init__(self, coeffs_in_z):
        self.coeffs_in_z = [
            c if isinstance(c, ComplexPoly) else ComplexPoly(c) for c in coeffs_in_z
        ]
        if not self.coeffs_in_z:
            raise ZeroPolynomial("empty coefficient list")

    @property
    def z_degree(self):
        return len(self.coeffs_in_z) - 1

    @property
    def lambda_degree(self):
        return max(c.degree for c in self.coeffs_in_z)

    def coeff_array_at(self, lam):
        """Coefficients in z at a numeric parameter, keeping declared length."""
        return np.array([c(lam) for c in self.coeffs_in_z], dtype=complex)

    def at_lambda(self, lam):
        """Specialize to a ComplexPoly in z (trailing zeros stripped)."""
        return ComplexPoly(self.coeff_array_at(lam))

    @classmethod
    def from_bivariate(cls, C):
        """Build from an ndarray C[i, k] = coefficient of lambda**i z**k."""
        C = np.asarray(C, dtype=complex)
        return cls([ComplexPoly(C[:, k]) for k in range(C.shape[1])])


def _resultant_arrays(pc, qc):
    m, n = len(pc) - 1, len(qc) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        S[i, i : i + m + 1] = pc[::-1]
    for i in range(m):
        S[n + i, i : i + n + 1] = qc[::-1]
    return complex(np.linalg.det(S)) if S.size else 1.0 + 0j


def _realify(coeffs, floor):
    if coeffs.size and np.max(np.abs(coeffs.imag)) <= max(floor, 1e-12 * np.max(np.abs(coeffs))):
        return coeffs.real.astype(complex)
    return coeffs


def resultant_in_lambda(p, q, degree_bound):
    """Eliminate z from two LambdaPoly, returning a ComplexPoly in the parameter.

    Samples the parameter at degree_bound+1 points on the unit circle, takes a
    numeric Sylvester resultant at each, and recovers coefficients by inverse
    DFT.  Raises DegreeBoundTooSmall when fresh off-grid samples disagree with
    the interpolant (the aliasing signature of a bound below the true degree).
    """
    if degree_bound < 0:
        raise DegreeBoundTooSmall("degree bound must be nonnegative")
    M = degree_bound + 1
    nodes = np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.array(
        [_resultant_arrays(p.coeff_array_at(t), q.coeff_array_at(t)) for t in nodes]
    )
    coeffs = np.fft.fft(vals) / M
    vscale = float(np.max(np.abs(vals))) if vals.size else 0.0
    floor = 1e-12 * max(vscale, 1.0e-300)
    coeffs[np.abs(coeffs) <= floor] = 0.0
    coeffs = _realify(coeffs, floor)
    out = ComplexPoly(coeffs)
    # off-grid consistency check catches aliasing from an undersized bound
    probe = 1.0371 * np.exp(2j * np.pi * (np.arange(10) + 0.371) / 10.7)
    for t in probe:
        direct = _resultant_arrays(p.coeff_array_at(t), q.coeff_array_at(t))
        interp = out(t)
        tol = 1e-8 * max(abs(direct), abs(interp), vscale * 1e-6, 1e-300)
        if abs(direct - interp) > tol:
            raise DegreeBoundTooSmall(
                f"interpolated resultant disagrees off-grid ({abs(direct - interp):.2e})"
            )
    return out


# ---------------------------------------------------------------------------
# Dense multivariate helpers used by the elimination chain.  A polynomial in
# variables (v0, v1, ..., vk) is an ndarray C with C[e0, e1, ..., ek] the
# coefficient of v0**e0 * v1**e1 * ... * vk**ek.  Axis 0 is always the
# eigenvalue parameter.
# ---------------------------------------------------------------------------

def nd_trim(C, tol=0.0):
    C = np.asarray(C, dtype=complex)
    for ax in range(C.ndim):
        while C.shape[ax] > 1:
            top = [slice(None)] * C.ndim
            top[ax] = -1
            if np.max(np.abs(C[tuple(top)])) <= tol:
                top[ax] = slice(0, C.shape[ax] - 1)
                C = C[tuple(top)]
            else:
                break
    return C


def nd_add(A, B):
    shape = [max(sa, sb) for sa, sb in zip(A.shape, B.shape)]
    out = np.zeros(shape, dtype=complex)
    out[tuple(slice(0, s) for s in A.shape)] += A
    out[tuple(slice(0, s) for s in B.shape)] += B
    return out


def nd_mul(A, B):
    out = np.zeros([sa + sb - 1 for sa, sb in zip(A.shape, B.shape)], dtype=complex)
    for idx in np.ndindex(*B.shape):
        b = B[idx]
        if b != 0:
            window = tuple(slice(i, i + s) for i, s in zip(idx, A.shape))
            out[window] += b * A
    return out


def nd_det(M):
    """Determinant of a square matrix of coefficient ndarrays (cofactors)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    out = np.zeros((1,) * M[0][0].ndim, dtype=complex)
    for j in range(n):
        minor = [[M[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = nd_mul(M[0][j], nd_det(minor))
        if j % 2:
            term = -term
        out = nd_add(out, term)
    return out


def nd_div_diff(C, ax_i, ax_j, rel_tol=1e-9):
    """Exact division of C by (v_i - v_j); raises if the remainder is large."""
    C = np.asarray(C, dtype=complex)
    D = C.shape[ax_i] - 1
    if D < 1:
        raise ZeroPolynomial("dividend has degree 0 in the divided variable")
    Cm = np.moveaxis(C, ax_i, 0)
    aj = ax_j if ax_j < ax_i else ax_j - 1

    def shift_j(A):
        out = np.zeros([s + (1 if k == aj else 0) for k, s in enumerate(A.shape)], complex)
        sl = [slice(None)] * A.ndim
        sl[aj] = slice(1, None)
        out[tuple(sl)] = A
        return out

    Q = [None] * D
    Q[D - 1] = Cm[D]
    for m in range(D - 2, -1, -1):
        Q[m] = nd_add(Cm[m + 1], shift_j(Q[m + 1]))
    rem = nd_add(Cm[0], shift_j(Q[0]))
    cscale = max(float(np.max(np.abs(C))), 1e-300)
    if np.max(np.abs(rem)) > rel_tol * cscale:
        raise ZeroPolynomial("polynomial not divisible by the root difference")
    shape = [max(q.shape[k] for q in Q) for k in range(Q[0].ndim)]
    out = np.zeros([D] + shape, dtype=complex)
    for m in range(D):
        out[(m,) + tuple(slice(0, s) for s in Q[m].shape)] = Q[m]
    return np.moveaxis(out, 0, ax_i)


def nd_eval(C, point):
    """Evaluate a coefficient ndarray at a full point (one value per axis)."""
    C = np.asarray(C, dtype=complex)
    for v in reversed(point):
        acc = C[..., -1]
        for k in range(C.shape[-1] - 2, -1, -1):
            acc = acc * v + C[..., k]
        C = acc
    return complex(C)


def nd_eliminate_last(P, e_base, g_idx):
    """Resultant of P and E w.r.t. the last axis of P, by grid interpolation.

    E(z) = e_base(z) - lambda * z**g_idx where lambda is axis 0 of P.  The
    remaining axes of the result keep their meaning.  Degree bounds follow
    from the array shapes; roots-of-unity tensor grids make the inverse
    transform an FFT.
    """
    P = np.asarray(P, dtype=complex)
    e_base = np.asarray(e_base, dtype=complex)
    m = P.shape[-1] - 1
    n = e_base.size - 1
    if m < 1:
        # the eliminated variable is absent: Res(const, E) = const**deg(E)
        base = P[..., 0]
        out = np.ones((1,) * base.ndim, dtype=complex)
        for _ in range(n):
            out = nd_mul(out, base)
        return out
    grid = [n * (P.shape[ax] - 1) + (m if ax == 0 else 0) + 1 for ax in range(P.ndim - 1)]
    V = P
    for ax, Mg in enumerate(grid):
        V = np.fft.ifft(V, n=Mg, axis=ax) * Mg
    lam_nodes = np.exp(2j * np.pi * np.arange(grid[0]) / grid[0])
    R = np.empty(V.shape[:-1], dtype=complex)
    for idx in np.ndindex(*V.shape[:-1]):
        e = e_base.copy()
        e[g_idx] -= lam_nodes[idx[0]]
        R[idx] = _resultant_arrays(V[idx], e)
    C = R
    for ax in range(C.ndim):
        C = np.fft.fft(C, axis=ax) / C.shape[ax]
    floor = 1e-11 * max(float(np.max(np.abs(R))), 1e-300)
    C[np.abs(C) <= floor] = 0.0
    C = _realify(C, floor)
    C = nd_trim(C, tol=0.0)
    # spot-check the reconstruction at off-grid points
    rng = np.random.default_rng(7)
    for _ in range(3):
        pt = 0.93 * np.exp(2j * np.pi * rng.random(C.ndim))
        pfull = list(pt) + [0.0]
        coeffs_z = np.array(
            [nd_eval(P[..., k], pfull[:-1]) for k in range(P.shape[-1])], dtype=complex
        )
        e = e_base.copy()
        e[g_idx] -= pt[0]
        direct = _resultant_arrays(coeffs_z, e)
        interp = nd_eval(C, pt)
        # reconstruction error is absolute at the grid-value scale
        tol = 1e-7 * max(abs(direct), abs(interp)) + 1e-8 * float(np.max(np.abs(R))) + 1e-300
        if abs(direct - interp) > tol:
            raise DegreeBoundTooSmall("elimination grid reconstruction failed")
    return C


def count_multiplicity_at(coeffs, root, tol):
    """Number of times (x - root) divides the coefficient array within tol."""
    p = ComplexPoly(coeffs)
    mult = 0
    while p.degree >= 1:
        s = p.scale() * max(1.0, abs(root)) ** max(p.degree, 0)
        if abs(p(root)) > tol * max(s, 1e-300):
            break
        p = p.deflate(root)
        mult += 1
    return mult, p

"""Eigenvalue candidates in the annulus and the exact convergence rate.

Two independent routes locate the point spectrum between the essential radius
and the unit circle:

* the elimination route assembles the boundary-system determinants
  symbolically over (lambda, z_1..z_s), divides out forced root-coincidence
  factors, and eliminates each z variable against the characteristic
  polynomial by successive resultants, leaving univariate eliminants whose
  roots are the candidates;
* the detector route scans the annulus for rank drops of the boundary system
  and refines each seed by a damped Newton iteration on its determinant.

Every candidate from either route is certified (or rejected) by
reconstructing the eigenfunction ansatz and checking the full eigen-equation
row by row.  The final rate is max(delta_hat, |verified eigenvalues|).
"""

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import drift, polycalc, rwmodel, spectrum
from . import _kernels
from .errors import (
    DegreeBoundTooSmall,
    EtaExceedsG,
    ModelInvalid,
    NonConvergence,
    RootOnCircle,
    ZeroPolynomial,
)

KERNEL_REL_TOL = 1e-8     # sigma_min <= tol * sigma_max certifies a kernel vector
EIGEN_RESID_TOL = 1e-8    # relative residual of the reconstructed eigen-equation
ROOT_MATCH_TOL = 1e-7     # intersection tolerance across the ell eliminants
ROUTE_MATCH_TOL = 1e-6    # detector/elimination agreement per eigenvalue
BOUNDARY_EPS = 1e-9       # annulus-edge band reported as inconclusive
DOUBLE_ROOT_TOL = 1e-7    # |Q(lambda)| below this (relative) keeps a candidate
ONE_DEFLATE_TOL = 1e-7    # residual at lambda=1 treated as the trivial factor
VERIFY_ROWS_EXTRA = 50    # eigen-equation checked on 0..g+d+c+VERIFY_ROWS_EXTRA
SCAN_SEED_THRESHOLD = 0.9  # local minima below this seed the refinement
SCAN_SEED_CAP = 256
ELIMINANT_DEDUPE_TOL = 2e-3  # a split double root of an eliminant reads as
                             # two roots ~sqrt(coefficient noise) apart
REFINE_CAP_RESULTANT = 2e-3  # how far verification may polish an eliminant root
MAX_ELIM_GRID = 200_000   # interpolation budget per elimination stage


def patterns(eta_val):
    """All multiplicity patterns: nondecreasing positive parts summing to eta."""
    out = []

    def rec(remaining, minpart, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(minpart, remaining + 1):
            rec(remaining - part, part, prefix + [part])

    rec(int(eta_val), 1, [])
    out.sort(key=lambda t: (-len(t), t))
    return out


# ---------------------------------------------------------------------------
# boundary system
# ---------------------------------------------------------------------------

def boundary_matrix(model, lam, inside_roots, with_scales=False):
    """g x eta matrix of the boundary equations in the z^(k) basis.

    Column (z, k) holds (P z^(k))(i) - lambda z^(k)(i) for the boundary rows
    i = 0..g-1; a nonzero kernel vector is exactly an eigenfunction ansatz
    that satisfies the boundary equations.  With with_scales=True also
    returns each column's term scale (the same sums with every term replaced
    by its absolute value), the yardstick for "this column cancelled".
    """
    g = model.g
    rows = model.boundary.rows
    cols = []
    scales = []
    for z, m in inside_roots:
        for k in range(1, m + 1):
            col = np.empty(g, dtype=complex)
            mag = np.empty(g, dtype=float)
            for i in range(g):
                acc = 0j
                aac = 0.0
                for j in range(model.c + 1):
                    if rows[i][j]:
                        term = rows[i][j] * rwmodel.seq_pow(z, k, j)
                        acc += term
                        aac += abs(term)
                lam_term = lam * rwmodel.seq_pow(z, k, i)
                col[i] = acc - lam_term
                mag[i] = aac + abs(lam_term)
            cols.append(col)
            scales.append(max(float(np.linalg.norm(mag)), 1e-300))
    if not cols:
        B = np.zeros((g, 0), dtype=complex)
        return (B, np.zeros(0)) if with_scales else B
    B = np.array(cols, dtype=complex).T
    if with_scales:
        return B, np.array(scales)
    return B


def detector(model, profile, lam):
    """Smallest singular value of the boundary system at lam, columns scaled
    by their term magnitude.

    Zero (up to tolerance) signals a nontrivial kernel, hence an eigenvalue;
    scaling by term magnitude rather than column norm keeps the statistic
    meaningful when a column itself cancels (a single basis sequence already
    solving the boundary equations).  Evaluable on the closed annulus; raises
    RootOnCircle when the root classification itself breaks down.
    """
    rep = spectrum.count_inside(model, profile, lam)
    if rep.N == 0:
        return float("inf")
    B, scales = boundary_matrix(model, lam, rep.roots_inside, with_scales=True)
    if B.shape[1] > B.shape[0]:
        return 0.0  # wide system always has a kernel
    s = np.linalg.svd(B / scales, compute_uv=False)
    return float(s[-1])


# ---------------------------------------------------------------------------
# detector route: scan + refine
# ---------------------------------------------------------------------------

def _dd_boundary_matrix(model, lam, inside_sorted):
    """Boundary system in the Newton divided-difference basis (scan basis),
    plus per-column term scales from the absolute-coefficient majorant."""
    g, c = model.g, model.c
    L = max(c + 1, g)
    B = np.empty((g, len(inside_sorted)), dtype=complex)
    mag = np.zeros((g, len(inside_sorted)), dtype=float)
    for r in range(g):
        q = np.zeros(L, dtype=complex)
        q[: c + 1] = model.boundary.rows[r]
        q[r] -= lam
        aq = np.abs(q)
        poly = polycalc.ComplexPoly(q)
        for j, z in enumerate(inside_sorted):
            B[r, j] = poly(z) if not poly.is_zero else 0j
            mag[r, j] = float(np.polyval(aq[::-1], abs(z)))
            poly = poly.deflate(z) if poly.degree >= 1 else polycalc.ComplexPoly([])
    scales = np.maximum(np.linalg.norm(mag, axis=0), 1e-300)
    return B, scales


def _inside_sorted(model, profile, lam):
    p = spectrum.char_poly(model, lam)
    raw = np.roots(p.coeffs[::-1])
    dp = p.deriv()
    pv = p(raw)
    dv = dp(raw)
    ok = np.abs(dv) > 1e-300
    raw[ok] -= pv[ok] / dv[ok]
    inside = [z for z in raw if abs(z) < profile.gamma_hat]
    inside.sort(key=lambda z: (abs(z), np.angle(z)))
    return inside


def _det_normalized(model, profile, lam):
    """Term-scaled boundary determinant in the scan basis; vanishes exactly
    at the eigenvalues and is smooth there, hence a good Newton target."""
    inside = _inside_sorted(model, profile, lam)
    if len(inside) == 0:
        return 1.0 + 0j
    if len(inside) > model.g:
        return 0j
    B, scales = _dd_boundary_matrix(model, lam, inside)
    if B.shape[1] < B.shape[0]:
        s = np.linalg.svd(B / scales, compute_uv=False)
        return complex(s[-1])
    return complex(np.linalg.det(B / scales))


def refine_zero(model, profile, lam0, move_cap, tol=1e-12, max_iter=40):
    """Damped Newton on the normalized boundary determinant, trust-limited.

    Returns (lam, |det|, moved_ok); moved_ok is False when the iteration
    drifted beyond move_cap, in which case lam0 had no nearby zero.
    """
    lam = complex(lam0)
    f = _det_normalized(model, profile, lam)
    for _ in range(max_iter):
        if abs(f) <= tol:
            break
        h = 1e-7 * max(1.0, abs(lam))
        fp = (_det_normalized(model, profile, lam + h) - _det_normalized(model, profile, lam - h)) / (2 * h)
        if abs(fp) < 1e-300:
            break
        step = f / fp
        cap = 0.25 * move_cap
        if abs(step) > cap:
            step *= cap / abs(step)
        nxt = lam - step
        fn = _det_normalized(model, profile, nxt)
        halvings = 0
        while abs(fn) >= abs(f) and halvings < 6:
            step *= 0.5
            nxt = lam - step
            fn = _det_normalized(model, profile, nxt)
            halvings += 1
        if abs(fn) >= abs(f):
            break
        lam, f = nxt, fn
        if abs(lam - lam0) > move_cap:
            return lam, abs(f), False
    return lam, abs(f), abs(lam - lam0) <= move_cap


def _scan_seeds(model, profile, radial, angular, margin, backend=None):
    """Grid the annulus, evaluate the detector kernel, return local minima."""
    radial = max(int(radial), 2)
    angular = max(int(angular), 8)
    kern = _kernels.get_backend(backend)
    lo = math.log(profile.delta_hat * (1.0 + margin))
    hi = math.log(1.0 - margin)
    radii = np.exp(np.linspace(lo, hi, radial))
    angles = 2.0 * np.pi * (np.arange(angular) + 0.5) / angular
    grid = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    base = np.asarray(model.law.a, dtype=complex)
    sig, gap, cnt = kern.scan_sigma_min(
        base, model.g, np.asarray(model.boundary.rows, dtype=float),
        profile.gamma_hat, grid,
    )
    bad = ~np.isfinite(sig) | (sig < 0)
    if np.any(bad):  # compiled backend flags non-converged points; redo in pure
        psig, pgap, pcnt = _kernels.get_backend("pure").scan_sigma_min(
            base, model.g, np.asarray(model.boundary.rows, dtype=float),
            profile.gamma_hat, grid[bad],
        )
        sig[bad] = psig
        gap[bad] = pgap
        cnt[bad] = pcnt
    S = sig.reshape(radial, angular)
    seeds = []
    for i in range(radial):
        for j in range(angular):
            v = S[i, j]
            if v > SCAN_SEED_THRESHOLD:
                continue
            neigh = [
                S[i2, j2 % angular]
                for i2 in range(max(0, i - 1), min(radial, i + 2))
                for j2 in (j - 1, j, j + 1)
                if not (i2 == i and j2 % angular == j)
            ]
            if v <= min(neigh):
                seeds.append((v, radii[i] * np.exp(1j * angles[j])))
    seeds.sort(key=lambda t: t[0])
    spacing = max(radii[-1] - radii[-2], radii[-1] * (angles[1] - angles[0]))
    return [s for _, s in seeds[:SCAN_SEED_CAP]], 4.0 * spacing


def detector_candidates(model, profile, radial=64, angular=256,
                        margin=spectrum.DEFAULT_MARGIN, backend=None):
    """Zeros of the boundary determinant found by scanning + refinement."""
    seeds, move_cap = _scan_seeds(model, profile, radial, angular, margin, backend)
    zeros = []
    for seed in seeds:
        lam, resid, ok = refine_zero(model, profile, seed, move_cap)
        if not ok or resid > 1e-9:
            continue
        if abs(lam - 1.0) <= 1e-7:
            continue  # stochasticity zero at lambda = 1 (Perron point)
        zeros.append(lam)
    return _cluster_points(zeros, 1e-9)


# ---------------------------------------------------------------------------
# elimination route
# ---------------------------------------------------------------------------

def _row_polys(model):
    """b_r(z) = sum_j P(r, j) z**j - lambda z**r as (lambda, z) arrays."""
    g, c = model.g, model.c
    L = max(c + 1, g)
    out = []
    for r in range(g):
        C = np.zeros((2, L), dtype=complex)
        C[0, : c + 1] = model.boundary.rows[r]
        C[1, r] -= 1.0
        out.append(C)
    return out


def _dz(C):
    if C.shape[1] <= 1:
        return np.zeros((C.shape[0], 1), dtype=complex)
    return C[:, 1:] * np.arange(1, C.shape[1])


def _embed(C2, which_z, s):
    shape = [C2.shape[0]] + [1] * s
    shape[1 + which_z] = C2.shape[1]
    return C2.reshape(shape)


def _pattern_entries(model, mu):
    """Boundary-equation entries for pattern mu over (lambda, z_1..z_s)."""
    s = len(mu)
    rowp = _row_polys(model)
    entries = []
    for r in range(model.g):
        row_entries = []
        for i, m in enumerate(mu):
            D = rowp[r]
            for _ in range(m):
                row_entries.append(_embed(D, i, s))
                D = _dz(D)
        entries.append(row_entries)
    return entries


def _deflate_one(R):
    mult, quotient = polycalc.count_multiplicity_at(R.coeffs, 1.0, ONE_DEFLATE_TOL)
    return quotient if mult else R


def _cluster_points(pts, tol):
    out = []
    for z in sorted(pts, key=lambda w: (abs(w), np.angle(w))):
        for i, (center, n) in enumerate(out):
            if abs(z - center) <= tol * (1.0 + abs(center)):
                out[i] = ((center * n + z) / (n + 1), n + 1)
                break
        else:
            out.append((z, 1))
    return [c for c, _ in out]


def _intersect_root_lists(lists, tol):
    base = _cluster_points(lists[0], tol)
    for other in lists[1:]:
        base = [
            z for z in base
            if any(abs(z - w) <= tol * (1.0 + abs(z)) for w in other)
        ]
    return base


def _in_open_annulus(lam, profile, eps=BOUNDARY_EPS):
    r = abs(lam)
    return profile.delta_hat * (1.0 + eps) < r < 1.0 - eps


def _near_annulus_edge(lam, profile, eps=BOUNDARY_EPS):
    r = abs(lam)
    return (abs(r - profile.delta_hat) <= eps * profile.delta_hat) or (abs(r - 1.0) <= eps)


def _resultant_candidates_full(model, profile, eta_val):
    if eta_val > model.g:
        raise EtaExceedsG(
            f"eta={eta_val} exceeds g={model.g}; the elimination route needs eta <= g"
        )
    eb = np.asarray(model.law.a, dtype=complex)
    sets = {}
    edge = {}
    degenerate = {}
    for mu in patterns(eta_val):
        s = len(mu)
        entries = _pattern_entries(model, mu)
        lam_lists = []
        saw_degenerate = False
        for rowsel in combinations(range(model.g), eta_val):
            try:
                sub = [entries[r] for r in rowsel]
                P = polycalc.nd_det(sub)
                for i in range(s):
                    for j in range(i + 1, s):
                        for _ in range(min(mu[i], mu[j])):
                            P = polycalc.nd_div_diff(P, 1 + i, 1 + j)
                n = eb.size - 1
                for _ in range(s):
                    gridsize = np.prod(
                        [n * (P.shape[ax] - 1) + (P.shape[-1] - 1 if ax == 0 else 0) + 1
                         for ax in range(P.ndim - 1)]
                    )
                    if gridsize > MAX_ELIM_GRID:
                        raise DegreeBoundTooSmall(
                            f"elimination grid would need {gridsize} nodes"
                        )
                    P = polycalc.nd_eliminate_last(P, eb, model.g)
                R = polycalc.ComplexPoly(np.asarray(P).ravel())
                if R.is_zero:
                    saw_degenerate = True  # no constraint from this minor
                    continue
                R = _deflate_one(R)
                if R.degree < 1:
                    lam_lists.append([])  # only the trivial root at 1: empty set
                    continue
                roots = polycalc.find_roots(R)
            except (DegreeBoundTooSmall, NonConvergence, ZeroPolynomial):
                saw_degenerate = True
                continue
            lam_lists.append([z for z, _ in roots])
        if not lam_lists:
            sets[mu] = None  # no constraint recovered; detector route must decide
            degenerate[mu] = True
            continue
        degenerate[mu] = saw_degenerate
        lams = _intersect_root_lists(lam_lists, ROOT_MATCH_TOL)
        lams = _cluster_points(lams, ELIMINANT_DEDUPE_TOL)
        sets[mu] = [l for l in lams if _in_open_annulus(l, profile)]
        edge[mu] = [l for l in lams if _near_annulus_edge(l, profile) and abs(l - 1.0) > 1e-7]
    return sets, edge, degenerate


def resultant_candidates(model, profile, eta_val):
    """Map each multiplicity pattern to its eliminant roots inside the annulus."""
    sets, _, _ = _resultant_candidates_full(model, profile, eta_val)
    return sets


def discriminant_poly(model):
    """Q(lambda) = Res_z(E, dE/dz); zeros are the only lambda where the
    characteristic polynomial can have a multiple root."""
    n = model.g + model.d
    E = np.zeros((2, n + 1), dtype=complex)
    E[0] = np.asarray(model.law.a, dtype=complex)
    E[1, model.g] = -1.0
    dE = _dz(E)
    p = polycalc.LambdaPoly.from_bivariate(E)
    q = polycalc.LambdaPoly.from_bivariate(dE)
    return polycalc.resultant_in_lambda(p, q, 2 * n - 1)


def double_root_filter(model, lam_list, tol=DOUBLE_ROOT_TOL):
    """Keep only lambda at which E can actually have a multiple root."""
    if not lam_list:
        return []
    Q = discriminant_poly(model)
    scale = max(Q.scale(), 1e-300)
    out = []
    for lam in lam_list:
        bound = tol * scale * max(1.0, abs(lam)) ** max(Q.degree, 0)
        if abs(Q(lam)) <= bound:
            out.append(lam)
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class CandidateEigenvalue:
    lam: complex
    pattern: tuple
    inside_roots: object = None
    kernel_vector: object = None
    boundary_residual: float = float("inf")
    recurrence_residual: float = float("inf")
    kernel_dim: int = 0
    accepted: bool = False
    reason: str = ""
    routes: tuple = ()

    def to_dict(self):
        return {
            "lambda": [float(self.lam.real), float(self.lam.imag)],
            "pattern": list(self.pattern),
            "residuals": {
                "boundary": self.boundary_residual,
                "recurrence": self.recurrence_residual,
            },
        }


def verify_candidate(model, profile, lam, pattern=None):
    """Certify or reject lam as an eigenvalue on the weighted space.

    Builds the boundary system for the observed inside roots, extracts a
    kernel vector by singular decomposition, reconstructs the eigenfunction
    on 0..g+d+c+50 and checks every boundary and recurrence row relatively.
    When pattern is given, the observed multiplicities must realize it.
    """
    lam = complex(lam)
    try:
        rep = spectrum.count_inside(model, profile, lam)
    except RootOnCircle as exc:
        return CandidateEigenvalue(
            lam=lam, pattern=tuple(pattern or ()), reason=f"root on circle: {exc}"
        )
    observed = tuple(sorted(rep.roots_inside.multiplicities()))
    if pattern is not None and observed != tuple(sorted(pattern)):
        return CandidateEigenvalue(
            lam=lam,
            pattern=tuple(pattern),
            inside_roots=rep.roots_inside,
            reason=f"pattern mismatch: observed {observed}",
        )
    pattern = observed
    B, scales = boundary_matrix(model, lam, rep.roots_inside, with_scales=True)
    eta_val = B.shape[1]
    _, svals, Vh = np.linalg.svd(B / scales)
    # sigma_max floored by 1: term-scaled columns have unit natural magnitude,
    # so a uniformly cancelled system still certifies its kernel
    smax = max(float(svals[0]) if svals.size else 0.0, 1.0)
    free_cols = max(0, eta_val - svals.size)
    sigma_min = float(svals[-1]) if (eta_val <= model.g and svals.size) else 0.0
    kernel_dim = int(np.sum(svals <= KERNEL_REL_TOL * smax)) + free_cols
    if sigma_min > KERNEL_REL_TOL * smax:
        return CandidateEigenvalue(
            lam=lam,
            pattern=pattern,
            inside_roots=rep.roots_inside,
            boundary_residual=sigma_min / smax,
            kernel_dim=kernel_dim,
            reason="boundary system has trivial kernel",
        )
    alpha = np.conj(Vh[-1]) / scales  # kernel vector back in the z^(k) basis
    alpha = alpha / np.linalg.norm(alpha)
    terms = []
    idx = 0
    for z, m in rep.roots_inside:
        for k in range(1, m + 1):
            terms.append((z, k, complex(alpha[idx])))
            idx += 1
    f = rwmodel.SequenceAnsatz(tuple(terms))
    upto = model.g + model.d + model.c + VERIFY_ROWS_EXTRA
    fv = f.values(upto + model.d + 1)
    boundary_res = 0.0
    recurrence_res = 0.0
    for i in range(upto + 1):
        if i < model.g:
            row = model.boundary.rows[i]
            lhs = sum(row[j] * fv[j] for j in range(model.c + 1))
            den = max(abs(lam * fv[i]), sum(abs(row[j] * fv[j]) for j in range(model.c + 1)))
        else:
            lhs = 0j
            den_terms = 0.0
            for k in range(-model.g, model.d + 1):
                p = model.law.prob(k)
                if p:
                    lhs += p * fv[i + k]
                    den_terms += abs(p * fv[i + k])
            den = max(abs(lam * fv[i]), den_terms)
        resid = abs(lhs - lam * fv[i]) / max(den, 1e-280)
        if i < model.g:
            boundary_res = max(boundary_res, resid)
        else:
            recurrence_res = max(recurrence_res, resid)
    accepted = boundary_res <= EIGEN_RESID_TOL and recurrence_res <= EIGEN_RESID_TOL
    return CandidateEigenvalue(
        lam=lam,
        pattern=pattern,
        inside_roots=rep.roots_inside,
        kernel_vector=alpha,
        boundary_residual=boundary_res,
        recurrence_residual=recurrence_res,
        kernel_dim=kernel_dim,
        accepted=accepted,
        reason="" if accepted else "eigen-equation residual too large",
    )


# ---------------------------------------------------------------------------
# rate
# ---------------------------------------------------------------------------

@dataclass
class RateReport:
    delta_hat: float
    gamma_hat: float
    eta: int
    candidates: list
    rho_hat: float
    method: str
    lambda_sets: dict = field(default_factory=dict)
    filtered_sets: dict = field(default_factory=dict)
    rejected: list = field(default_factory=list)
    boundary_inconclusive: list = field(default_factory=list)
    disagreement: bool = False
    provenance: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "delta_hat": self.delta_hat,
            "eta": self.eta,
            "candidates": [c.to_dict() for c in self.candidates],
            "rho_hat": self.rho_hat,
            "method": self.method,
            "gamma_hat": self.gamma_hat,
            "lambda_sets": {
                "-".join(map(str, mu)): [[z.real, z.imag] for z in (lams or [])]
                for mu, lams in self.lambda_sets.items()
            },
            "filtered_sets": {
                "-".join(map(str, mu)): [[z.real, z.imag] for z in lams]
                for mu, lams in self.filtered_sets.items()
            },
            "disagreement": self.disagreement,
            "provenance": self.provenance,
        }


def _match_sets(A, B, tol):
    if len(A) != len(B):
        return False
    used = [False] * len(B)
    for a in A:
        hit = False
        for i, b in enumerate(B):
            if not used[i] and abs(a - b) <= tol * (1.0 + abs(a)):
                used[i] = True
                hit = True
                break
        if not hit:
            return False
    return True


def rate(model, method="both", scan=(64, 256), samples=200, gamma=None,
         margin=spectrum.DEFAULT_MARGIN, backend=None):
    """Full pipeline: profile, inside-root count, candidate search on the
    requested route(s), certification, and the rate formula."""
    violations = rwmodel.validate(model)
    if violations:
        raise ModelInvalid("; ".join(violations))
    if gamma is None:
        profile = drift.compute_profile(model.law)
    else:
        profile = drift.profile_at_gamma(model.law, gamma)
    eta_val = spectrum.eta(model, profile, samples=samples, margin=margin)
    prov = {
        "delta_hat": "minimum of the increment generating function",
        "eta": f"inside-root count agreed across {samples} annulus samples",
    }

    run_resultant = method in ("both", "resultant")
    run_detector = method in ("both", "detector")
    if run_resultant and eta_val > model.g:
        if method == "resultant":
            raise EtaExceedsG(f"eta={eta_val} > g={model.g}")
        run_resultant = False
        run_detector = True
        prov["route"] = "eta exceeds g: elimination unavailable, detector only"

    accepted = []
    rejected = []
    inconclusive = []
    lambda_sets = {}
    filtered_sets = {}

    def note(cand, route):
        for known in accepted:
            if abs(known.lam - cand.lam) <= ROUTE_MATCH_TOL * (1.0 + abs(cand.lam)):
                known.routes = tuple(sorted(set(known.routes) | {route}))
                return
        cand.routes = (route,)
        accepted.append(cand)

    Z_res = None
    if run_resultant:
        sets, edge, degenerate = _resultant_candidates_full(model, profile, eta_val)
        lambda_sets = sets
        Z_res = []
        for mu, lams in sets.items():
            if lams is None:
                prov[f"pattern {mu}"] = "eliminant degenerate; left to the detector route"
                continue
            use = double_root_filter(model, lams) if max(mu) >= 2 else list(lams)
            filtered_sets[mu] = use
            for lam in use:
                lam_p, fres, ok = refine_zero(
                    model, profile, lam, move_cap=REFINE_CAP_RESULTANT * (1.0 + abs(lam))
                )
                target = lam_p if ok else lam
                # polishing may reveal the candidate as trivial-factor debris
                # or push it onto the annulus boundary
                if abs(target - 1.0) <= 1e-7:
                    continue
                if _near_annulus_edge(target, profile):
                    inconclusive.append(target)
                    continue
                if not _in_open_annulus(target, profile):
                    continue
                cand = verify_candidate(model, profile, target, mu)
                if cand.accepted:
                    Z_res.append(cand.lam)
                    note(cand, "resultant")
                else:
                    rejected.append(cand)
            inconclusive.extend(edge.get(mu, []))

    Z_det = None
    if run_detector:
        radial, angular = scan
        zeros = detector_candidates(model, profile, radial, angular, margin, backend)
        Z_det = []
        for lam in zeros:
            if _near_annulus_edge(lam, profile):
                inconclusive.append(lam)
                continue
            if not _in_open_annulus(lam, profile):
                continue
            cand = verify_candidate(model, profile, lam, None)
            if cand.accepted:
                Z_det.append(cand.lam)
                note(cand, "detector")
            else:
                rejected.append(cand)

    disagreement = False
    if Z_res is not None:
        Z_res = _cluster_points(Z_res, ROUTE_MATCH_TOL)
    if Z_det is not None:
        Z_det = _cluster_points(Z_det, ROUTE_MATCH_TOL)
    if Z_res is not None and Z_det is not None:
        disagreement = not _match_sets(Z_res, Z_det, ROUTE_MATCH_TOL)
        if disagreement:
            prov["disagreement"] = (
                f"elimination found {[f'{z:.6g}' for z in Z_res]}, "
                f"detector found {[f'{z:.6g}' for z in Z_det]}"
            )

    method_tag = (
        "both" if (Z_res is not None and Z_det is not None)
        else ("resultant" if Z_res is not None else "detector")
    )
    rho = max([profile.delta_hat] + [abs(c.lam) for c in accepted])
    prov["rho_hat"] = (
        "essential radius (no annulus eigenvalue verified)"
        if not accepted
        else "largest verified eigenvalue modulus"
    )
    return RateReport(
        delta_hat=profile.delta_hat,
        gamma_hat=profile.gamma_hat,
        eta=eta_val,
        candidates=accepted,
        rho_hat=rho,
        method=method_tag,
        lambda_sets=lambda_sets,
        filtered_sets=filtered_sets,
        rejected=rejected,
        boundary_inconclusive=_cluster_points(inconclusive, 1e-9),
        disagreement=disagreement,
        provenance=prov,
    )

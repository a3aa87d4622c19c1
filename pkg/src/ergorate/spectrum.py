"""Characteristic-root analysis over the annulus delta_hat < |lambda| < 1.

E(z) = z**g (phi(z) - lambda) is the characteristic polynomial of the
interior recurrence.  Its roots with |z| < gamma_hat parametrize every
candidate eigenfunction; their count is constant across the annulus and the
classification circle |z| = gamma_hat never carries a root.
"""

import math
import os
from dataclasses import dataclass

import numpy as np

from . import polycalc
from .errors import (
    InconsistentCount,
    LambdaOutOfRange,
    RootOnCircle,
    RootOnTauCircle,
)

CIRCLE_REL_TOL = 1e-8  # a root this close to the circle signals breakdown
DEFAULT_MARGIN = 1e-6  # standoff from both annulus boundary circles

# 2-d low-discrepancy lattice constants (plastic-number sequence)
_R2_A1 = 0.7548776662466927
_R2_A2 = 0.5698402909980532


@dataclass(frozen=True)
class Annulus:
    """Open annulus between the essential radius and the unit circle."""

    inner: float
    outer: float = 1.0
    margin: float = DEFAULT_MARGIN

    def __post_init__(self):
        if not (0.0 < self.inner < self.outer):
            raise LambdaOutOfRange(f"invalid annulus ({self.inner}, {self.outer})")

    def contains(self, lam, margin=None):
        m = self.margin if margin is None else margin
        r = abs(lam)
        return self.inner * (1.0 + m) < r < self.outer * (1.0 - m)


@dataclass(frozen=True)
class InsideRootReport:
    """Partition of the characteristic roots by modulus against gamma_hat."""

    lam: complex
    roots_inside: polycalc.RootSet
    roots_outside: polycalc.RootSet
    N: int
    min_circle_gap: float


def char_poly(model, lam):
    """E(z) = sum a_k z**(g+k) - lambda z**g, ascending coefficients."""
    c = np.asarray(model.law.a, dtype=complex).copy()
    c[model.g] = c[model.g] - lam
    return polycalc.ComplexPoly(c)


def count_inside(model, profile, lam, circle=None):
    """Split the roots of E at lam by modulus against the circle radius
    (gamma_hat by default) and count the inside multiplicities."""
    radius = profile.gamma_hat if circle is None else circle
    p = char_poly(model, lam)
    rs = polycalc.find_roots(p)
    gap = min(abs(abs(z) - radius) for z, _ in rs)
    if gap < CIRCLE_REL_TOL * radius:
        raise RootOnCircle(
            f"root within {gap:.2e} of the circle at lambda={lam:.6g}; "
            "lambda is effectively outside the annulus"
        )
    inside = [(z, m) for z, m in rs if abs(z) < radius]
    outside = [(z, m) for z, m in rs if abs(z) > radius]
    return InsideRootReport(
        lam=complex(lam),
        roots_inside=polycalc.RootSet(inside, rs.cluster_tol),
        roots_outside=polycalc.RootSet(outside, rs.cluster_tol),
        N=sum(m for _, m in inside),
        min_circle_gap=gap,
    )


def annulus_samples(profile, samples, margin=DEFAULT_MARGIN, seed=None):
    """Low-discrepancy points in the open annulus, uniform in (log r, angle).

    Deterministic for a fixed seed; the ERGORATE_SEED environment variable
    supplies the default phase offset.
    """
    if seed is None:
        seed = int(os.environ.get("ERGORATE_SEED", "0"))
    lo = math.log(profile.delta_hat * (1.0 + margin))
    hi = math.log(1.0 - margin)
    idx = np.arange(1, samples + 1, dtype=float)
    u = np.mod(0.5 + seed * 0.137 + idx * _R2_A1, 1.0)
    v = np.mod(0.5 + seed * 0.311 + idx * _R2_A2, 1.0)
    r = np.exp(lo + u * (hi - lo))
    return r * np.exp(2j * np.pi * v)


def eta(model, profile, samples=200, margin=DEFAULT_MARGIN):
    """Common inside-root count over the annulus, cross-checked at many
    sample points; disagreement would falsify the numerics, not the theory."""
    pts = annulus_samples(profile, samples, margin)
    counts = [count_inside(model, profile, lam).N for lam in pts]
    vals = set(counts)
    if len(vals) != 1:
        raise InconsistentCount(f"inside-root count varied across samples: {sorted(vals)}")
    return counts[0]


def tau(lam, profile):
    """Growth exponent ln|lambda| / ln delta_hat, in (0, 1) on the annulus."""
    r = abs(lam)
    if not (profile.delta_hat <= r <= 1.0):
        raise LambdaOutOfRange(f"|lambda|={r:.6g} outside [delta_hat, 1]")
    if r == 1.0:
        return 0.0
    return math.log(r) / math.log(profile.delta_hat)


def check_psi_nega(law, profile, grid=2000):
    """Whether phi(t) < t**(ln delta_hat / ln gamma_hat) on all of (1, gamma_hat)."""
    return psi_nega_margin(law, profile, grid) < 0.0


def psi_nega_margin(law, profile, grid=2000):
    """Max over a fine grid of phi(t) - t**(ln delta_hat / ln gamma_hat);
    negative means the refined counting circle is available."""
    from .drift import phi_eval

    expo = math.log(profile.delta_hat) / math.log(profile.gamma_hat)
    ts = np.linspace(1.0, profile.gamma_hat, grid + 2)[1:-1]
    return float(np.max(phi_eval(law, ts) - ts ** expo))


def count_inside_tau(model, profile, lam):
    """Inside-root count against the tau-refined circle gamma_hat**tau(lam)."""
    t = tau(lam, profile)
    radius = profile.gamma_hat ** t
    try:
        return count_inside(model, profile, lam, circle=radius).N
    except RootOnCircle as exc:
        raise RootOnTauCircle(str(exc)) from exc


def growth_bound(lam, p_order, delta):
    """Admissible growth envelope of a generalized eigenfunction at lam:
    (exponent on V, power on 1 + ln V)."""
    if p_order < 1:
        raise LambdaOutOfRange("p_order must be a positive integer")
    r = abs(lam)
    if not (delta <= r <= 1.0):
        raise LambdaOutOfRange(f"|lambda|={r:.6g} outside [{delta:.6g}, 1]")
    exponent = 0.0 if r == 1.0 else math.log(r) / math.log(delta)
    return exponent, p_order * (p_order - 1) / 2.0

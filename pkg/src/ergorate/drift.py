"""Drift profile of an increment law.

phi(t) = sum a_k t**k is the Laurent generating function of the jumps.  Under
a strictly negative mean increment it dips below 1 on an interval (1, gamma0),
attains its minimum delta_hat < 1 at gamma_hat, and delta_hat is the essential
spectral radius of the walk on the gamma_hat-weighted space.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NeriViolated, NonConvergence, NonPositiveArgument, PhiNotContracting

T_TOL = 1e-12  # absolute tolerance in t for gamma0 and gamma_hat


def phi_eval(law, t):
    """phi(t) = sum_k a_k t**k over k in [-g, d]."""
    if np.any(np.asarray(t) <= 0):
        raise NonPositiveArgument("phi is defined for t > 0 only")
    t = np.asarray(t, dtype=float)
    ks = np.arange(-law.g, law.d + 1)
    val = np.sum(law.a * t[..., None] ** ks, axis=-1)
    return float(val) if val.ndim == 0 else val


def phi_prime(law, t):
    if t <= 0:
        raise NonPositiveArgument("phi' is defined for t > 0 only")
    ks = np.arange(-law.g, law.d + 1)
    return float(np.sum(law.a * ks * t ** (ks - 1)))


def _phi_second(law, t):
    ks = np.arange(-law.g, law.d + 1)
    return float(np.sum(law.a * ks * (ks - 1) * t ** (ks - 2)))


def check_neri(law):
    """True iff the mean increment sum k*a_k is strictly negative."""
    return law.mean() < 0


@dataclass(frozen=True)
class DriftProfile:
    """Summary (gamma0, gamma_hat, delta_hat) of phi for one increment law."""

    gamma0: float
    gamma_hat: float
    delta_hat: float
    law: object

    @property
    def phi_coeffs(self):
        return self.law.a

    def phi(self, t):
        return phi_eval(self.law, t)


def compute_profile(law):
    """Locate gamma0 (second crossing of 1), gamma_hat (minimizer) and
    delta_hat = phi(gamma_hat), each to 1e-12 absolute in t."""
    if not check_neri(law):
        raise NeriViolated(f"mean increment {law.mean():.6g} is not negative")
    if law.a[0] <= 0 or law.a[-1] <= 0:
        raise NeriViolated("profile needs a_{-g} > 0 and a_d > 0")

    # bracket gamma0 by doubling, then bisect phi - 1
    hi = 2.0
    while phi_eval(law, hi) <= 1.0:
        hi *= 2.0
        if hi > 1e12:  # unreachable: a_d > 0 forces phi -> inf
            raise NonConvergence("phi never crossed 1 while doubling the bracket")
    lo = 1.0 + 1e-14
    while hi - lo > T_TOL:
        mid = 0.5 * (lo + hi)
        if phi_eval(law, mid) < 1.0:
            lo = mid
        else:
            hi = mid
    gamma0 = 0.5 * (lo + hi)

    # golden-section bracket of the minimizer, then Newton on phi'
    lo, hi = 1.0, gamma0
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    while hi - lo > 1e-8:
        if phi_eval(law, c) < phi_eval(law, d):
            hi = d
        else:
            lo = c
        c = hi - invphi * (hi - lo)
        d = lo + invphi * (hi - lo)
    gh = 0.5 * (lo + hi)
    for _ in range(60):
        step = phi_prime(law, gh) / _phi_second(law, gh)
        gh -= step
        if abs(step) < T_TOL * 1e-2:
            break
    return DriftProfile(gamma0=gamma0, gamma_hat=gh, delta_hat=phi_eval(law, gh), law=law)


def profile_at_gamma(law, gamma):
    """Working profile for an explicit weight base gamma in (1, gamma0).

    The full machinery runs on any such gamma; the annulus then opens at
    phi(gamma) instead of the optimal delta_hat.
    """
    base = compute_profile(law)
    if not (1.0 < gamma < base.gamma0):
        raise PhiNotContracting(
            f"gamma={gamma:.6g} outside the contracting interval (1, {base.gamma0:.6g})"
        )
    return DriftProfile(
        gamma0=base.gamma0, gamma_hat=float(gamma), delta_hat=phi_eval(law, gamma), law=law
    )


def ress_limit(limit_law, gamma):
    """Essential spectral radius phi(gamma) on the gamma-weighted space, for
    walks whose state-dependent increments converge to limit_law."""
    if gamma <= 1.0:
        raise PhiNotContracting("gamma must exceed 1")
    val = phi_eval(limit_law, gamma)
    if val >= 1.0:
        raise PhiNotContracting(f"phi(gamma) = {val:.6g} >= 1: no contraction at this gamma")
    return val

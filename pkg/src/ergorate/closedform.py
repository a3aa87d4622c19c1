"""Closed-form convergence rates for birth-death chains.

For the kernel P(0,0)=a, P(0,1)=1-a and interior steps (p, r, q) with
p > q > 0, the rate on the sqrt(p/q)-weighted space is piecewise explicit in
a; this module is the oracle the elimination pipeline is tested against.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import rwmodel
from .errors import DegenerateA, ParamsInvalid


@dataclass(frozen=True)
class BirthDeathParams:
    p: float
    q: float
    r: float
    a: float

    def __post_init__(self):
        if abs(self.p + self.q + self.r - 1.0) > 1e-12:
            raise ParamsInvalid(f"p+q+r = {self.p + self.q + self.r!r}, expected 1")
        if not (self.p > self.q > 0.0):
            raise ParamsInvalid("need p > q > 0")
        if self.r < 0.0:
            raise ParamsInvalid("need r >= 0")
        if not (0.0 < self.a < 1.0):
            raise ParamsInvalid("need a in (0, 1)")

    @property
    def a0(self):
        """First threshold 1 - q - sqrt(pq); above it the inside root escapes."""
        return 1.0 - self.q - math.sqrt(self.p * self.q)

    @property
    def a1(self):
        """Second threshold p - sqrt(pq) - sqrt(r (r + 2 sqrt(pq)))."""
        s = math.sqrt(self.p * self.q)
        return self.p - s - math.sqrt(self.r * (self.r + 2.0 * s))

    @property
    def delta_hat(self):
        return self.r + 2.0 * math.sqrt(self.p * self.q)


def bd_case(params):
    """Which branch of the rate formula applies at these parameters."""
    a, a0 = params.a, params.a0
    if a > a0:
        return "outside"
    if 2.0 * params.p <= (1.0 - params.q + math.sqrt(params.p * params.q)) ** 2:
        return "inside-small-p"
    if a <= params.a1:
        return "inside-eigen"
    return "inside-between"


def bd_rate(params):
    """Exact rate: delta_hat except on (0, a1] with 2p large, where the
    boundary eigenvalue |a + p(1-a)/(a-1+q)| takes over."""
    case = bd_case(params)
    if case == "inside-eigen":
        return abs(params.a + params.p * (1.0 - params.a) / (params.a - 1.0 + params.q))
    return params.delta_hat


def bd_lambda_z(params):
    """The nontrivial eliminant root lambda(a) and its characteristic root
    z(a), plus whether z(a) is inside the classification circle.

    |z(a)| <= gamma_hat is equivalent to |a - 1 + q| >= sqrt(pq).
    """
    if abs(params.a - (1.0 - params.q)) < 1e-14:
        raise DegenerateA("a = 1 - q: the eliminant's only root is lambda = 1")
    lam = params.a + params.p * (1.0 - params.a) / (params.a - 1.0 + params.q)
    z = params.p / (params.a + params.q - 1.0)
    inside = abs(params.a - 1.0 + params.q) >= math.sqrt(params.p * params.q)
    return lam, z, inside


def bd_model(params):
    """The equivalent two-sided random-walk model (g = d = c = 1)."""
    law = rwmodel.IncrementLaw(1, 1, np.array([params.p, params.r, params.q]))
    rows = rwmodel.BoundaryRows(np.array([[params.a, 1.0 - params.a]]), 1)
    return rwmodel.RandomWalkModel(law, rows)

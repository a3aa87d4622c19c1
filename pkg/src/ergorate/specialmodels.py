"""Two unbounded-increment walks with hand-checkable spectral facts.

Unbounded rows are stored as parameterized families (finite lists or
geometric tails) so that gamma-weighted moments stay decidable in closed
form.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GammaOutOfRange, MomentDiverges, ParamsInvalid


@dataclass(frozen=True)
class GeometricTail:
    """q_n = total * (1-theta) * theta**(n-start) for n >= start."""

    theta: float
    total: float = 1.0
    start: int = 1

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise ParamsInvalid("geometric ratio must lie in (0, 1)")
        if self.total <= 0.0:
            raise ParamsInvalid("total mass must be positive")

    def term(self, n):
        if n < self.start:
            return 0.0
        return self.total * (1.0 - self.theta) * self.theta ** (n - self.start)

    def mass(self):
        return self.total

    def moment(self, gamma):
        """sum_n q_n gamma**n; diverges unless theta * gamma < 1."""
        if self.theta * gamma >= 1.0:
            raise MomentDiverges(
                f"theta*gamma = {self.theta * gamma:.6g} >= 1: weighted mass diverges"
            )
        return (
            self.total * (1.0 - self.theta) * gamma ** self.start
            / (1.0 - self.theta * gamma)
        )


@dataclass(frozen=True)
class FiniteRow:
    """Finite-support row starting at index `start`."""

    weights: tuple
    start: int = 1

    def term(self, n):
        k = n - self.start
        return float(self.weights[k]) if 0 <= k < len(self.weights) else 0.0

    def mass(self):
        return float(sum(self.weights))

    def moment(self, gamma):
        return float(sum(w * gamma ** (self.start + k) for k, w in enumerate(self.weights)))


@dataclass(frozen=True)
class SpeksmaModel:
    """P(0, n) = q_n (n >= 1); P(n, 0) = p, P(n, n+1) = 1 - p for n >= 1."""

    p: float
    boundary_row: object  # family with term/mass/moment

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ParamsInvalid("p must lie in (0, 1)")
        if abs(self.boundary_row.mass() - 1.0) > 1e-12:
            raise ParamsInvalid("boundary row must have total mass 1")

    @property
    def q(self):
        return 1.0 - self.p


@dataclass(frozen=True)
class RosenModel:
    """P(0, n) = pi_n; P(n, 0) = pi_0 and P(n, n) = 1 - pi_0 for n >= 1."""

    pi0: float
    tail: object  # family for pi_n, n >= 1, with mass 1 - pi0

    def __post_init__(self):
        if not (0.0 < self.pi0 < 1.0):
            raise ParamsInvalid("pi0 must lie in (0, 1)")
        if abs(self.tail.mass() - (1.0 - self.pi0)) > 1e-12:
            raise ParamsInvalid("tail mass must equal 1 - pi0")

    def pi(self, n):
        return self.pi0 if n == 0 else self.tail.term(n)


def rosenthal_instance(theta=0.5):
    """pi_0 = 1/2 with a geometric tail carrying the remaining mass."""
    return RosenModel(0.5, GeometricTail(theta=theta, total=0.5))


def _row_family_from(doc):
    kind = doc.get("type")
    if kind == "geometric":
        return GeometricTail(
            theta=float(doc["theta"]),
            total=float(doc.get("total", 1.0)),
            start=int(doc.get("start", 1)),
        )
    if kind == "finite":
        return FiniteRow(
            tuple(float(x) for x in doc["weights"]), start=int(doc.get("start", 1))
        )
    raise ParamsInvalid(f"unknown row family {kind!r}")


def family_from_dict(doc):
    """Build a special model from its JSON document ("family" entries)."""
    kind = doc.get("family")
    if kind == "speksma":
        return SpeksmaModel(float(doc["p"]), _row_family_from(doc["boundary"]))
    if kind == "rosen":
        return RosenModel(float(doc["pi0"]), _row_family_from(doc["tail"]))
    raise ParamsInvalid(f"unknown family {kind!r}")


def speksma_bound(model, gamma):
    """(rate bound max(q*gamma, p), essential-radius bound q*gamma).

    Requires gamma in (1, 1/q) and a finite gamma-moment of the boundary row.
    """
    q = model.q
    if not (1.0 < gamma < 1.0 / q):
        raise GammaOutOfRange(f"gamma must lie in (1, {1.0 / q:.6g})")
    model.boundary_row.moment(gamma)  # raises MomentDiverges if infinite
    return max(q * gamma, model.p), q * gamma


def speksma_eigencheck(model, nrows=200):
    """Residual of the exact eigenpair lambda = -p, f = (1, -p, -p, ...).

    Row 0 uses the family's closed-form mass, all other rows are evaluated
    directly; the identity is algebraic so the residual is at machine zero.
    """
    p, q = model.p, model.q
    lam = -p
    resid = abs(model.boundary_row.mass() * (-p) - lam * 1.0)
    for n in range(1, nrows + 1):
        fn = -p
        fnext = -p
        lhs = p * 1.0 + q * fnext
        resid = max(resid, abs(lhs - lam * fn))
    return resid


def speksma_truncation(model, N, gamma):
    """gamma-weighted N x N truncation W(i, j) = gamma**(j-i) P(i, j)."""
    W = np.zeros((N, N))
    for n in range(1, N):
        W[n, 0] = model.p * gamma ** (-n)
        if n + 1 < N:
            W[n, n + 1] = model.q * gamma
    for n in range(1, N):
        W[0, n] = model.boundary_row.term(n) * gamma ** n
    return W


def rosen_rate(model, gamma):
    """(rate bound 1 - pi0, point spectrum {0, 1} in the relevant region).

    gamma plays the role of the weight base V(n) = gamma**n; the invariant
    distribution must have a finite gamma-moment.
    """
    if gamma <= 1.0:
        raise GammaOutOfRange("gamma must exceed 1")
    model.tail.moment(gamma)  # raises MomentDiverges if infinite
    return 1.0 - model.pi0, {0.0, 1.0}


def rosen_truncation(model, N, gamma):
    W = np.zeros((N, N))
    W[0, 0] = model.pi0
    for n in range(1, N):
        W[0, n] = model.pi(n) * gamma ** n
        W[n, 0] = model.pi0 * gamma ** (-n)
        W[n, n] = 1.0 - model.pi0
    return W


def rosen_eigencheck(model, lam, nrows=200):
    """Residual of the closed-form eigenvector f(n) = pi0 f(0)/(lam-1+pi0)
    for lam in {0, 1}; checks the defining row identities."""
    pi0 = model.pi0
    denom = lam - 1.0 + pi0
    if abs(denom) < 1e-14:
        raise ParamsInvalid("lambda = 1 - pi0 is the degenerate direction")
    f0 = 1.0
    fn = pi0 * f0 / denom
    resid = abs(pi0 * f0 + (1.0 - pi0) * fn - lam * fn)
    row0 = model.pi0 * f0 + sum(model.pi(n) * fn for n in range(1, nrows + 1))
    tail_mass_beyond = (1.0 - pi0) - sum(model.pi(n) for n in range(1, nrows + 1))
    row0 += tail_mass_beyond * fn  # closed-form remainder of the series
    resid = max(resid, abs(row0 - lam * f0))
    return resid

"""Random walks on the nonnegative integers with bounded i.d. increments.

A model is an increment law (a_{-g}, ..., a_d) governing rows i >= g of the
transition kernel, plus g explicit boundary rows supported on [0..c].  The
JSON schema shared with the CLI is::

    {"g": int, "d": int, "a": [a_{-g}, ..., a_d], "boundary": [[row0], ...], "c": int}
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelInvalid


def seq_pow(z, k, n):
    """Basis sequence value: z^(1)(n) = z**n and, for k >= 2,
    z^(k)(n) = n(n-1)...(n-k+2) * z**(n-k+1)."""
    if k == 1:
        return z ** n
    ff = 1.0
    for t in range(k - 1):
        ff *= n - t
    if ff == 0:
        return 0j
    return ff * z ** (n - k + 1)


@dataclass(frozen=True)
class IncrementLaw:
    """Common jump distribution away from the boundary: a[k] = P(jump = k-g)."""

    g: int
    d: int
    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).ravel())
        if self.a.size != self.g + self.d + 1:
            raise ModelInvalid(
                f"law needs g+d+1 = {self.g + self.d + 1} entries, got {self.a.size}"
            )

    def prob(self, k):
        """Probability of a jump of size k, k in [-g, d]."""
        return float(self.a[k + self.g])

    def mean(self):
        return float(np.dot(np.arange(-self.g, self.d + 1), self.a))

    def violations(self):
        out = []
        if self.g < 1:
            out.append("g must be a positive integer")
        if self.d < 1:
            out.append("d must be a positive integer")
        if abs(self.a.sum() - 1.0) > 1e-12:
            out.append(f"increment law sums to {self.a.sum()!r}, expected 1")
        if np.any(self.a < 0) or np.any(self.a > 1):
            out.append("increment probabilities must lie in [0, 1]")
        if self.a[0] <= 0:
            out.append("a_{-g} must be positive")
        if self.a[-1] <= 0:
            out.append("a_d must be positive")
        return out


@dataclass(frozen=True)
class BoundaryRows:
    """Explicit transition rows P(i, .) for i = 0..g-1, supported on [0..c]."""

    rows: np.ndarray
    c: int

    def __post_init__(self):
        object.__setattr__(self, "rows", np.atleast_2d(np.asarray(self.rows, dtype=float)))
        if self.rows.shape[1] != self.c + 1:
            raise ModelInvalid(
                f"boundary rows need c+1 = {self.c + 1} columns, got {self.rows.shape[1]}"
            )

    def violations(self):
        out = []
        if self.c < 1:
            out.append("c must be a positive integer")
        for i, row in enumerate(self.rows):
            s = row.sum()
            if abs(s - 1.0) > 1e-12:
                out.append(f"row {i} sums to {s:.12g}")
            if np.any(row < 0) or np.any(row > 1):
                out.append(f"row {i} has entries outside [0, 1]")
        return out


@dataclass(frozen=True)
class RandomWalkModel:
    law: IncrementLaw
    boundary: BoundaryRows

    @property
    def g(self):
        return self.law.g

    @property
    def d(self):
        return self.law.d

    @property
    def c(self):
        return self.boundary.c

    def prob(self, i, j):
        """Transition probability P(i, j)."""
        if i < 0 or j < 0:
            raise IndexError("states are nonnegative")
        if i < self.g:
            return float(self.boundary.rows[i, j]) if j <= self.c else 0.0
        k = j - i
        if -self.g <= k <= self.d:
            return self.law.prob(k)
        return 0.0

    def row_support(self, i):
        """Indices j with P(i, j) possibly nonzero."""
        if i < self.g:
            return range(0, self.c + 1)
        return range(i - self.g, i + self.d + 1)


@dataclass(frozen=True)
class SequenceAnsatz:
    """Finite combination f = sum alpha * z^(k) of basis sequences."""

    terms: tuple = field(default_factory=tuple)  # (z, k, alpha) triples

    def value(self, n):
        return sum(alpha * seq_pow(z, k, n) for z, k, alpha in self.terms)

    def values(self, upto):
        return np.array([self.value(n) for n in range(upto)], dtype=complex)


def _f_at(f, n):
    if isinstance(f, SequenceAnsatz):
        return complex(f.value(n))
    return complex(f[n])


def apply_P(model, f, i):
    """(Pf)(i): one application of the transition operator at state i.

    f may be a SequenceAnsatz or any indexable sequence long enough to cover
    the support of row i.
    """
    if i < 0:
        raise IndexError("state index must be nonnegative")
    if i < model.g:
        row = model.boundary.rows[i]
        return complex(sum(row[j] * _f_at(f, j) for j in range(model.c + 1)))
    acc = 0j
    for k in range(-model.g, model.d + 1):
        p = model.law.prob(k)
        if p:
            acc += p * _f_at(f, i + k)
    return complex(acc)


def _graph_check(model, cap=None):
    """Strong connectivity and aperiodicity of the truncated transition graph.

    States >= cap are collapsed onto the node `cap`; the homogeneous tail
    makes the quotient faithful for this bounded-increment structure.
    """
    if cap is None:
        cap = model.g + model.d + model.c + 2
    nstates = cap + 1
    adj = [[] for _ in range(nstates)]
    radj = [[] for _ in range(nstates)]
    for i in range(nstates):
        for j in model.row_support(i):
            if model.prob(i, j) > 0:
                t = min(j, cap)
                if t not in adj[i]:
                    adj[i].append(t)
                    radj[t].append(i)

    def reach(start, edges):
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in edges[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    strongly_connected = len(reach(0, adj)) == nstates and len(reach(0, radj)) == nstates
    if not strongly_connected:
        return False, False
    # period = gcd over edges of (level[u] + 1 - level[v]) on a BFS tree
    from math import gcd

    level = [-1] * nstates
    level[0] = 0
    queue = [0]
    while queue:
        u = queue.pop(0)
        for v in adj[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    period = 0
    for u in range(nstates):
        for v in adj[u]:
            period = gcd(period, level[u] + 1 - level[v])
    return True, abs(period) == 1


def validate(model):
    """Collect every violated invariant as a human-readable string.

    Empty list means: probabilities well-formed, NERI holds, and the truncated
    transition graph is strongly connected and aperiodic.
    """
    out = []
    out.extend(model.law.violations())
    out.extend(model.boundary.violations())
    if model.boundary.rows.shape[0] != model.g:
        out.append(
            f"expected {model.g} boundary rows, got {model.boundary.rows.shape[0]}"
        )
    if out:
        return out
    from . import drift

    if not drift.check_neri(model.law):
        out.append("mean increment is nonnegative (NERI fails)")
    irreducible, aperiodic = _graph_check(model)
    if not irreducible:
        out.append("truncated transition graph is not strongly connected")
    elif not aperiodic:
        out.append("truncated transition graph is periodic")
    return out


def model_from_dict(doc):
    try:
        g = int(doc["g"])
        d = int(doc["d"])
        a = np.asarray(doc["a"], dtype=float)
        rows = np.asarray(doc["boundary"], dtype=float)
        c = int(doc["c"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelInvalid(f"malformed model document: {exc}") from exc
    if not np.all(np.isfinite(a)) or not np.all(np.isfinite(rows)):
        raise ModelInvalid("model contains non-finite numbers")
    return RandomWalkModel(IncrementLaw(g, d, a), BoundaryRows(rows, c))


def model_to_dict(model):
    return {
        "g": model.g,
        "d": model.d,
        "a": [float(x) for x in model.law.a],
        "boundary": [[float(x) for x in row] for row in model.boundary.rows],
        "c": model.c,
    }


def load_model(path):
    with open(path) as fh:
        doc = json.load(fh)
    return model_from_dict(doc)

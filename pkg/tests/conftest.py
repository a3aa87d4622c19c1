import numpy as np
import pytest

from ergorate import rwmodel
from ergorate.rwmodel import BoundaryRows, IncrementLaw, RandomWalkModel


def random_neri_law(rng, gmax=3, dmax=3):
    """Random increment law with strictly negative mean and positive ends."""
    g = int(rng.integers(1, gmax + 1))
    d = int(rng.integers(1, dmax + 1))
    a = rng.random(g + d + 1) + 1e-3
    a /= a.sum()
    for _ in range(200):
        law = IncrementLaw(g, d, a)
        if law.mean() < -1e-2:
            return law
        shift = a[g + 1 :] * 0.3  # move upward mass onto the largest down-jump
        a = a.copy()
        a[g + 1 :] -= shift
        a[0] += shift.sum()
    raise AssertionError("could not draw a NERI law")


def random_model(rng, gmax=3, dmax=3):
    """Random valid model: NERI law plus full-support boundary rows."""
    law = random_neri_law(rng, gmax, dmax)
    c = law.g + law.d
    rows = rng.random((law.g, c + 1)) + 0.05
    rows /= rows.sum(axis=1, keepdims=True)
    model = RandomWalkModel(law, BoundaryRows(rows, c))
    assert rwmodel.validate(model) == []
    return model


def two_step_model(a, b):
    """The g=2, d=1 reference walk with boundary probabilities (a, b)."""
    law = IncrementLaw(2, 1, np.array([0.5, 1.0 / 3.0, 0.0, 1.0 / 6.0]))
    rows = BoundaryRows(np.array([[a, 1 - a, 0.0], [b, 0.0, 1 - b]]), 2)
    return RandomWalkModel(law, rows)


def winding_count(coeffs, radius, samples=200_000):
    """Zeros of an ascending-coefficient polynomial inside |z| = radius,
    by the argument principle on a dense circle sampling."""
    th = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    z = radius * np.exp(1j * th)
    vals = np.polyval(np.asarray(coeffs, complex)[::-1], z)
    args = np.angle(vals)
    d = np.diff(np.concatenate([args, args[:1]]))
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    return int(round(d.sum() / (2.0 * np.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

import math

import numpy as np
import pytest

from ergorate import drift, spectrum
from ergorate.errors import InconsistentCount, LambdaOutOfRange, RootOnCircle
from ergorate.rwmodel import BoundaryRows, IncrementLaw, RandomWalkModel

from conftest import random_model, two_step_model, winding_count


def _bd_model(p, r, q, a):
    return RandomWalkModel(
        IncrementLaw(1, 1, np.array([p, r, q])),
        BoundaryRows(np.array([[a, 1 - a]]), 1),
    )


def test_char_poly_birth_death():
    model = _bd_model(0.6, 0.15, 0.25, 0.3)
    lam = 0.7 + 0.1j
    p = spectrum.char_poly(model, lam)
    assert np.allclose(p.coeffs, [0.6, 0.15 - lam, 0.25])


def test_char_poly_two_step():
    model = two_step_model(0.5, 0.5)
    lam = 0.8
    p = spectrum.char_poly(model, lam)
    assert np.allclose(p.coeffs, [0.5, 1 / 3, -0.8, 1 / 6])
    assert p(0) == pytest.approx(0.5)  # E(0) = a_{-g} > 0


def test_one_is_root_at_lambda_one(rng):
    model = random_model(rng)
    p = spectrum.char_poly(model, 1.0)
    assert abs(p(1.0)) < 1e-12


def test_count_inside_birth_death():
    model = _bd_model(0.6, 0.15, 0.25, 0.3)
    prof = drift.compute_profile(model.law)
    lam = 0.5 * (prof.delta_hat + 1.0)
    rep = spectrum.count_inside(model, prof, lam)
    assert rep.N == 1
    assert rep.min_circle_gap > 1e-8 * prof.gamma_hat
    assert rep.roots_inside.total_multiplicity + rep.roots_outside.total_multiplicity == 2


def test_count_inside_two_step():
    model = two_step_model(0.5, 0.5)
    prof = drift.compute_profile(model.law)
    rep = spectrum.count_inside(model, prof, 0.8)
    assert rep.N == 2
    assert winding_count(spectrum.char_poly(model, 0.8).coeffs, prof.gamma_hat) == 2


def test_real_lambda_has_inside_root(rng):
    model = random_model(rng)
    prof = drift.compute_profile(model.law)
    for lam in np.linspace(prof.delta_hat + 1e-3, 1 - 1e-3, 7):
        assert spectrum.count_inside(model, prof, lam).N >= 1


def test_root_on_circle_detected():
    # at real lambda = delta_hat, z = gamma_hat is itself a characteristic root
    model = _bd_model(0.6, 0.15, 0.25, 0.3)
    prof = drift.compute_profile(model.law)
    with pytest.raises(RootOnCircle):
        spectrum.count_inside(model, prof, prof.delta_hat)


def test_eta_reference_models():
    bd = _bd_model(0.6, 0.15, 0.25, 0.3)
    prof = drift.compute_profile(bd.law)
    assert spectrum.eta(bd, prof, samples=100) == 1
    ts = two_step_model(0.1, 0.1)
    prof2 = drift.compute_profile(ts.law)
    assert spectrum.eta(ts, prof2, samples=100) == 2


def test_eta_constant_for_spread_law():
    law = IncrementLaw(1, 2, np.array([0.7, 0.0, 0.2, 0.1]))
    model = RandomWalkModel(law, BoundaryRows(np.array([[0.5, 0.3, 0.2]]), 2))
    prof = drift.compute_profile(law)
    assert spectrum.eta(model, prof, samples=200) == 1


def test_no_root_near_circle_across_samples(rng):
    for _ in range(10):
        model = random_model(rng)
        prof = drift.compute_profile(model.law)
        for lam in spectrum.annulus_samples(prof, 50):
            rep = spectrum.count_inside(model, prof, lam)
            assert rep.min_circle_gap >= 1e-8 * prof.gamma_hat


def test_annulus_samples_deterministic():
    model = two_step_model(0.5, 0.5)
    prof = drift.compute_profile(model.law)
    a = spectrum.annulus_samples(prof, 32, seed=3)
    b = spectrum.annulus_samples(prof, 32, seed=3)
    c = spectrum.annulus_samples(prof, 32, seed=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all((np.abs(a) > prof.delta_hat) & (np.abs(a) < 1.0))


def test_tau_limits():
    model = two_step_model(0.5, 0.5)
    prof = drift.compute_profile(model.law)
    assert spectrum.tau(prof.delta_hat, prof) == pytest.approx(1.0, abs=1e-12)
    assert spectrum.tau(1.0, prof) == 0.0
    assert spectrum.tau(0.999999, prof) == pytest.approx(0.0, abs=1e-5)
    with pytest.raises(LambdaOutOfRange):
        spectrum.tau(0.1, prof)


def test_psi_nega_and_refined_count():
    # the birth-death law satisfies the refined-circle condition comfortably
    law = IncrementLaw(1, 1, np.array([0.7, 0.0, 0.3]))
    model = RandomWalkModel(law, BoundaryRows(np.array([[0.1, 0.9]]), 1))
    prof = drift.compute_profile(law)
    assert spectrum.check_psi_nega(law, prof)
    assert spectrum.psi_nega_margin(law, prof) < 0
    for lam in np.linspace(prof.delta_hat + 1e-3, 1 - 1e-3, 5):
        assert spectrum.count_inside_tau(model, prof, lam) >= 1


def test_growth_bound():
    assert spectrum.growth_bound(1.0, 1, 0.6) == (0.0, 0.0)
    assert spectrum.growth_bound(0.6, 1, 0.6) == (pytest.approx(1.0), 0.0)
    assert spectrum.growth_bound(0.8, 3, 0.6)[1] == 3.0
    with pytest.raises(LambdaOutOfRange):
        spectrum.growth_bound(0.2, 1, 0.6)
    with pytest.raises(LambdaOutOfRange):
        spectrum.growth_bound(0.8, 0, 0.6)


def test_annulus_type():
    ann = spectrum.Annulus(inner=0.6)
    assert ann.contains(0.8)
    assert not ann.contains(0.6)
    assert not ann.contains(1.0)
    with pytest.raises(LambdaOutOfRange):
        spectrum.Annulus(inner=1.5)

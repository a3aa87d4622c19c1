import math

import numpy as np
import pytest

from ergorate import closedform
from ergorate.closedform import BirthDeathParams, bd_case, bd_lambda_z, bd_model, bd_rate
from ergorate.errors import DegenerateA, ParamsInvalid


def test_params_validation():
    with pytest.raises(ParamsInvalid):
        BirthDeathParams(p=0.3, q=0.4, r=0.3, a=0.5)  # p < q
    with pytest.raises(ParamsInvalid):
        BirthDeathParams(p=0.5, q=0.2, r=0.2, a=0.5)  # sums to 0.9
    with pytest.raises(ParamsInvalid):
        BirthDeathParams(p=0.6, q=0.4, r=0.0, a=1.0)  # a on the boundary


def test_rate_outside_threshold(rng):
    for _ in range(10):
        p = rng.uniform(0.4, 0.8)
        q = rng.uniform(0.05, min(p - 0.05, 0.95 - p))
        r = 1 - p - q
        params = BirthDeathParams(p=p, q=q, r=r, a=rng.uniform(max(0.0, 1 - q - math.sqrt(p * q)) + 0.01, 0.99))
        assert bd_case(params) == "outside"
        assert bd_rate(params) == pytest.approx(r + 2 * math.sqrt(p * q))


def test_rate_r_zero_specialization():
    p, q, a = 0.7, 0.3, 0.1
    params = BirthDeathParams(p=p, q=q, r=0.0, a=a)
    assert params.a0 == pytest.approx(p - math.sqrt(p * q))
    assert bd_rate(params) == pytest.approx((p * q + (a - p) ** 2) / abs(a - p))
    assert bd_rate(params) == pytest.approx(0.95)


def test_lambda_z_values():
    params = BirthDeathParams(p=0.7, q=0.3, r=0.0, a=0.1)
    lam, z, inside = bd_lambda_z(params)
    assert lam == pytest.approx(-0.95)
    assert z == pytest.approx(-7 / 6)
    assert inside  # |z| = 1.1667 < gamma_hat = sqrt(7/3)


def test_lambda_z_degenerate():
    params = BirthDeathParams(p=0.6, q=0.25, r=0.15, a=0.75)  # a = 1 - q
    with pytest.raises(DegenerateA):
        bd_lambda_z(params)


def test_inside_outside_classification_boundary():
    # |z(a)| <= gamma_hat iff |a - 1 + q| >= sqrt(pq); check near a0
    p, q, r = 0.6, 0.2, 0.2
    a0 = 1 - q - math.sqrt(p * q)
    for a, want in [(a0 - 1e-3, True), (a0 + 1e-3, False)]:
        params = BirthDeathParams(p=p, q=q, r=r, a=a)
        _, z, inside = bd_lambda_z(params)
        assert inside is want
        gamma_hat = math.sqrt(p / q)
        assert (abs(z) <= gamma_hat) is want


def test_lambda_monotone_below_a0(rng):
    p, q, r = 0.75, 0.1, 0.15
    a0 = 1 - q - math.sqrt(p * q)
    grid = np.linspace(0.01, a0 - 1e-3, 20)
    vals = []
    for a in grid:
        lam, _, _ = bd_lambda_z(BirthDeathParams(p=p, q=q, r=r, a=float(a)))
        vals.append(lam)
    assert np.all(np.diff(vals) > 0)


def test_branch_consistency_at_a1():
    # both branches give the same value where they meet
    p, q, r = 0.8, 0.1, 0.1
    params_probe = BirthDeathParams(p=p, q=q, r=r, a=0.5)
    a1 = params_probe.a1
    assert a1 > 0
    lam, _, _ = bd_lambda_z(BirthDeathParams(p=p, q=q, r=r, a=a1))
    assert abs(lam) == pytest.approx(r + 2 * math.sqrt(p * q), abs=1e-10)


def test_rate_floor(rng):
    # the rate never drops below the essential radius, with equality
    # everywhere except the small-a eigenvalue branch
    for _ in range(40):
        p = rng.uniform(0.35, 0.85)
        q = rng.uniform(0.02, min(p - 0.03, 0.97 - p))
        r = 1 - p - q
        a = rng.uniform(0.01, 0.99)
        params = BirthDeathParams(p=p, q=q, r=r, a=a)
        value = bd_rate(params)
        assert value >= params.delta_hat - 1e-14
        if bd_case(params) != "inside-eigen":
            assert value == pytest.approx(params.delta_hat)
        else:
            assert value > params.delta_hat


def test_bd_model_shape():
    params = BirthDeathParams(p=0.6, q=0.25, r=0.15, a=0.4)
    model = bd_model(params)
    assert model.g == model.d == model.c == 1
    assert model.prob(0, 0) == 0.4
    assert model.prob(3, 2) == 0.6

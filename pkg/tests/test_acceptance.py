"""End-to-end acceptance gate.

One test per criterion; each prints a PASS/FAIL line so the suite doubles as
a report.  Tolerances are fixed here and nowhere else.
"""

import math
import time

import numpy as np
import pytest

from ergorate import (
    closedform,
    drift,
    eliminate,
    oracle,
    polycalc,
    spectrum,
    specialmodels as sm,
)
from ergorate.closedform import BirthDeathParams, bd_model, bd_rate
from ergorate.polycalc import ComplexPoly, LambdaPoly

from conftest import random_model, two_step_model

TABLE = {
    (0.5, 0.5): {
        "lambda11": [-0.625 + 0.466j, -0.625 - 0.466j, -0.798, 0.804],
        "Z": [],
        "rho": 0.621,
    },
    (0.1, 0.1): {
        "lambda11": [
            -0.681 + 0.610j, -0.681 - 0.610j,
            -0.466 + 0.506j, -0.466 - 0.506j,
            -0.384 + 0.555j, -0.384 - 0.555j,
        ],
        "Z": [-0.466 + 0.506j, -0.466 - 0.506j],
        "rho": 0.688,
    },
    (0.02, 0.02): {
        "lambda11": [
            -0.598 + 0.614j, -0.598 - 0.614j,
            -0.383 + 0.542j, -0.383 - 0.542j,
            -0.493 + 0.574j, -0.493 - 0.574j,
            -0.477 + 0.584j, -0.477 - 0.584j,
            0.994,
        ],
        "Z": [-0.493 + 0.574j, -0.493 - 0.574j],
        "rho": 0.757,
    },
}


def _verdict(num, name, ok, detail=""):
    print(f"ACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} {detail}", flush=True)
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _covered(listed, computed, tol):
    """Every listed value has a computed match within tol per coordinate."""
    for want in listed:
        if not any(
            abs(want.real - got.real) <= tol and abs(want.imag - got.imag) <= tol
            for got in computed
        ):
            return False, want
    return True, None


def _sets_equal(aa, bb, tol):
    if len(aa) != len(bb):
        return False
    used = [False] * len(bb)
    for a in aa:
        hit = False
        for i, b in enumerate(bb):
            if not used[i] and abs(a.real - b.real) <= tol and abs(a.imag - b.imag) <= tol:
                used[i] = hit = True
                break
        if not hit:
            return False
    return True


def test_criterion_1_table_reproduction():
    t0 = time.time()
    ok, detail = True, ""
    for (a, b), want in TABLE.items():
        rep = eliminate.rate(two_step_model(a, b))
        if abs(rep.rho_hat - want["rho"]) > 1e-3:
            ok, detail = False, f"rho mismatch at {(a, b)}: {rep.rho_hat}"
            break
        covered, missing = _covered(
            [complex(w) for w in want["lambda11"]], rep.lambda_sets[(1, 1)], 2e-3
        )
        if not covered:
            ok, detail = False, f"Lambda_(1,1) at {(a, b)} misses {missing}"
            break
        Z = [c.lam for c in rep.candidates]
        if not _sets_equal([complex(w) for w in want["Z"]], Z, 2e-3):
            ok, detail = False, f"Z mismatch at {(a, b)}: {Z}"
            break
        if rep.filtered_sets.get((2,), []) != []:
            ok, detail = False, f"Lambda'_(2) not empty at {(a, b)}"
            break
    elapsed = time.time() - t0
    if ok and elapsed >= 120:
        ok, detail = False, f"took {elapsed:.1f}s"
    _verdict(1, "table reproduction", ok, f"({elapsed:.1f}s)" if ok else detail)


def _sample_case(rng, case):
    """Draw birth-death parameters landing in the requested rate branch."""
    for _ in range(5000):
        if case in ("inside-eigen", "inside-between"):
            p = rng.uniform(0.6, 0.92)
            q = rng.uniform(0.02, min(0.25, p - 0.05, 0.98 - p))
        elif case == "inside-small-p":
            p = rng.uniform(0.15, 0.45)
            q = rng.uniform(0.02, min(p - 0.03, 0.98 - p))
        else:
            p = rng.uniform(0.3, 0.85)
            q = rng.uniform(0.02, min(p - 0.03, 0.98 - p))
        r = 1 - p - q
        if r < 0:
            continue
        s = math.sqrt(p * q)
        a0 = 1 - q - s
        big_p = 2 * p > (1 - q + s) ** 2
        if case == "outside":
            lo = max(a0, 0.0) + 1e-3
            if lo >= 0.99:
                continue
            a = rng.uniform(lo, 0.99)
        elif case == "inside-small-p":
            if big_p or a0 <= 0.02:
                continue
            a = rng.uniform(0.01, a0)
        else:
            if not big_p:
                continue
            a1 = p - s - math.sqrt(r * (r + 2 * s))
            if case == "inside-eigen":
                if a1 <= 0.02:
                    continue
                a = rng.uniform(0.01, a1)
            else:
                if a1 >= a0 - 1e-3:
                    continue
                a = rng.uniform(max(a1, 0.01), a0 - 1e-6)
        params = BirthDeathParams(p=p, q=q, r=r, a=float(a))
        if closedform.bd_case(params) == case:
            return params
    raise AssertionError(f"could not sample case {case}")


def test_criterion_2_birth_death_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(42)
    worst = 0.0
    n = 0
    for case in ("outside", "inside-small-p", "inside-eigen", "inside-between"):
        for _ in range(25):
            params = _sample_case(rng, case)
            rep = eliminate.rate(bd_model(params))
            diff = abs(rep.rho_hat - bd_rate(params))
            worst = max(worst, diff)
            n += 1
            assert not rep.disagreement, f"route disagreement at {params}"
    elapsed = time.time() - t0
    ok = worst <= 1e-8 and n >= 100 and elapsed < 300
    _verdict(2, "birth-death oracle equivalence", ok,
             f"({n} models, worst {worst:.2e}, {elapsed:.1f}s)")


def test_criterion_3_r_zero_specialization():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        p = rng.uniform(0.55, 0.9)
        q = 1 - p
        a = rng.uniform(0.02, 0.98)
        params = BirthDeathParams(p=p, q=q, r=0.0, a=a)
        a0 = p - math.sqrt(p * q)
        if a <= a0:
            want = (p * q + (a - p) ** 2) / abs(a - p)
        else:
            want = 2 * math.sqrt(p * q)
        rep = eliminate.rate(bd_model(params))
        worst = max(worst, abs(rep.rho_hat - want))
    _verdict(3, "r=0 specialization", worst <= 1e-8, f"(worst {worst:.2e})")


def test_criterion_4_resultant_identity():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(10):
        p = rng.uniform(0.35, 0.8)
        q = rng.uniform(0.05, min(p - 0.05, 0.95 - p))
        r = 1 - p - q
        a = rng.uniform(0.05, 0.95)
        p0 = LambdaPoly([ComplexPoly([a, -1.0]), ComplexPoly([1.0 - a])])
        e = LambdaPoly([ComplexPoly([p]), ComplexPoly([r, -1.0]), ComplexPoly([q])])
        res = polycalc.resultant_in_lambda(p0, e, degree_bound=3)
        target = np.convolve([1.0, -1.0], [-a * (1 - a - q) + p * (1 - a), 1 - a - q])
        got = res.coeffs / res.coeffs[-1]
        want = np.asarray(target, complex) / target[-1]
        assert got.size == want.size
        worst = max(worst, float(np.max(np.abs(got - want))))
    _verdict(4, "resultant identity", worst <= 1e-10, f"(worst {worst:.2e})")


def test_criterion_5_eta_constancy():
    rng = np.random.default_rng(99)
    checked = 0
    for _ in range(50):
        model = random_model(rng, gmax=3, dmax=3)
        prof = drift.compute_profile(model.law)
        counts = set()
        for lam in spectrum.annulus_samples(prof, 200):
            rep = spectrum.count_inside(model, prof, lam)
            counts.add(rep.N)
            assert rep.min_circle_gap >= 1e-8 * prof.gamma_hat
        assert len(counts) == 1, f"count varied: {counts}"
        checked += 1
    _verdict(5, "eta constancy", checked == 50, f"({checked} models x 200 samples)")


def test_criterion_6_tau_refinement():
    rng = np.random.default_rng(123)
    models = [two_step_model(0.1, 0.1),
              bd_model(BirthDeathParams(p=0.7, q=0.3, r=0.0, a=0.1)),
              bd_model(BirthDeathParams(p=0.8, q=0.1, r=0.1, a=0.15))]
    while len(models) < 10:
        models.append(random_model(rng, gmax=3, dmax=3))
    checked = eigen_checked = 0
    for model in models:
        prof = drift.compute_profile(model.law)
        if not spectrum.check_psi_nega(model.law, prof):
            continue
        eta_val = spectrum.eta(model, prof, samples=100)
        counts = {
            spectrum.count_inside_tau(model, prof, lam)
            for lam in spectrum.annulus_samples(prof, 200)
        }
        assert len(counts) == 1, f"refined count varied: {counts}"
        n_prime = counts.pop()
        assert n_prime <= eta_val
        checked += 1
        rep = eliminate.rate(model)
        for cand in rep.candidates:
            t = spectrum.tau(cand.lam, prof)
            bound = prof.gamma_hat ** t + 1e-6
            for z, _ in cand.inside_roots:
                assert abs(z) < bound, f"|z|={abs(z)} exceeds {bound}"
            eigen_checked += 1
    ok = checked >= 5 and eigen_checked >= 1
    _verdict(6, "tau refinement", ok,
             f"({checked} models, {eigen_checked} eigenpairs bounded)")


def test_criterion_7_oracle_cross_check():
    rng = np.random.default_rng(5)
    worst = 0.0
    cases = [two_step_model(a, b) for (a, b) in TABLE]
    for _ in range(10):
        p = rng.uniform(0.4, 0.85)
        q = rng.uniform(0.05, min(p - 0.05, 0.95 - p))
        cases.append(bd_model(BirthDeathParams(p=p, q=q, r=1 - p - q, a=rng.uniform(0.05, 0.95))))
    for model in cases:
        rep = eliminate.rate(model)
        est = oracle.empirical_rate(model, 400, rep.gamma_hat)
        worst = max(worst, abs(est - rep.rho_hat))
    _verdict(7, "truncated-operator cross-check", worst <= 0.05,
             f"({len(cases)} models, worst {worst:.3f})")


def test_criterion_8_unbounded_increment_models():
    model = sm.SpeksmaModel(0.6, sm.GeometricTail(theta=0.5))
    resid = sm.speksma_eigencheck(model, nrows=200)
    gamma = 1.5
    bound, _ = sm.speksma_bound(model, gamma)
    W = sm.speksma_truncation(model, 400, gamma)
    second = oracle.subdominant_modulus(W)
    ok1 = resid <= 1e-12 and second <= bound + 0.02

    rmodel = sm.rosenthal_instance()
    rbound, _ = sm.rosen_rate(rmodel, 1.5)
    R = sm.rosen_truncation(rmodel, 400, 1.5)
    moduli = np.sort(np.abs(np.linalg.eigvals(R)))[::-1]
    ok2 = (
        rbound == 0.5
        and abs(moduli[0] - 1.0) <= 0.02
        and moduli[1] <= 0.5 + 0.02
        and moduli[-1] <= 0.02
    )
    _verdict(8, "unbounded-increment examples", ok1 and ok2,
             f"(eigen residual {resid:.1e}, speksma 2nd {second:.3f} vs {bound + 0.02:.3f}, "
             f"rosen top {moduli[0]:.3f} / 2nd {moduli[1]:.3f})")


def test_criterion_9_route_agreement():
    rng = np.random.default_rng(31)
    models = [two_step_model(a, b) for (a, b) in TABLE]
    for case in ("outside", "inside-small-p", "inside-eigen", "inside-between"):
        for _ in range(5):
            models.append(bd_model(_sample_case(rng, case)))
    checked = verified = 0
    for model in models:
        rep = eliminate.rate(model, method="both")
        assert rep.method == "both"
        assert not rep.disagreement, "route disagreement"
        for cand in rep.candidates:
            assert set(cand.routes) == {"detector", "resultant"}, (
                f"eigenvalue {cand.lam} found by only {cand.routes}"
            )
            verified += 1
        checked += 1
    _verdict(9, "detector/eliminant agreement", True,
             f"({checked} models, {verified} eigenvalues matched by both routes)")

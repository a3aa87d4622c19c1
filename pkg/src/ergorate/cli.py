"""Command-line surface: load JSON models, run analyses, emit reports.

Exit codes: 0 success, 2 validation failure, 3 route disagreement,
4 numerical failure.  ERGORATE_SEED fixes the annulus sampling phase.
"""

import json
import sys

import click
import numpy as np

from . import closedform, eliminate, oracle, rwmodel, specialmodels, spectrum
from . import drift as drift_mod
from .errors import (
    DegreeBoundTooSmall,
    ErgorateError,
    InconsistentCount,
    ModelInvalid,
    NonConvergence,
    ParamsInvalid,
    RootOnCircle,
)

EXIT_VALIDATION = 2
EXIT_DISAGREEMENT = 3
EXIT_NUMERICAL = 4

_NUMERICAL = (NonConvergence, DegreeBoundTooSmall, InconsistentCount, RootOnCircle)


def _fmt(x):
    return f"{x:.6g}"


def _fmtc(z):
    z = complex(z)
    if abs(z.imag) < 5e-7:
        return f"{z.real:.6g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.6g}{sign}{abs(z.imag):.6g}i"


def _fold_conjugates(values, tol=2e-4):
    """Group conjugate pairs for compact printing."""
    vals = list(values)
    out = []
    used = [False] * len(vals)
    for i, z in enumerate(vals):
        if used[i]:
            continue
        if abs(z.imag) < 5e-7:
            out.append(f"{z.real:.3f}")
            used[i] = True
            continue
        mate = None
        for j in range(i + 1, len(vals)):
            if not used[j] and abs(vals[j] - np.conj(z)) <= tol * (1 + abs(z)):
                mate = j
                break
        if mate is not None:
            used[i] = used[mate] = True
            out.append(f"{z.real:.3f}±{abs(z.imag):.3f}i")
        else:
            used[i] = True
            out.append(_fmtc(z))
    return out


def _load(path):
    try:
        model = rwmodel.load_model(path)
    except (OSError, json.JSONDecodeError, ModelInvalid) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    return model


def _validated(path):
    model = _load(path)
    violations = rwmodel.validate(model)
    if violations:
        for v in violations:
            click.echo(f"invalid model: {v}", err=True)
        sys.exit(EXIT_VALIDATION)
    return model


@click.group()
def main():
    """Exact geometric convergence rates for reflected random walks."""


@main.command("drift")
@click.argument("path", type=click.Path(exists=True))
def cmd_drift(path):
    """Drift profile gamma0, gamma_hat, delta_hat of a model file."""
    model = _load(path)
    bad = [v for v in model.law.violations() + model.boundary.violations()]
    if bad:
        for v in bad:
            click.echo(f"invalid model: {v}", err=True)
        sys.exit(EXIT_VALIDATION)
    if not drift_mod.check_neri(model.law):
        click.echo("NERI: fails (mean increment >= 0)")
        click.echo(
            "not geometrically contracting under V_gamma for any gamma > 1 "
            "via this criterion"
        )
        sys.exit(EXIT_VALIDATION)
    prof = drift_mod.compute_profile(model.law)
    click.echo("NERI: holds (mean increment < 0)")
    click.echo(f"gamma0    = {_fmt(prof.gamma0)}")
    click.echo(f"gamma_hat = {_fmt(prof.gamma_hat)}")
    click.echo(f"delta_hat = {_fmt(prof.delta_hat)}")


@main.command("eta")
@click.argument("path", type=click.Path(exists=True))
@click.option("--samples", default=200, show_default=True)
def cmd_eta(path, samples):
    """Inside-root count, cross-checked over annulus samples."""
    model = _validated(path)
    try:
        prof = drift_mod.compute_profile(model.law)
        value = spectrum.eta(model, prof, samples=samples)
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    click.echo(f"eta = {value} (constant over {samples} samples)")


def _parse_scan(text):
    try:
        radial, angular = text.lower().split("x")
        return int(radial), int(angular)
    except ValueError:
        raise click.BadParameter("expected RADIALxANGULAR, e.g. 64x256")


def _print_report(report):
    click.echo(f"delta_hat = {_fmt(report.delta_hat)}")
    click.echo(f"gamma_hat = {_fmt(report.gamma_hat)}")
    click.echo(f"eta       = {report.eta}")
    for mu, lams in sorted(report.lambda_sets.items()):
        shown = ", ".join(_fold_conjugates(lams)) if lams else "(empty)"
        click.echo(f"Lambda_{mu}: {shown}")
    for mu, lams in sorted(report.filtered_sets.items()):
        if max(mu) >= 2:
            shown = ", ".join(_fold_conjugates(lams)) if lams else "(empty)"
            click.echo(f"Lambda'_{mu}: {shown}")
    if report.candidates:
        for c in report.candidates:
            click.echo(
                f"eigenvalue {_fmtc(c.lam)}  |lambda| = {_fmt(abs(c.lam))}  "
                f"pattern {c.pattern}  routes {'/'.join(c.routes)}"
            )
    else:
        click.echo("no verified eigenvalue in the annulus")
    if report.boundary_inconclusive:
        shown = ", ".join(_fmtc(z) for z in report.boundary_inconclusive)
        click.echo(f"boundary-inconclusive: {shown}")
    click.echo(f"rho_hat   = {_fmt(report.rho_hat)}  [{report.method}]")


@main.command("rate")
@click.argument("path", type=click.Path(exists=True))
@click.option("--gamma", type=float, default=None, help="weight base override")
@click.option("--method", type=click.Choice(["resultant", "detector", "both"]), default="both", show_default=True)
@click.option("--scan-density", default="64x256", show_default=True, help="detector grid RADIALxANGULAR")
@click.option("--json", "as_json", is_flag=True, help="emit the machine-readable report")
def cmd_rate(path, gamma, method, scan_density, as_json):
    """Exact convergence rate of a model file."""
    model = _validated(path)
    scan = _parse_scan(scan_density)
    try:
        report = eliminate.rate(model, method=method, scan=scan, gamma=gamma)
    except ModelInvalid as exc:
        click.echo(f"invalid model: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    if as_json:
        click.echo(json.dumps(report.to_dict()))
    else:
        _print_report(report)
    if report.disagreement:
        click.echo("route disagreement: " + report.provenance.get("disagreement", ""), err=True)
        sys.exit(EXIT_DISAGREEMENT)


def table_models():
    """The three reference boundary parameterizations of the g=2, d=1 walk."""
    law = rwmodel.IncrementLaw(2, 1, np.array([0.5, 1.0 / 3.0, 0.0, 1.0 / 6.0]))
    out = []
    for a, b in [(0.5, 0.5), (0.1, 0.1), (0.02, 0.02)]:
        rows = rwmodel.BoundaryRows(np.array([[a, 1 - a, 0.0], [b, 0.0, 1 - b]]), 2)
        out.append(((a, b), rwmodel.RandomWalkModel(law, rows)))
    return out


@main.command("table")
@click.option("--json", "as_json", is_flag=True)
@click.option("--scan-density", default="64x256", show_default=True)
def cmd_table(as_json, scan_density):
    """Regenerate the reference table for the g=2, d=1 example walk."""
    scan = _parse_scan(scan_density)
    rows = []
    try:
        for (a, b), model in table_models():
            report = eliminate.rate(model, method="both", scan=scan)
            rows.append(((a, b), report))
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    if as_json:
        doc = [
            {"a": a, "b": b, "report": rep.to_dict()}
            for (a, b), rep in rows
        ]
        click.echo(json.dumps(doc))
        return
    header = ["(a,b)", "Lambda_(1,1)", "Z_(1,1)", "Lambda'_(2)", "Z_(2)", "delta_hat", "rho_hat"]
    click.echo(" | ".join(header))
    for (a, b), rep in rows:
        l11 = ", ".join(_fold_conjugates(rep.lambda_sets.get((1, 1), []) or [])) or "-"
        l2 = ", ".join(_fold_conjugates(rep.filtered_sets.get((2,), []) or [])) or "empty"
        z11 = ", ".join(
            _fold_conjugates([c.lam for c in rep.candidates if c.pattern == (1, 1)])
        ) or "empty"
        z2 = ", ".join(
            _fold_conjugates([c.lam for c in rep.candidates if c.pattern == (2,)])
        ) or "empty"
        click.echo(
            f"({a:g},{b:g}) | {l11} | {z11} | {l2} | {z2} | "
            f"{rep.delta_hat:.3f} | {rep.rho_hat:.3f}"
        )
    if any(rep.disagreement for _, rep in rows):
        sys.exit(EXIT_DISAGREEMENT)


@main.command("bd")
@click.option("--p", type=float, required=True)
@click.option("--q", type=float, required=True)
@click.option("--r", type=float, default=None, help="defaults to 1 - p - q")
@click.option("--a", type=float, required=True)
@click.option("--check", is_flag=True, help="cross-check against the elimination pipeline")
@click.option("--json", "as_json", is_flag=True)
def cmd_bd(p, q, r, a, check, as_json):
    """Closed-form birth-death rate (and optional pipeline cross-check)."""
    if r is None:
        r = 1.0 - p - q
    try:
        params = closedform.BirthDeathParams(p=p, q=q, r=r, a=a)
    except ParamsInvalid as exc:
        click.echo(f"invalid parameters: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    value = closedform.bd_rate(params)
    case = closedform.bd_case(params)
    doc = {
        "rho_hat": value,
        "case": case,
        "delta_hat": params.delta_hat,
        "a0": params.a0,
        "a1": params.a1,
    }
    try:
        lam, z, inside = closedform.bd_lambda_z(params)
        doc.update({"lambda_a": lam, "z_a": z, "z_inside": inside})
    except ErgorateError:
        doc.update({"lambda_a": None, "z_a": None, "z_inside": None,
                    "note": "a = 1 - q: only the trivial eliminant root"})
    if check:
        report = eliminate.rate(closedform.bd_model(params))
        doc["pipeline_rho_hat"] = report.rho_hat
        doc["agreement"] = abs(report.rho_hat - value) <= 1e-8
    if as_json:
        click.echo(json.dumps(doc))
    else:
        click.echo(f"case      = {case}")
        click.echo(f"rho_hat   = {_fmt(value)}   (delta_hat = {_fmt(params.delta_hat)})")
        if doc.get("lambda_a") is not None:
            click.echo(
                f"lambda(a) = {_fmt(doc['lambda_a'])}, z(a) = {_fmt(doc['z_a'])}"
                f" ({'inside' if doc['z_inside'] else 'outside'} the circle)"
            )
        if check:
            click.echo(
                f"pipeline  = {_fmt(doc['pipeline_rho_hat'])} "
                f"({'agrees' if doc['agreement'] else 'DISAGREES'})"
            )
            if not doc["agreement"]:
                sys.exit(EXIT_DISAGREEMENT)


def _family_model(path, expected, fallback):
    """Load a special model from a family file, or build it from the flags."""
    if path is None:
        return fallback()
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("family") != expected:
        raise ParamsInvalid(f"expected a {expected!r} family file, got {doc.get('family')!r}")
    return specialmodels.family_from_dict(doc)


@main.command("speksma")
@click.argument("path", type=click.Path(exists=True), required=False)
@click.option("--p", type=float, default=0.6, show_default=True)
@click.option("--theta", type=float, default=0.5, show_default=True, help="geometric boundary-row ratio")
@click.option("--gamma", type=float, required=True)
@click.option("--truncate", "trunc", type=int, default=None, help="also check the truncated spectrum")
@click.option("--json", "as_json", is_flag=True)
def cmd_speksma(path, p, theta, gamma, trunc, as_json):
    """Bound max(q*gamma, p) for the return-to-zero walk with drifting tail."""
    try:
        model = _family_model(
            path, "speksma",
            lambda: specialmodels.SpeksmaModel(p, specialmodels.GeometricTail(theta=theta)),
        )
        bound, ress = specialmodels.speksma_bound(model, gamma)
    except ErgorateError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    resid = specialmodels.speksma_eigencheck(model)
    doc = {"bound": bound, "r_ess_bound": ress, "eigen_residual": resid,
           "eigenvalue": -model.p}
    if trunc:
        W = specialmodels.speksma_truncation(model, trunc, gamma)
        doc["truncated_second_modulus"] = oracle.subdominant_modulus(W)
    if as_json:
        click.echo(json.dumps(doc))
    else:
        click.echo(f"rate bound      = {_fmt(bound)}  (r_ess bound {_fmt(ress)})")
        click.echo(f"eigenpair check = residual {resid:.2e} at lambda = {_fmt(-model.p)}")
        if trunc:
            click.echo(f"truncated 2nd eigenvalue modulus = {_fmt(doc['truncated_second_modulus'])}")


@main.command("rosen")
@click.argument("path", type=click.Path(exists=True), required=False)
@click.option("--pi0", type=float, default=0.5, show_default=True)
@click.option("--theta", type=float, default=0.5, show_default=True, help="geometric tail ratio")
@click.option("--gamma", type=float, default=1.5, show_default=True)
@click.option("--truncate", "trunc", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def cmd_rosen(path, pi0, theta, gamma, trunc, as_json):
    """Bound 1 - pi0 for the resampling walk with sticky states."""
    try:
        model = _family_model(
            path, "rosen",
            lambda: specialmodels.RosenModel(
                pi0, specialmodels.GeometricTail(theta=theta, total=1.0 - pi0)
            ),
        )
        bound, eigs = specialmodels.rosen_rate(model, gamma)
    except ErgorateError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    doc = {"bound": bound, "point_spectrum": sorted(eigs)}
    if trunc:
        W = specialmodels.rosen_truncation(model, trunc, gamma)
        doc["truncated_second_modulus"] = oracle.subdominant_modulus(W)
    if as_json:
        click.echo(json.dumps(doc))
    else:
        click.echo(f"rate bound = {_fmt(bound)}; point spectrum {sorted(eigs)}")
        if trunc:
            click.echo(f"truncated 2nd eigenvalue modulus = {_fmt(doc['truncated_second_modulus'])}")


@main.command("verify")
@click.argument("path", type=click.Path(exists=True))
@click.option("--truncate", "trunc", type=int, default=400, show_default=True)
@click.option("--gamma", type=float, default=None)
@click.option("--json", "as_json", is_flag=True)
def cmd_verify(path, trunc, gamma, as_json):
    """Cross-check the exact rate against the truncated-operator estimate."""
    model = _validated(path)
    try:
        prof = (drift_mod.compute_profile(model.law) if gamma is None
                else drift_mod.profile_at_gamma(model.law, gamma))
        tr = oracle.truncate(model, trunc, prof.gamma_hat)
        est = oracle.subdominant_modulus(tr.matrix)
        report = eliminate.rate(model, gamma=gamma)
    except ModelInvalid as exc:
        click.echo(f"invalid model: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    doc = {
        "N": trunc,
        "gamma": prof.gamma_hat,
        "empirical_rate": est,
        "rho_hat": report.rho_hat,
        "difference": abs(est - report.rho_hat),
        "clipped_mass": tr.clipped_mass,
    }
    if as_json:
        click.echo(json.dumps(doc))
    else:
        click.echo(f"empirical rate (N={trunc}) = {_fmt(est)}  clipped mass {tr.clipped_mass:.2e}")
        click.echo(f"exact rho_hat             = {_fmt(report.rho_hat)}")
        click.echo(f"difference                = {_fmt(doc['difference'])}")
    if report.disagreement:
        sys.exit(EXIT_DISAGREEMENT)


if __name__ == "__main__":
    main()

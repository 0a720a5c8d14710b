"""Model verification suites: exact structure checks plus numeric probes.

Each check returns PASS, FAIL, or SKIP with a short detail string; the
suite composition depends on what the model documents and whether
displacement data is loaded.  Checks that need displacement data are
skipped (not failed) on the scaffold model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cps import enumerate_module
from .models import ModelSpec, validate_symmetry

__all__ = ["Check", "verification_suite", "run_verification"]

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"

# Squared lattice covolumes of the built-in models (exact integers).
_GRAM_DETS = {"silver": Fraction(8), "cap": Fraction(135) ** 2,
              "spectre": Fraction(3645) ** 2}


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""


def _check(name, ok, detail=""):
    return Check(name, PASS if ok else FAIL, detail)


def verification_suite(model: ModelSpec, seed: int = 0) -> list:
    checks = []
    f = model.field
    lat = model.lattice

    exact = all(
        f.inner(d, g) == Fraction(int(i == j))
        for i, d in enumerate(lat.dual_generators)
        for j, g in enumerate(lat.generators))
    checks.append(_check("lattice-duality", exact,
                         "dual basis is the exact transpose-inverse"))

    det_ok = lat.gram_det == _GRAM_DETS[f.name]
    checks.append(_check("lattice-covolume", det_ok,
                         f"|det B|^2 = {lat.gram_det} (covolume {lat.covolume:g})"))

    checks.append(_periods_check(model))
    if model.name == "cap":
        checks.append(_image_lattice_check(model, seed))
        checks.append(_fourier_module_check_cap(model))
    if f.name == "spectre":
        checks.append(_ht_constant_check(model))
        checks.append(_fourier_module_check_spectre(model))

    if not model.has_displacement:
        for name in ("fourier-at-zero", "pf-eigenvalue",
                     "amplitude-normalization", "rank1-residual"):
            checks.append(Check(name, SKIP, "displacement data not loaded"))
        return checks

    from .cocycle import FourierEvaluator
    ev = FourierEvaluator(model)
    B0 = ev.fourier_matrix(np.zeros(model.dim))
    checks.append(_check("fourier-at-zero",
                         float(np.max(np.abs(B0 - ev.M))) < 1e-12,
                         "B(0) equals the substitution matrix"))

    lam = float(np.max(np.abs(np.linalg.eigvals(ev.M.astype(float)))))
    lam_doc = float(model.pf_eigenvalue.embed_phys()[0])
    checks.append(_check("pf-eigenvalue", abs(lam - lam_doc) < 1e-9,
                         f"PF eigenvalue {lam:.12g} vs documented {lam_doc:.12g}"))

    av = ev.amplitudes(np.zeros(model.dim), n=max(30, model.default_iters))
    s = complex(av.H.sum())
    checks.append(_check("amplitude-normalization",
                         abs(s - model.density) < 1e-10,
                         f"sum H_i(0) = {s.real:.12g} vs density {model.density:.12g}"))

    rng = np.random.default_rng(seed)
    n_iters = 30  # the residual decays like the argument contraction per step
    worst = 0.0
    for _ in range(5):
        k = rng.uniform(-2.0, 2.0, size=model.dim)
        worst = max(worst, ev.amplitudes(k, n=n_iters).rank1_residual)
    checks.append(_check("rank1-residual", worst < 1e-8,
                         f"max sigma2/sigma1 = {worst:.3g} at n={n_iters}"))

    if model.name == "silver":
        checks.append(_analytic_oracle_check(ev))
    if model.orientations == 6:
        rep = validate_symmetry(model, seed=seed)
        checks.append(_check("sixfold-exact", not rep.exact_violations,
                             f"{len(rep.exact_violations)} violated entries"))
        checks.append(_check("sixfold-numeric",
                             rep.max_numeric_residual < 1e-12,
                             f"max residual {rep.max_numeric_residual:.3g}"))
    return checks


def _periods_check(model: ModelSpec) -> Check:
    dual = model.lattice.dual()
    bad = []
    any_periods = False
    for name, d in model.deformations.items():
        DT = d.matrix.T
        for p in d.periods:
            any_periods = True
            if dual.integer_coords(p) is None:
                bad.append(name)
            # kernel property: deformed argument of a period vanishes,
            # which makes the deformed intensity exactly lattice-periodic
            if float(np.linalg.norm(p.embed_int() - DT @ p.embed_phys())) > 1e-10:
                bad.append(name)
    if not any_periods:
        return Check("deformation-periods", SKIP, "no periods documented")
    return _check("deformation-periods", not bad,
                  "catalog periods are module points in the deformation kernel")


def _image_lattice_check(model: ModelSpec, seed: int) -> Check:
    """Deformed cocycle arguments land in the documented discrete lattice."""
    d = model.deformations["hat"]
    Q = np.column_stack([g.embed_phys() for g in d.image_lattice])
    DT = d.matrix.T
    rng = np.random.default_rng(seed)
    worst = 0.0
    cols = model.lattice.dual_columns
    for _ in range(200):
        coords = rng.integers(-10, 11, size=model.lattice.rank)
        vec = cols @ coords.astype(float)
        arg = vec[model.dim:] - DT @ vec[:model.dim]
        c = np.linalg.solve(Q, arg)
        worst = max(worst, float(np.max(np.abs(c - np.round(c)))))
    return _check("deformed-argument-lattice", worst < 1e-10,
                  f"max integer residual {worst:.3g} over 200 points")


def _fourier_module_check_cap(model: ModelSpec) -> Check:
    f = model.field
    tau, xi = f.gen("tau"), f.gen("xi")
    i15 = (2 * tau - 1) * (2 * xi - 1)
    pref = (1 + xi) * (tau - xi) * i15 / 45
    return _module_equality_check(model, [pref, pref * tau, pref * xi,
                                          pref * tau * xi])


def _fourier_module_check_spectre(model: ModelSpec) -> Check:
    f = model.field
    i5 = f.element([Fraction(4, 3), Fraction(-8, 3), Fraction(-1, 3),
                    Fraction(2, 3)])
    pref = i5 / 135
    gens = [pref * g for g in model.generators]
    return _module_equality_check(model, gens)


def _module_equality_check(model: ModelSpec, alt_gens) -> Check:
    """Dual module equals the documented prefactor module (both inclusions)."""
    from .cps import LatticeBasis
    dual = model.lattice.dual()
    alt = LatticeBasis(alt_gens)
    ok = all(alt.integer_coords(g) is not None for g in dual.generators) and \
        all(dual.integer_coords(g) is not None for g in alt_gens)
    return _check("fourier-module-ideal", ok,
                  "dual module matches the documented prefactor form")


def _ht_constant_check(model: ModelSpec) -> Check:
    """Squared period length of the ht deformation, exactly and in floats."""
    f = model.field
    p = model.deformations["ht"].periods[0]
    sq = p * p.conj()
    expect = f.element([Fraction(5, 405), 0, Fraction(4, 405), 0])
    lam = 4.0 + math.sqrt(15.0)
    float_ok = abs(float(np.linalg.norm(p.embed_phys()))
                   - math.sqrt((4 * lam + 5) / 405)) < 1e-10
    return _check("ht-lattice-constant",
                  sq.coords == expect.coords and float_ok,
                  "period length sqrt((4*lam+5)/405), exact and numeric")


def _analytic_oracle_check(ev) -> Check:
    from .diffraction import analytic_silver
    ks = np.linspace(-5.0, 5.0, 100)
    H = ev.amplitude_batch(ks.reshape(-1, 1), n=30)
    ha, hb = analytic_silver(ks)
    err = float(np.max(np.abs(H - np.column_stack([ha, hb]))))
    return _check("analytic-oracle", err < 1e-8,
                  f"max |cocycle - closed form| = {err:.3g} at n=30")


def run_verification(model: ModelSpec, seed: int = 0):
    """Run the suite; returns (checks, ok)."""
    checks = verification_suite(model, seed=seed)
    ok = all(c.status != FAIL for c in checks)
    return checks, ok

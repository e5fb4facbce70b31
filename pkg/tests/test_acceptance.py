"""Timed acceptance checks, one per criterion.

Each check records a ``PASS``/``FAIL`` line (with wall time against its limit)
that the conftest hook prints in the terminal summary.  Running this file as a
script prints the same lines directly.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from khinchin_lab import specialfn as sf
from khinchin_lab.certify import PHI_GRID, PSI_GRID, phi0_der, phi0_drop, sec_der_2
from khinchin_lab.dist import UnitVector, make_perturbed_rademacher, make_radial, rng
from khinchin_lab.perturbed import (GaussBoundInput, der_psi_unif_report, gauss_tail_bound,
                                    geometric_grid, phi_bulk_report, phi_der_report,
                                    psi_monotone_scan, psi_unif_report, regime_pipeline)
from khinchin_lab.signchange import lobe_brackets_hold, np_sign_change
from khinchin_lab.verify import (exact_rademacher_mean, fourier_mean, gf_neg_moment,
                                 mc_mean, mc_neg_moment)

SQRT2 = math.sqrt(2.0)


def sweep_vectors(count: int = 100, seed: int = 2024) -> list[UnitVector]:
    g = rng(seed)
    ns = g.integers(3, 13, count)
    return [UnitVector.random(int(n), seed + 1 + k) for k, n in enumerate(ns)]


def _run(number: int, title: str, limit: float, check):
    """Time ``check`` (returns ``(ok, detail)``) and format the summary line."""
    t0 = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as exc:  # reported as a failure, then re-raised by the caller
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    wall = time.perf_counter() - t0
    in_time = wall <= limit
    status = "PASS" if ok and in_time else "FAIL"
    line = (f"[{status}] criterion {number:2d} {title}: {detail} "
            f"({wall:.1f}s / limit {limit:g}s{'' if in_time else ', over limit'})")
    return ok, in_time, line


def _criterion(record_property, number, title, limit, check):
    ok, in_time, line = _run(number, title, limit, check)
    record_property("criterion", line)
    print(line)
    assert ok, line
    assert in_time, line


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_psi0_routes():
    worst = 0.0
    for s in np.geomspace(1.0, 1e3, 50):
        a = sf.psi0(s).value
        b = sf.psi0(s, sf.Method.PRODUCT).value
        c = sf.psi0(s, sf.Method.QUADRATURE, tol=1e-11).value
        worst = max(worst, abs(a - b), abs(a - c), abs(b - c))
    e2 = abs(sf.psi0(2.0).value - 1 / SQRT2)
    e3 = abs(sf.psi0(3.0).value - 4 / (math.pi * math.sqrt(3.0)))
    ok = worst <= 1e-9 and e2 <= 1e-10 and e3 <= 1e-10
    return ok, f"max route gap {worst:.2e}, |Psi0(2)-1/sqrt2| {e2:.1e}, |Psi0(3)-4/(pi sqrt3)| {e3:.1e}"


def check_psi0_prime_floor():
    vals = [sf.psi0_prime(s, K=4000) for s in np.linspace(2.0, 3.0, 1001)]
    lo = min(v.value - v.uncertainty for v in vals)
    return lo >= 0.01785 - 1e-5, f"min Psi0' on [2,3] = {lo:.6f}"


def check_phi0_values():
    p2 = sf.phi0(2.0)
    i2 = sf.ball_I(2.0)
    big = sf.phi0(1e6)
    e_p = abs(p2.value - SQRT2)
    e_i = abs(i2.value - math.pi / 2)
    e_b = abs(big.value - sf.SQRT_6_OVER_PI)
    ok = e_p <= 1e-9 and e_i <= 1e-10 and e_b <= 1e-2
    return ok, f"|Phi0(2)-sqrt2| {e_p:.1e}, |I(2)-pi/2| {e_i:.1e}, |Phi0(1e6)-sqrt(6/pi)| {e_b:.1e}"


def check_sec_der_2():
    r = sec_der_2(1e-10)
    q = {c.name: c for c in r.computed}
    main, alt = q["I'(2)"], q["I'(2) lobe route"]
    gap = abs(main.value - alt.value)
    ok = main.value + main.uncertainty <= -0.48 and gap <= 1e-4 and r.passed
    return ok, f"I'(2) = {main.value:.6f}, lobe route {alt.value:.6f}, gap {gap:.1e}"


def check_phi0_monotone():
    der = phi0_der(1e-9, points=20)
    drop = phi0_drop(1e-9, points=200, s_max=1e4)
    ok = der.passed and drop.passed
    return ok, f"Phi0' margin {der.margin:.2e}, Phi0 drop margin {drop.margin:.2e}"


def check_szarek_sweep():
    worst = math.inf
    for a in sweep_vectors():
        assert a.sup_norm <= 1 / SQRT2 + 1e-15
        worst = min(worst, exact_rademacher_mean(a).value)
    return worst >= 1 / SQRT2 - 1e-12, f"min E|sum a_j eps_j| = {worst:.6f}"


def check_ball_sweep():
    sphere = make_radial("sphere")
    worst = -math.inf
    for a in sweep_vectors():
        m = gf_neg_moment(a, sphere, tol=1e-9)
        worst = max(worst, m.value + m.stderr_or_bound)
    bench = gf_neg_moment(UnitVector.parse("0.7071067811865476,0.7071067811865476"), sphere, 1e-10)
    e_b = abs(bench.value - SQRT2)
    ok = worst <= SQRT2 + 1e-8 and e_b <= 1e-8
    return ok, f"max E|sum a_j xi_j|^-1 = {worst:.6f}, benchmark error {e_b:.1e}"


def check_psi_perturbed():
    grid = geometric_grid(2.0, 1e3, 300)
    parts = []
    ok = True
    for kind in ("two_point", "four_point"):
        for c in (1e-5, 1e-4):
            d = make_perturbed_rademacher(kind, c)
            scan = psi_monotone_scan(d, grid, 1e-9)
            unif = psi_unif_report(d, PSI_GRID, 1e-9)
            der = der_psi_unif_report(d, [s for s in PSI_GRID if s >= 2], 1e-9)
            ok &= scan.passed and unif.passed and der.passed
            parts.append(f"{kind}:{c:g} {scan.margin:.1e}")
    return ok, "scan margins " + ", ".join(parts)


def check_phi_perturbed():
    grid = PHI_GRID
    ok = True
    parts = []
    for kind in ("shell", "two_shell"):
        d = make_radial(kind, 1e-5)
        bulk = phi_bulk_report(d, grid, 1e-9)
        der = phi_der_report(d, grid, 1e-9)
        ok &= bulk.passed and der.passed
        parts.append(f"{kind} bulk {bulk.margin:.1e} der {der.margin:.1e}")
    b = gauss_tail_bound(GaussBoundInput(0.0, 1.0, 1.0, 0.01, 1e6))
    p = sf.phi0(1e6)
    ok &= b < SQRT2 and b >= p.value + p.uncertainty
    parts.append(f"Gaussian bound {b:.6f} vs Phi0(1e6) {p.value:.6f}")
    return ok, "; ".join(parts)


def check_sign_change():
    ok = True
    parts = []
    for a in (1.0, 1.01, 1.03):
        res = np_sign_change(a)
        brackets = lobe_brackets_hold(np.array(res.lobe_maxima[:20]))
        ok &= (res.crossings == 1 and res.direction == "-+" and res.unresolved_points == 0
               and abs(res.moment_identity_residual) <= 1e-6 and brackets)
        parts.append(f"a={a:g}: {res.crossings} crossing(s), y0={res.y0:.5f}, "
                     f"residual {res.moment_identity_residual:.1e}")
    return ok, "; ".join(parts)


def check_quadrature_vs_mc(pairs: int = 20, N: int = 10 ** 6, seed: int = 7):
    g = rng(seed)
    line_kinds = ("two_point", "four_point", "uniform_noise")
    radial_kinds = ("sphere", "shell", "two_shell")
    worst = 0.0
    for k in range(pairs):
        n = int(g.integers(2, 9))
        a = UnitVector.random(n, seed * 1000 + k)
        c = int(g.integers(1, 100)) / 1000
        if k % 2 == 0:
            d = make_perturbed_rademacher(line_kinds[(k // 2) % 3], c)
            q = fourier_mean(a, d, 1e-9)
            mc = mc_mean(a, d, N, seed=k)
        else:
            kind = radial_kinds[(k // 2) % 3]
            d = make_radial(kind) if kind == "sphere" else make_radial(kind, c)
            q = gf_neg_moment(a, d, 1e-9)
            mc = mc_neg_moment(a, d, N, seed=k)
        z = abs(q.value - mc.value) / math.hypot(mc.stderr_or_bound, q.stderr_or_bound)
        worst = max(worst, z)
    return worst <= 5.0, f"worst deviation {worst:.2f} sigma over {pairs} pairs"


def check_regimes():
    at0 = regime_pipeline(delta=0.0)
    tiny = regime_pipeline(delta=1e-38)
    big = regime_pipeline(delta=1e-3)
    ok = at0.passed and tiny.passed and not big.passed
    return ok, (f"delta=0 {at0.verdict.value}, delta=1e-38 {tiny.verdict.value}, "
                f"delta=1e-3 {big.verdict.value}")


CRITERIA = [
    (1, "Psi0 closed form / product / quadrature", 10, check_psi0_routes),
    (2, "Psi0' floor on [2,3]", 5, check_psi0_prime_floor),
    (3, "Phi0 and I special values", 30, check_phi0_values),
    (4, "I'(2) bound, two routes", 10, check_sec_der_2),
    (5, "Phi0 derivative and drop", 60, check_phi0_monotone),
    (6, "Rademacher sweep lower bound", 60, check_szarek_sweep),
    (7, "sphere sweep upper bound", 120, check_ball_sweep),
    (8, "perturbed Psi monotonicity", 300, check_psi_perturbed),
    (9, "perturbed Phi bounds and Gaussian tail", 300, check_phi_perturbed),
    (10, "single sign change", 60, check_sign_change),
    (11, "quadrature vs Monte Carlo", 300, check_quadrature_vs_mc),
    (12, "regime pipeline", 5, check_regimes),
]


@pytest.mark.parametrize("number,title,limit,check", CRITERIA,
                         ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(record_property, number, title, limit, check):
    _criterion(record_property, number, title, limit, check)


if __name__ == "__main__":
    failures = 0
    for spec in CRITERIA:
        ok, in_time, line = _run(*spec)
        failures += not (ok and in_time)
        print(line, flush=True)
    raise SystemExit(1 if failures else 0)

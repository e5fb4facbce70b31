"""Batch driver: one report per lemma, aggregated."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import specialfn as sf
from .dist import (Distribution1D, RadialDist3D, cf_deviation_check, make_perturbed_rademacher,
                   make_radial, rng)
from .perturbed import (GaussBoundInput, der_psi_unif_report, gauss_tail_bound, geometric_grid,
                        phi3, phi_bulk_report, phi_der_report, psi2_regimes, psi_unif_report,
                        regime_pipeline)
from .report import LemmaReport, Verdict, judge, rejected
from .signchange import np_majorization_check, np_report

LEMMA_IDS = ("Psi1-bounds", "phi-unif", "Psi-unif", "sulogu", "DerPsi-unif", "Psi2-regimes",
             "phi-unif-vec", "Phi-bulk", "Phi-big-s", "Phi-der", "Phi0-der", "Phi0", "sec-der-2",
             "Phi0-der-lb", "sec-sign-change", "sec-impr-ball", "Phi2-regimes")

DEFAULT_TOL = 1e-8
PSI_GRID = (1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0, 100.0)
PHI_GRID = (2.0, 2.5, 3.0, 10.0)
T_GRID = np.geomspace(1e-3, 1e3, 400)
BIG_S = (1e4, 1e5, 1e6)


def default_line_dists() -> list[Distribution1D]:
    return [make_perturbed_rademacher("two_point", 1e-5),
            make_perturbed_rademacher("four_point", 1e-5)]


def default_radial_dists() -> list[RadialDist3D]:
    return [make_radial("shell", 1e-5), make_radial("two_shell", 1e-5)]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("KHINCHIN_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _track(r: LemmaReport, values) -> LemmaReport:
    if not all(v.converged for v in values):
        r.note("tolerance not met")
    return r


def _merge(lemma_id: str, parts: Sequence[LemmaReport]) -> LemmaReport:
    """Worst-margin aggregate of per-distribution reports."""
    r = LemmaReport(lemma_id, inputs={"cases": [p.inputs for p in parts]})
    for p in parts:
        name = p.inputs.get("name") or ",".join(
            f"{k}={v:g}" for k, v in p.inputs.items() if isinstance(v, float)) or p.lemma_id
        for q in p.computed:
            r.add(f"{name}: {q.name}", q.value, q.uncertainty)
        if p.notes:
            r.note(f"{name}: {p.notes}")
    if any(p.verdict is Verdict.REJECTED for p in parts):
        r.verdict = Verdict.REJECTED
        return r
    k = min(range(len(parts)), key=lambda i: parts[i].margin)
    r.margin, r.paper_bound = parts[k].margin, parts[k].paper_bound
    r.verdict = Verdict.PASS if all(p.passed for p in parts) else Verdict.FAIL
    return r


def _per_dist(lemma_id: str, dists, fn) -> LemmaReport:
    if not dists:
        return rejected(lemma_id, "no distributions configured")
    return _merge(lemma_id, [fn(d) for d in dists])


# ---------------------------------------------------------------------------
# unperturbed lemmas
# ---------------------------------------------------------------------------

def psi1_bounds(tol: float = DEFAULT_TOL, step: float = 1e-3) -> LemmaReport:
    """inf over [2, 3] of Psi0' >= (zeta(3) - 1)/(8 sqrt 2)."""
    grid = np.linspace(2.0, 3.0, int(round(1.0 / step)) + 1)
    vals = [sf.psi0_prime(s, K=4000) for s in grid]
    k = int(np.argmin([v.value for v in vals]))
    worst = vals[k]
    r = judge("Psi1-bounds", worst.value - worst.uncertainty - sf.PSI0_PRIME_LOWER,
              inputs={"grid": [2.0, 3.0, len(grid)], "tol": tol},
              paper_bound=sf.PSI0_PRIME_LOWER)
    r.add("min Psi0'", worst.value, worst.uncertainty)
    r.add("argmin s", worst.s)
    return r


def sulogu(samples: int = 200_000, seed: int = 0) -> LemmaReport:
    """|u^s log u - v^s log v| <= |u - v| for s >= 2, u, v in (0, 1)."""
    g = rng(seed)
    u, v = g.uniform(0, 1, samples), g.uniform(0, 1, samples)
    s = g.uniform(2, 50, samples)
    # include the steepest corner, s = 2 near u = 1
    u[:100] = 1 - g.uniform(0, 1e-3, 100)
    v[:100] = 1 - g.uniform(0, 1e-3, 100)
    s[:100] = 2.0
    ok = (u > 0) & (v > 0)
    gap = sf.sulogu_gap(u[ok], v[ok], s[ok])
    slack = 8 * np.finfo(float).eps
    r = judge("sulogu", float(gap.min()) + slack, inputs={"samples": samples, "seed": seed},
              paper_bound=0.0)
    r.add("min |u-v| - |u^s log u - v^s log v|", float(gap.min()), slack)
    return r


def phi0_der(tol: float = DEFAULT_TOL, points: int = 20) -> LemmaReport:
    """Phi0'(s) <= -0.02 on [2, 2.01]."""
    vals = [sf.phi0(s, 1, tol) for s in np.linspace(2.0, 2.01, points)]
    worst = max(vals, key=lambda v: v.value + v.uncertainty)
    r = judge("Phi0-der", -0.02 - (worst.value + worst.uncertainty),
              inputs={"interval": [2.0, 2.01], "points": points, "tol": tol}, paper_bound=-0.02)
    r.add("max Phi0'", worst.value, worst.uncertainty)
    r.add("argmax s", worst.s)
    return _track(r, vals)


def phi0_drop(tol: float = DEFAULT_TOL, points: int = 200, s_max: float = 1e4) -> LemmaReport:
    """Phi0(s) <= sqrt 2 - 2e-4 for s >= 2.01 (scanned up to ``s_max``)."""
    bound = sf.SQRT2 - 2e-4
    vals = [sf.phi0(s, 0, tol) for s in geometric_grid(2.01, s_max, points)]
    worst = max(vals, key=lambda v: v.value + v.uncertainty)
    r = judge("Phi0", bound - worst.value - worst.uncertainty,
              inputs={"interval": [2.01, s_max], "points": points, "tol": tol},
              paper_bound=bound)
    r.add("max Phi0", worst.value, worst.uncertainty)
    r.add("argmax s", worst.s)
    r.note(f"scan stops at s={s_max:g}; beyond it Phi0 decreases to sqrt(6/pi)")
    return _track(r, vals)


def lobe_log_integral(lobes: int = 2000) -> tuple[float, float]:
    """int_0^inf (sin u/u)^2 log|sin u/u| du, lobe by lobe with scipy, plus an asymptotic tail.

    Past ``T = lobes * pi`` the integrand averages to (A - log u / 2)/u^2 with
    A the period mean of sin^2 log|sin|; the remainder is O(log T / T^2).
    """
    from scipy.integrate import quad

    def f(u):
        if u == 0.0:
            return 0.0
        x = math.sin(u) / u
        return x * x * math.log(abs(x)) if x != 0 else 0.0
    parts = [quad(f, k * math.pi, (k + 1) * math.pi, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
             for k in range(lobes)]
    A = quad(lambda x: math.sin(x) ** 2 * math.log(abs(math.sin(x))) if math.sin(x) else 0.0,
             0, math.pi, epsabs=1e-15)[0] / math.pi
    T = lobes * math.pi
    tail = A / T - 0.5 * (math.log(T) + 1.0) / T
    return math.fsum(parts) + tail, 2.0 * (math.log(T) + 1.0) / T ** 2


def sec_der_2(tol: float = DEFAULT_TOL) -> LemmaReport:
    """I'(2) <= -0.48, cross-checked against the lobe-by-lobe route to 1e-4."""
    v = sf.ball_I(2.0, 1, tol)
    alt, alt_unc = lobe_log_integral()
    r = judge("sec-der-2", -0.48 - v.value - v.uncertainty, inputs={"tol": tol},
              paper_bound=-0.48)
    r.add("I'(2)", v.value, v.uncertainty)
    r.add("I'(2) lobe route", alt, alt_unc)
    if abs(v.value - alt) > 1e-4:
        r.note(f"routes disagree by {abs(v.value - alt):.3g}")
        r.verdict = Verdict.FAIL
    return _track(r, [v])


def phi0_der_lb(tol: float = DEFAULT_TOL, points: int = 60) -> LemmaReport:
    """Phi0'(s) >= -12 sqrt(s)/(pi e) on [2, 100]."""
    margins, vals = [], []
    for s in geometric_grid(2.0, 100.0, points):
        v = sf.phi0(s, 1, tol)
        vals.append(v)
        margins.append(v.value - v.uncertainty + 12 * math.sqrt(s) / (math.pi * math.e))
    k = int(np.argmin(margins))
    r = judge("Phi0-der-lb", margins[k], inputs={"interval": [2.0, 100.0], "points": points},
              paper_bound=-12 * math.sqrt(vals[k].s) / (math.pi * math.e))
    r.add("Phi0' at worst s", vals[k].value, vals[k].uncertainty)
    r.add("worst s", vals[k].s)
    return _track(r, vals)


def sign_change(a_values=(1.0, 1.01, 1.03)) -> LemmaReport:
    return _merge("sec-sign-change", [np_report(a) for a in a_values])


def impr_ball(tol: float = 1e-12) -> LemmaReport:
    s0 = 2.01
    a = 2.0 / sf.phi0(s0, 0, tol).value ** 2
    return np_majorization_check(a, s0, geometric_grid(s0, 1e4, 100), tol)


# ---------------------------------------------------------------------------
# perturbed lemmas
# ---------------------------------------------------------------------------

def phi_big_s(d: RadialDist3D, tol: float = DEFAULT_TOL, s_values=BIG_S) -> LemmaReport:
    """Gaussian bound dominates Phi(s) and drops below sqrt 2 at the largest s."""
    inputs = {**d.describe(), "tol": tol}
    try:
        rows = [(s, gauss_tail_bound(GaussBoundInput.for_dist(d, s))) for s in s_values]
    except ValueError as exc:
        return rejected("Phi-big-s", str(exc), inputs=inputs)
    r = LemmaReport("Phi-big-s", inputs=inputs, paper_bound=sf.SQRT2)
    margins = []
    vals = []
    for s, b in rows:
        p = phi3(s, d, tol) if s < sf.ASYMPTOTIC_FROM else None
        if p is None and d.w2_exactly_zero:
            p0 = sf.phi0(s)
            val, unc = p0.value, p0.uncertainty
        elif p is None:
            # no direct evaluation this far out for perturbed laws
            r.add(f"bound(s={s:g})", b)
            continue
        else:
            vals.append(p)
            val, unc = p.value, p.uncertainty
        r.add(f"bound(s={s:g})", b)
        r.add(f"Phi(s={s:g})", val, unc)
        margins.append(b - val - unc)
    top = rows[-1][1]
    r.note(f"bound at s={rows[-1][0]:g} is {'below' if top < sf.SQRT2 else 'not below'} sqrt 2")
    r.margin = min(margins)
    r.verdict = Verdict.PASS if r.margin >= 0 else Verdict.FAIL
    return _track(r, vals)


def _phi_big_s_reference() -> LemmaReport:
    """The parameter point (delta=0, C0=1, E|X|^3=1, theta=0.01, s=1e6) against Phi0."""
    inp = GaussBoundInput(0.0, 1.0, 1.0, 0.01, 1e6)
    b = gauss_tail_bound(inp)
    p = sf.phi0(1e6)
    r = judge("Phi-big-s", min(sf.SQRT2 - b, b - p.value - p.uncertainty),
              inputs={"delta": 0.0, "C0": 1.0, "m3": 1.0, "theta": 0.01, "s": 1e6},
              paper_bound=sf.SQRT2)
    r.add("gauss_tail_bound", b)
    r.add("Phi0(1e6)", p.value, p.uncertainty)
    return r


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

@dataclass
class CertifySummary:
    tol: float
    reports: list[LemmaReport] = field(default_factory=list)

    @property
    def counts(self) -> dict:
        out = {v.value: 0 for v in Verdict}
        for r in self.reports:
            out[r.verdict.value] += 1
        return out

    @property
    def verdict(self) -> Verdict:
        c = self.counts
        if c["fail"]:
            return Verdict.FAIL
        if c["rejected"]:
            return Verdict.REJECTED
        return Verdict.PASS

    def as_dict(self) -> dict:
        return {"tol": self.tol, "verdict": self.verdict.value, "counts": self.counts,
                "reports": [r.as_dict() for r in self.reports]}


def _checks(tol: float, line: Sequence[Distribution1D],
            radial: Sequence[RadialDist3D]) -> list[tuple[str, Callable[[], LemmaReport]]]:
    ref = make_radial("sphere")
    return [
        ("Psi1-bounds", lambda: psi1_bounds(tol)),
        ("phi-unif", lambda: _per_dist("phi-unif", line, lambda d: cf_deviation_check(d, T_GRID))),
        ("Psi-unif", lambda: _per_dist("Psi-unif", line,
                                       lambda d: psi_unif_report(d, PSI_GRID, tol))),
        ("sulogu", lambda: sulogu()),
        ("DerPsi-unif", lambda: _per_dist("DerPsi-unif", line, lambda d: der_psi_unif_report(
            d, [s for s in PSI_GRID if s >= 2], tol))),
        ("Psi2-regimes", lambda: psi2_regimes()),
        ("phi-unif-vec", lambda: _per_dist("phi-unif-vec", radial,
                                           lambda d: cf_deviation_check(d, T_GRID))),
        ("Phi-bulk", lambda: _per_dist("Phi-bulk", radial,
                                       lambda d: phi_bulk_report(d, PHI_GRID, tol))),
        ("Phi-big-s", lambda: _merge("Phi-big-s", [_phi_big_s_reference()]
                                     + [phi_big_s(d, tol) for d in [ref, *radial]])),
        ("Phi-der", lambda: _per_dist("Phi-der", radial,
                                      lambda d: phi_der_report(d, PHI_GRID, tol))),
        ("Phi0-der", lambda: phi0_der(tol)),
        ("Phi0", lambda: phi0_drop(tol)),
        ("sec-der-2", lambda: sec_der_2(tol)),
        ("Phi0-der-lb", lambda: phi0_der_lb(tol)),
        ("sec-sign-change", lambda: sign_change()),
        ("sec-impr-ball", lambda: impr_ball(min(tol, 1e-10))),
        ("Phi2-regimes", lambda: _merge("Phi2-regimes", [regime_pipeline(ref),
                                                         regime_pipeline(delta=1e-38)])),
    ]


def certify_all(tol: float = DEFAULT_TOL, line_dists: Optional[Sequence[Distribution1D]] = None,
                radial_dists: Optional[Sequence[RadialDist3D]] = None,
                only: Optional[Sequence[str]] = None) -> CertifySummary:
    """Run every lemma check; ``None`` lists mean the default perturbed families."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    line = default_line_dists() if line_dists is None else list(line_dists)
    radial = default_radial_dists() if radial_dists is None else list(radial_dists)
    checks = _checks(tol, line, radial)
    if only:
        unknown = set(only) - set(LEMMA_IDS)
        if unknown:
            raise ValueError(f"unknown lemma ids: {sorted(unknown)}")
        checks = [c for c in checks if c[0] in only]

    def run(item):
        name, fn = item
        try:
            r = fn()
        except ValueError as exc:
            return rejected(name, str(exc))
        r.lemma_id = name
        return r

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        reports = list(pool.map(run, checks))
    return CertifySummary(tol, reports)

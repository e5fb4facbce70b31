"""Distribution functions of a Gaussian and of |sinc|, and the drop-off of Ball's function.

With ``f_a(x) = exp(-pi a x^2 / 2)`` and ``g(x) = |sin(pi x)/(pi x)|`` on x > 0,

    F_a(y) = |{f_a > y}| = sqrt(2 log(1/y) / (pi a)),
    G(y)   = |{g > y}|   = sum over lobes [m, m+1] of the width where g > y.

For ``a`` in [1, pi/3] the difference ``F_a - G`` changes sign once, from
negative to positive.  That single crossing is what feeds the majorization
step giving ``Phi0(s) <= sqrt(2/a)`` for ``s >= s0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import polygamma, roots_legendre

from .report import LemmaReport, Verdict, rejected
from .specialfn import phi0

A_MIN, A_MAX = 1.0, math.pi / 3.0
#: lobes handled by root finding; beyond this only bounds are used
EXACT_LOBES = 200
GRID_POINTS = 10_000
LOG_Y_MIN = -20.0
_GL_NODES, _GL_WEIGHTS = roots_legendre(40)


def _g(x):
    return np.abs(np.sinc(x))


def lobe_peaks(m_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(x_m, y_m) for m = 1..m_max: tan(pi x) = pi x on (m, m + 1/2)."""
    m = np.arange(1, m_max + 1, dtype=float)
    lo, hi = m.copy(), m + 0.5
    # h = sin(pi x) - pi x cos(pi x) has sign (-1)^(m+1) at m and (-1)^m at m + 1/2
    sgn = np.where(m % 2 == 0, 1.0, -1.0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        h = sgn * (np.sin(np.pi * mid) - np.pi * mid * np.cos(np.pi * mid))
        up = h < 0
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    x = 0.5 * (lo + hi)
    return x, 1.0 / np.sqrt(1.0 + (np.pi * x) ** 2)


def _solve(lo, hi, y, increasing: bool):
    """Vectorised bisection for g(x) = y on brackets where g is monotone."""
    lo, hi = np.array(lo, dtype=float), np.array(hi, dtype=float)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = _g(mid) < y
        go_right = below if increasing else ~below
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    return 0.5 * (lo + hi)


def _main_lobe_root(y):
    y = np.asarray(y, dtype=float)
    return _solve(np.zeros_like(y), np.ones_like(y), y, increasing=False)


def lobe_widths(m: np.ndarray, xm: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Width of {x in [m, m+1]: g(x) > y} for pairs (lobe m with peak xm, level y < y_m)."""
    left = _solve(m, xm, y, increasing=True)
    right = _solve(xm, m + 1.0, y, increasing=False)
    return right - left


def _w(z):
    """Width of {u in [0, 1]: |sin pi u| > z}."""
    z = np.clip(z, 0.0, 1.0)
    return 1.0 - 2.0 / np.pi * np.arcsin(z)


def _W(z0):
    """int_{z0}^1 w(z) dz."""
    z0 = np.clip(z0, 0.0, 1.0)
    return (1.0 - z0) - 2.0 / np.pi * (np.pi / 2 - z0 * np.arcsin(z0) - np.sqrt(1.0 - z0 * z0))


def F(a: float, y):
    y = np.asarray(y, dtype=float)
    return np.sqrt(2.0 * np.log(1.0 / y) / (np.pi * a))


def G_exact(y: float, xm: np.ndarray, ym: np.ndarray) -> float:
    """G(y) from root finding; needs every lobe with y_m > y to be among ``xm``."""
    live = ym > y
    if live.sum() == len(ym):
        raise ValueError("level below the last tabulated lobe")
    m = np.floor(xm[live])
    widths = lobe_widths(m, xm[live], np.full(m.shape, y))
    return float(_main_lobe_root(y)) + math.fsum(widths.tolist())


def G_batch(ys: np.ndarray, xm: np.ndarray, ym: np.ndarray) -> np.ndarray:
    """G_exact over many levels at once."""
    counts = np.sum(ym[None, :] > ys[:, None], axis=1)
    if np.any(counts == len(ym)):
        raise ValueError("level below the last tabulated lobe")
    owner = np.repeat(np.arange(len(ys)), counts)
    lobe = np.concatenate([np.arange(c) for c in counts]) if len(ys) else np.zeros(0, int)
    widths = lobe_widths(np.floor(xm[lobe]), xm[lobe], ys[owner])
    total = np.bincount(owner, weights=widths, minlength=len(ys))
    return _main_lobe_root(ys) + total


def G_lower(y):
    """Closed-form lower bound: lobe m is at least w(pi (m+1) y) wide and w decreases."""
    y = np.asarray(y, dtype=float)
    return _main_lobe_root(y) + _W(2 * np.pi * y) / (np.pi * y)


@dataclass
class NPAnalysis:
    a_param: float
    y0: float
    crossings: int
    lobe_maxima: list[float]
    moment_identity_residual: float
    direction: str = "-+"
    unresolved_points: int = 0
    grid: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"a_param": self.a_param, "y0": self.y0, "crossings": self.crossings,
                "direction": self.direction, "lobe_maxima": self.lobe_maxima,
                "moment_identity_residual": self.moment_identity_residual,
                "unresolved_points": self.unresolved_points, "grid": self.grid}


def moment_identity_residual(lobes: int = EXACT_LOBES) -> float:
    """int_0^1 2y (F_1(y) - G(y)) dy, each side computed from its distribution function.

    G is split by lobe; lobe m contributes int_0^{y_m} 2y width_m(y) dy.  On each
    lobe ``y = y_m (1 - tau^2)`` removes the square-root endpoint.  Lobes past
    ``lobes`` are bracketed by w(pi (m+1) y) <= width_m <= w(pi m y), whose
    moments are 1/(2 pi^2 (m+1)^2) and 1/(2 pi^2 m^2).
    """
    from scipy.integrate import quad

    # int_0^1 2y F_1: substitute y = e^-v
    fpart, _ = quad(lambda v: 2.0 * math.exp(-2 * v) * math.sqrt(2 * v / math.pi),
                    0, math.inf, epsabs=1e-14, epsrel=1e-13)
    tau = 0.5 * (_GL_NODES + 1.0)
    wt = 0.5 * _GL_WEIGHTS

    def lobe_moment(widths_at, ym):
        y = ym * (1 - tau * tau)
        return math.fsum((wt * 2 * y * widths_at(y) * 2 * ym * tau).tolist())

    parts = [lobe_moment(_main_lobe_root, 1.0)]
    xm, ym = lobe_peaks(lobes)
    for k in range(lobes):
        m = math.floor(xm[k])
        parts.append(lobe_moment(
            lambda y: lobe_widths(np.full(y.shape, float(m)), np.full(y.shape, xm[k]), y), ym[k]))
    lo = float(polygamma(1, lobes + 2)) / (2 * math.pi ** 2)
    hi = float(polygamma(1, lobes + 1)) / (2 * math.pi ** 2)
    gpart = math.fsum(parts) + 0.5 * (lo + hi)
    return fpart - gpart


def np_sign_change(a_param: float, points: int = GRID_POINTS) -> NPAnalysis:
    """Count sign changes of F_a - G on a log grid of (e^-20, 1) and locate y0."""
    a = float(a_param)
    if not A_MIN <= a <= A_MAX:
        raise ValueError(f"a_param must lie in [1, pi/3], got {a}")
    xm, ym = lobe_peaks(EXACT_LOBES)
    y_exact_from = ym[-1]
    ys = np.exp(np.linspace(LOG_Y_MIN, 0.0, points + 2)[1:-1])
    Fy = F(a, ys)
    sign = np.zeros(points, dtype=int)
    diff = np.full(points, np.nan)
    exact = ys > y_exact_from
    diff[exact] = Fy[exact] - G_batch(ys[exact], xm, ym)
    sign[exact] = np.sign(diff[exact]).astype(int)
    # below the tabulated lobes: a lower bound on G certifies F - G < 0
    low = ~exact
    neg = Fy[low] < G_lower(ys[low])
    sign[np.nonzero(low)[0][neg]] = -1
    unresolved = int(np.sum(sign == 0))

    resolved = sign[sign != 0]
    changes = np.nonzero(np.diff(resolved))[0]
    crossings = len(changes)
    direction = "".join("-" if s < 0 else "+" for s in
                        [resolved[0]] + [resolved[c + 1] for c in changes])
    y0 = math.nan
    if crossings >= 1:
        idx = np.nonzero(sign != 0)[0]
        i, j = idx[changes[0]], idx[changes[0] + 1]
        y0 = brentq(lambda y: float(F(a, y)) - G_exact(y, xm, ym), ys[i], ys[j], xtol=1e-14)
    return NPAnalysis(a, y0, crossings, [float(v) for v in ym[:20]],
                      moment_identity_residual(), direction, unresolved,
                      {"points": points, "log_y_min": LOG_Y_MIN, "exact_lobes": EXACT_LOBES})


def lobe_brackets_hold(ym: np.ndarray) -> bool:
    m = np.arange(1, len(ym) + 1)
    inside = (ym > 1 / (np.pi * (m + 0.5))) & (ym < 1 / (np.pi * m))
    return bool(np.all(inside) and np.all(np.diff(ym) < 0))


def np_report(a_param: float) -> LemmaReport:
    """Single crossing, '-' to '+', as a report."""
    inputs = {"a_param": a_param}
    if not A_MIN <= a_param <= A_MAX:
        return rejected("sec-sign-change", f"a_param={a_param} outside [1, pi/3]", inputs=inputs)
    res = np_sign_change(a_param)
    r = LemmaReport("sec-sign-change", inputs=inputs, paper_bound=1.0)
    r.add("crossings", res.crossings)
    r.add("y0", res.y0)
    r.add("y1", res.lobe_maxima[0])
    r.add("moment_identity_residual", res.moment_identity_residual)
    ok = res.crossings == 1 and res.direction == "-+" and res.unresolved_points == 0 \
        and lobe_brackets_hold(np.array(res.lobe_maxima))
    r.margin = 0.0 if ok else -1.0
    r.verdict = Verdict.PASS if ok else Verdict.FAIL
    r.note(f"direction {res.direction}; unresolved grid points {res.unresolved_points}")
    return r


def np_majorization_check(a_param: float, s0: float, s_grid, tol: float = 1e-12,
                          consistency: float = 1e-8) -> LemmaReport:
    """Phi0(s) <= sqrt(2/a) for grid points s > s0, given Phi0(s0) = sqrt(2/a)."""
    a, s0 = float(a_param), float(s0)
    inputs = {"a_param": a, "s0": s0, "tol": tol}
    if not A_MIN <= a <= A_MAX:
        return rejected("sec-impr-ball", f"a_param={a} outside [1, pi/3]", inputs=inputs)
    if s0 < 2:
        return rejected("sec-impr-ball", f"s0={s0} < 2", inputs=inputs)
    bound = math.sqrt(2.0 / a)
    p0 = phi0(s0, tol=tol)
    if abs(p0.value - bound) > consistency:
        return rejected("sec-impr-ball", f"inconsistent (a_param, s0): Phi0(s0)={p0.value:.12g} "
                        f"but sqrt(2/a)={bound:.12g}", inputs=inputs)
    r = LemmaReport("sec-impr-ball", inputs=inputs, paper_bound=bound)
    r.add("Phi0(s0)", p0.value, p0.uncertainty)
    margins = []
    worst = None
    for s in sorted(float(x) for x in s_grid):
        if s <= s0:
            continue
        v = phi0(s, tol=tol)
        m = bound - v.value - v.uncertainty
        margins.append(m)
        if worst is None or m < worst[1]:
            worst = (s, m, v)
    if not margins:
        return rejected("sec-impr-ball", "no grid point above s0", inputs=inputs)
    r.add("worst_s", worst[0])
    r.add("Phi0(worst_s)", worst[2].value, worst[2].uncertainty)
    r.margin = min(margins)
    r.verdict = Verdict.PASS if r.margin >= 0 else Verdict.FAIL
    r.note(f"{len(margins)} grid points above s0; s0 itself holds by the consistency check")
    return r

"""Adaptive Gauss-Kronrod quadrature for finite and semi-infinite integrals.

All integrands here are real and vectorised: ``eval`` takes a 1-D array of
abscissae and returns an array of the same shape.  Panels are processed in
batches with numpy and every reduction is done with ``math.fsum`` in panel
order, so results are bit-reproducible.

Tails of ``[0, inf)`` integrals are controlled by one of three mechanisms:

* a ``tail_estimate`` callable returning ``(value, bound)`` for the mass
  beyond a cutoff (see :class:`PeriodicTail` and :class:`TrigPowerTail`);
* a power envelope ``tail_model = (c, p)`` with ``|f(t)| <= c t**-p``;
* for alternating lobe series, a ``period_hint`` alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

# 15-point Kronrod nodes (non-negative half) and weights, with the embedded
# 7-point Gauss weights on the odd-indexed nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps
DEFAULT_MAX_PANELS = 2_000_000


class QuadratureError(ValueError):
    """Raised for integrals that cannot be set up (bad tails, NaNs, bounds)."""


@dataclass(frozen=True)
class Integrand:
    """A real function on ``(0, inf)`` plus the hints the integrators use.

    ``singularity_hint = (c0, c2, r4)`` asserts ``|f(t) - c0 - c2 t^2| <= r4 t^4``
    near 0; the integrator then replaces ``[0, eps]`` by the Taylor model.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    singularity_hint: Optional[tuple[float, float, float]] = None
    period_hint: Optional[float] = None
    tail_model: Optional[tuple[float, float]] = None
    tail_estimate: Optional["TailEstimate"] = None


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_est: float
    tail_bound: float = 0.0
    cutoff: float = math.inf
    panels: int = 0
    converged: bool = True

    @property
    def uncertainty(self) -> float:
        return self.abs_error_est + self.tail_bound

    def scaled(self, factor: float) -> "QuadResult":
        f = abs(factor)
        return QuadResult(self.value * factor, self.abs_error_est * f,
                          self.tail_bound * f, self.cutoff, self.panels, self.converged)


def _kronrod(f: Callable, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise QuadratureError(f"integrand returned a non-finite value at t={bad!r}")
    k = half * (y @ _WEIGHTS_K)
    g = half * (y @ _WEIGHTS_G)
    resabs = np.abs(half) * (np.abs(y) @ _WEIGHTS_K)
    # raw Kronrod-Gauss difference: pessimistic for smooth panels but it does
    # not miss kinks the way QUADPACK's rescaled estimate can
    err = np.maximum(np.abs(k - g), 50.0 * _EPS * resabs)
    return k, err


def _adaptive(f: Callable, edges: np.ndarray, tol: float, max_panels: int):
    """Integrate over consecutive panels given by ``edges``.

    Returns (value, error, panel_count, converged).
    """
    lo, hi = edges[:-1].astype(float), edges[1:].astype(float)
    length = float(hi[-1] - lo[0])
    done_val: list[np.ndarray] = []
    done_err: list[np.ndarray] = []
    done_lo: list[np.ndarray] = []
    n_panels = 0
    converged = True
    while lo.size:
        val, err = _kronrod(f, lo, hi)
        n_panels += lo.size
        pending = float(np.sum(err))
        settled = math.fsum(float(np.sum(e)) for e in done_err)
        if settled + pending <= tol:
            done_val.append(val); done_err.append(err); done_lo.append(lo)
            break
        allowed = tol * (hi - lo) / length
        split = err > allowed
        # tiny panels cannot be refined further in double precision
        split &= (hi - lo) > 64 * _EPS * np.maximum(np.abs(lo), np.abs(hi))
        keep = ~split
        done_val.append(val[keep]); done_err.append(err[keep]); done_lo.append(lo[keep])
        if not split.any():
            converged = False
            break
        if n_panels + 2 * int(split.sum()) > max_panels:
            done_val.append(val[split]); done_err.append(err[split]); done_lo.append(lo[split])
            converged = False
            break
        slo, shi = lo[split], hi[split]
        smid = 0.5 * (slo + shi)
        lo = np.concatenate([slo, smid])
        hi = np.concatenate([smid, shi])
    lows = np.concatenate(done_lo)
    order = np.argsort(lows, kind="stable")
    vals = np.concatenate(done_val)[order]
    errs = np.concatenate(done_err)[order]
    total_err = math.fsum(errs.tolist())
    if total_err > tol:
        converged = False
    return math.fsum(vals.tolist()), total_err, n_panels, converged


def _patch_origin(f: Integrand, a: float, tol: float, b: float):
    """Taylor patch on [0, eps] for removable singularities at 0."""
    if f.singularity_hint is None or a != 0.0:
        return a, 0.0, 0.0
    c0, c2, r4 = f.singularity_hint
    if r4 <= 0:
        eps = min(1e-3, 0.5 * (b - a))
    else:
        eps = min((0.5 * tol * 0.1 / r4) ** 0.2, 1e-2, 0.5 * (b - a))
    value = c0 * eps + c2 * eps ** 3 / 3.0
    err = r4 * eps ** 5 / 5.0
    return eps, value, err


def integrate_finite(f: Integrand, a: float, b: float, tol: float = 1e-10,
                     breakpoints: Optional[Sequence[float]] = None,
                     max_panels: int = DEFAULT_MAX_PANELS) -> QuadResult:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    If ``f.period_hint`` is set the interval is pre-split at its multiples.
    Non-convergence is reported via ``converged=False``, never raised.
    """
    if not a < b:
        raise QuadratureError(f"need a < b, got a={a}, b={b}")
    if not tol > 0:
        raise QuadratureError("tol must be positive")
    start, patch_val, patch_err = _patch_origin(f, a, tol, b)
    edges = _edges(start, b, f.period_hint, breakpoints)
    val, err, n, ok = _adaptive(f.eval, edges, tol - patch_err if tol > 2 * patch_err else tol / 2,
                                max_panels)
    total_err = err + patch_err
    return QuadResult(val + patch_val, total_err, 0.0, b, n, ok and total_err <= tol)


def _edges(a: float, b: float, period: Optional[float], extra: Optional[Sequence[float]]):
    pts = [a, b]
    if period:
        k0 = math.floor(a / period) + 1
        k1 = math.ceil(b / period)
        if k1 > k0:
            mult = np.arange(k0, k1, dtype=float) * period
            pts.extend(mult[(mult > a) & (mult < b)].tolist())
    if extra:
        pts.extend(p for p in extra if a < p < b)
    return np.unique(np.array(pts, dtype=float))


def integrate_semi_infinite(f: Integrand, tol: float = 1e-10, cutoff: Optional[float] = None,
                            max_panels: int = DEFAULT_MAX_PANELS,
                            max_cutoff: float = 1e8,
                            breakpoints: Optional[Sequence[float]] = None) -> QuadResult:
    """Integrate ``f`` over ``[0, inf)``.

    The cutoff ``T`` is chosen so that the tail contributes at most ``tol/2``
    to the uncertainty; the remaining ``tol/2`` goes to ``[0, T]``.
    """
    if not tol > 0:
        raise QuadratureError("tol must be positive")
    if f.tail_model is not None and f.tail_model[1] <= 1:
        raise QuadratureError(f"divergent tail model: exponent p={f.tail_model[1]} <= 1")
    if f.tail_estimate is not None:
        return _with_tail_estimate(f, tol, cutoff, max_panels, max_cutoff, breakpoints)
    if f.tail_model is not None:
        c, p = f.tail_model
        T = cutoff if cutoff is not None else 1.001 * (2.0 * c / (tol * (p - 1))) ** (1.0 / (p - 1))
        ok = True
        if f.period_hint:
            T = math.ceil(T / f.period_hint) * f.period_hint
            if T / f.period_hint > max_panels // 4:
                T = (max_panels // 4) * f.period_hint
                ok = False
        elif T > max_cutoff:
            T, ok = max_cutoff, False
        tail = c * T ** (1 - p) / (p - 1)
        res = integrate_finite(f, 0.0, T, tol / 2, breakpoints, max_panels=max_panels)
        return QuadResult(res.value, res.abs_error_est, tail, T, res.panels,
                          ok and res.converged and tail <= tol / 2)
    if f.period_hint:
        return _alternating_lobes(f, tol, max_panels)
    raise QuadratureError("cannot bound tail: give a tail_model, tail_estimate or period_hint")


def _with_tail_estimate(f, tol, cutoff, max_panels, max_cutoff, breakpoints):
    est = f.tail_estimate
    gran = est.granularity
    P = f.period_hint or gran
    T = cutoff if cutoff is not None else max(gran, 32.0 * P, est.min_cutoff)
    T = math.ceil(T / gran - 1e-9) * gran
    # one panel per period at least, so the period count is capped by the panel budget
    T_max = min(max_cutoff, (max_panels // 2) * P)
    tail_val, tail_bound = est(T, tol / 4)
    while cutoff is None and tail_bound > tol / 2 and 2 * T <= T_max:
        T = math.ceil(2 * T / gran - 1e-9) * gran
        tail_val, tail_bound = est(T, tol / 4)
    res = integrate_finite(f, 0.0, T, tol / 2, breakpoints, max_panels=max_panels)
    return QuadResult(res.value + tail_val, res.abs_error_est, tail_bound, T, res.panels,
                      res.converged and tail_bound <= tol / 2)


def _alternating_lobes(f: Integrand, tol: float, max_panels: int,
                       max_lobes: int = 200_000) -> QuadResult:
    """Sum lobe integrals over [kP, (k+1)P] and accelerate by repeated averaging.

    The error estimate is the spread between the last two averaging levels,
    floored at the plain alternating-series bound divided by 2**levels.
    """
    P = f.period_hint
    batch = 256
    lobes: list[float] = []
    errs: list[float] = []
    panels = 0
    k = 0
    value, tail = math.nan, math.inf
    while k < max_lobes:
        edges = np.arange(k, k + batch + 1, dtype=float) * P
        lo, hi = edges[:-1].copy(), edges[1:]
        pv = pe = 0.0
        if k == 0 and f.singularity_hint is not None:
            eps, pv, pe = _patch_origin(f, 0.0, tol / batch, P)
            lo[0] = eps
        for i in range(batch):
            v, e, m, _ = _adaptive(f.eval, np.array([lo[i], hi[i]]), tol / (4 * batch), max_panels)
            if i == 0:
                v, e = v + pv, e + pe
            lobes.append(v); errs.append(e); panels += m
        k += batch
        value, tail = _euler_average(lobes)
        if tail < tol / 4:
            break
    err = math.fsum(errs)
    return QuadResult(value, err, tail, k * P, panels, err + tail <= tol)


def _euler_average(lobes: list[float]) -> tuple[float, float]:
    partial = np.cumsum(lobes)
    levels = partial[-16:].copy()
    prev = levels
    depth = 0
    while levels.size > 2:
        prev = levels
        levels = 0.5 * (levels[1:] + levels[:-1])
        depth += 1
    spread = abs(float(levels[-1] - prev[-1]))
    return float(levels[-1]), max(spread, abs(lobes[-1]) / 2 ** depth)


# ---------------------------------------------------------------------------
# tail models
# ---------------------------------------------------------------------------

class TailEstimate:
    """Callable ``(T, tol) -> (value, bound)`` for ``int_T^inf f``.

    ``granularity`` constrains admissible cutoffs to its integer multiples.
    """

    granularity: float = 1.0
    min_cutoff: float = 0.0

    def __call__(self, T: float, tol: float) -> tuple[float, float]:  # pragma: no cover
        raise NotImplementedError


@dataclass(frozen=True)
class PowerLogWeight:
    """w(t) = t**-p * log(t)**k for k in {0, 1, 2}; eventually monotone with all derivatives."""

    p: float
    k: int = 0

    def __call__(self, t: float) -> float:
        return t ** -self.p * math.log(t) ** self.k

    def _derivative_coeffs(self, order: int) -> np.ndarray:
        # d^order/dt^order w = t^(-p-order) * sum_i c[i] log(t)^i
        c = np.zeros(self.k + 1)
        c[self.k] = 1.0
        q = self.p
        for _ in range(order):
            new = -q * c
            new[:-1] += np.arange(1, len(c)) * c[1:]
            c, q = new, q + 1.0
        return c

    def derivative(self, t: float, order: int = 1) -> float:
        c = self._derivative_coeffs(order)
        L = math.log(t)
        return t ** (-self.p - order) * math.fsum(ci * L ** i for i, ci in enumerate(c))

    def tail(self, T: float) -> float:
        q = self.p - 1.0
        L = math.log(T)
        base = T ** -q
        if self.k == 0:
            return base / q
        if self.k == 1:
            return base * (L / q + 1.0 / q ** 2)
        if self.k == 2:
            return base * (L * L / q + 2.0 * L / q ** 2 + 2.0 / q ** 3)
        raise ValueError("k must be 0, 1 or 2")

    def settled_from(self, order: int = 2) -> float:
        """Point after which w and its first ``order`` derivatives keep a fixed sign."""
        if self.k == 0:
            return 1.0
        worst = 0.0
        for j in range(order + 1):
            roots = np.roots(self._derivative_coeffs(j)[::-1])
            real = roots[np.abs(roots.imag) < 1e-12].real
            if real.size:
                worst = max(worst, float(real.max()))
        return math.exp(worst + 1e-9) + 1.0


class PeriodicTail(TailEstimate):
    """Tail of ``sum_i g_i(t) w_i(t)`` with ``g_i`` sharing period ``Q``.

    Repeated integration by parts gives
    ``int_T^inf g w = m_0 W(T) + sum_{j=1}^{K-1} (-1)^(j-1) m_j w^(j-1)(T) + E``,
    ``|E| <= max|H_K| |w^(K-1)(T)|``,
    where ``H_j`` is the primitive of ``H_(j-1) - m_(j-1)`` vanishing at ``T``
    (a multiple of ``Q``), ``H_0 = g`` and ``m_j`` the mean of ``H_j``.  The
    order ``K <= max_order`` with the smallest bound is used.
    """

    def __init__(self, terms: Sequence[tuple[Callable, PowerLogWeight]], period: float,
                 split: Optional[float] = None, grid_per_split: int = 64, max_order: int = 8):
        self.terms = list(terms)
        self.granularity = float(period)
        self.split = float(split or period)
        self.max_order = max_order
        self.min_cutoff = max(w.settled_from(max_order) for _, w in self.terms)
        self.grid_per_split = grid_per_split
        self._stats: dict[int, tuple[np.ndarray, np.ndarray, float]] = {}

    def _period_stats(self, i: int):
        """(means m_0..m_K, sup|H_1|..sup|H_K|, quadrature error of m_0)."""
        cached = self._stats.get(i)
        if cached is not None:
            return cached
        g, _ = self.terms[i]
        Q, P = self.granularity, self.split
        nlobes = max(1, int(round(Q / P)))
        fine = max(1, min(self.grid_per_split, int(1e6 // (15 * nlobes))))
        edges = np.linspace(0.0, Q, nlobes * fine + 1)
        lo, hi = edges[:-1], edges[1:]
        vals, errs = _kronrod(g, lo, hi)
        dx = hi - lo
        means = [math.fsum(vals.tolist()) / Q]
        sups = []
        # H_1 is exact at the nodes; higher primitives use the trapezoid rule
        H = np.concatenate([[0.0], np.cumsum(vals - means[0] * dx)])
        for _ in range(self.max_order):
            sups.append(float(np.max(np.abs(H))))
            seg = 0.5 * (H[1:] + H[:-1]) * dx
            means.append(math.fsum(seg.tolist()) / Q)
            H = np.concatenate([[0.0], np.cumsum(seg - means[-1] * dx)])
        quad_err = math.fsum(errs.tolist())
        stats = (np.array(means), np.array(sups), quad_err / Q)
        self._stats[i] = stats
        return stats

    def __call__(self, T: float, tol: float) -> tuple[float, float]:
        value = 0.0
        bound = 0.0
        for i, (g, w) in enumerate(self.terms):
            means, sups, mean_err = self._period_stats(i)
            W = w.tail(T)
            partial = means[0] * W
            best = (math.inf, partial)
            # grid sup of H_j underestimates the true sup slightly
            for K in range(1, self.max_order + 1):
                b = 1.25 * sups[K - 1] * abs(w.derivative(T, K - 1) if K > 1 else w(T))
                if b < best[0]:
                    best = (b, partial)
                if K < self.max_order:
                    d = w(T) if K == 1 else w.derivative(T, K - 1)
                    partial += (-1) ** (K - 1) * means[K] * d
            b, v = best
            value += v
            bound += b + mean_err * abs(W) + 1e-3 * abs(v - means[0] * W)
        return value, bound


def _cos_sin_power_tails(omega: np.ndarray, T: float, p: int):
    """Return (J, K) with J = int_T^inf cos(w t) t^-p dt, K the sine analogue."""
    from scipy.special import sici

    omega = np.asarray(omega, dtype=float)
    pos = omega > 0
    J = np.zeros_like(omega)
    K = np.zeros_like(omega)
    w = omega[pos]
    si, ci = sici(w * T)
    Jp = -ci
    Kp = np.pi / 2 - si
    for q in range(2, p + 1):
        c = np.cos(w * T) * T ** (1 - q) / (q - 1)
        s = np.sin(w * T) * T ** (1 - q) / (q - 1)
        Jp, Kp = c - w / (q - 1) * Kp, s + w / (q - 1) * Jp
    J[pos] = Jp
    K[pos] = Kp
    if p > 1:
        J[~pos] = T ** (1 - p) / (p - 1)
    return J, K


class TrigPowerTail(TailEstimate):
    """Exact tail of ``(sum_k c_k cos(w_k t) + d_k sin(v_k t)) * t**-p`` for integer p >= 1."""

    def __init__(self, cos_terms: tuple[np.ndarray, np.ndarray],
                 sin_terms: tuple[np.ndarray, np.ndarray], power: int, granularity: float = 1.0):
        if power < 1:
            raise QuadratureError("trig tail needs power >= 1")
        if power == 1 and np.any((np.asarray(cos_terms[0]) == 0) & (np.asarray(cos_terms[1]) != 0)):
            raise QuadratureError("constant term is not integrable against 1/t")
        self.cos_terms = cos_terms
        self.sin_terms = sin_terms
        self.power = int(power)
        self.granularity = granularity

    def __call__(self, T: float, tol: float) -> tuple[float, float]:
        cw, cc = self.cos_terms
        sw, sc = self.sin_terms
        J, _ = _cos_sin_power_tails(cw, T, self.power)
        _, K = _cos_sin_power_tails(sw, T, self.power)
        terms = np.concatenate([cc * J, sc * K])
        value = math.fsum(terms.tolist())
        scale = math.fsum(np.abs(np.concatenate([cc, sc])).tolist()) * T ** (1 - self.power)
        return value, 1e3 * _EPS * scale * (1 + len(terms)) ** 0.5


class BoundTail(TailEstimate):
    """Tail known only to lie in ``[lo(T), hi(T)]``; reports the midpoint."""

    def __init__(self, lo: Callable[[float], float], hi: Callable[[float], float],
                 granularity: float = 1.0):
        self.lo, self.hi = lo, hi
        self.granularity = granularity

    def __call__(self, T: float, tol: float) -> tuple[float, float]:
        a, b = self.lo(T), self.hi(T)
        return 0.5 * (a + b), 0.5 * abs(b - a)


class SumTail(TailEstimate):
    def __init__(self, *parts: TailEstimate, granularity: Optional[float] = None):
        self.parts = parts
        self.granularity = granularity or max(p.granularity for p in parts)
        self.min_cutoff = max(p.min_cutoff for p in parts)

    def __call__(self, T: float, tol: float) -> tuple[float, float]:
        v = b = 0.0
        for p in self.parts:
            pv, pb = p(T, tol / len(self.parts))
            v += pv; b += pb
        return v, b

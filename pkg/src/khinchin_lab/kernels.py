"""Integrand builders shared by the special functions and perturbed functionals.

Two families of one-dimensional integrals cover every functional in the package:

``power_lobe_integral``
    ``int_0^inf |h(u)/u|^s log^k|h(u)/u| du`` with ``h`` periodic, e.g. ``h = sin``
    for Ball's integral or ``h(r) = r * E sinc(R r)`` for radial laws.

``fourier_kernel_integral``
    ``int_0^inf G(phi(u)) u^-2 du`` with ``G(x) = 1 - |x|^s`` or ``|x|^s log|x|``
    and ``phi`` a real characteristic function.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .quad import (BoundTail, Integrand, PeriodicTail, PowerLogWeight, QuadResult,
                   TailEstimate, integrate_finite, integrate_semi_infinite)


def log_abs_from_omc(omc: np.ndarray) -> np.ndarray:
    """log|1 - omc| computed without cancellation when omc is small."""
    omc = np.asarray(omc, dtype=float)
    out = np.empty_like(omc)
    small = omc < 1.0
    out[small] = np.log1p(-omc[small])
    with np.errstate(divide="ignore"):
        out[~small] = np.log(np.abs(1.0 - omc[~small]))
    return out


def _pow_log(x_abs_log: np.ndarray, s: float, k: int) -> np.ndarray:
    """exp(s L) * L**k with the convention 0 at L = -inf."""
    L = x_abs_log
    fin = np.isfinite(L)
    out = np.zeros_like(L)
    out[fin] = np.exp(s * L[fin]) * L[fin] ** k
    return out


def power_lobe_integral(ratio: Callable[[np.ndarray], np.ndarray],
                        h: Callable[[np.ndarray], np.ndarray],
                        period: float, split: float, s: float, order: int,
                        hint: tuple[float, float, float], tol: float,
                        bound_tail: Optional[tuple[float, float]] = None) -> QuadResult:
    """``int_0^inf |ratio|^s log^order|ratio| du`` where ``ratio(u) = h(u)/u``.

    ``period`` is a period of ``|h|`` (used for the tail) and ``split`` the
    panel width (distance between zeros of ``h``).  With ``period=None`` the
    tail falls back to ``bound_tail = (C, p)``: ``|ratio| <= C/u``.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")

    def f(u):
        with np.errstate(divide="ignore"):
            L = np.log(np.abs(ratio(u)))
        return _pow_log(L, s, order)

    tail: TailEstimate
    if period is not None:
        def g(j):
            def gj(u):
                with np.errstate(divide="ignore"):
                    L = np.log(np.abs(h(u)))
                return _pow_log(L, s, j)
            return gj

        if order == 0:
            terms = [(g(0), PowerLogWeight(s, 0))]
        elif order == 1:
            terms = [(g(1), PowerLogWeight(s, 0)), (_neg(g(0)), PowerLogWeight(s, 1))]
        else:
            terms = [(g(2), PowerLogWeight(s, 0)), (_scale(g(1), -2.0), PowerLogWeight(s, 1)),
                     (g(0), PowerLogWeight(s, 2))]
        tail = PeriodicTail(terms, period, split)
    else:
        C, _ = bound_tail
        w = PowerLogWeight(s, order)
        # |ratio|^s |log|ratio||^k <= (C/u)^s (log(u/C))^k for u > e*C, k <= 2
        sign = (-1.0) ** order

        def hi(T):
            return C ** s * (w.tail(T) if order == 0 else _plw_tail_shift(s, order, T, C))

        tail = BoundTail(lambda T: min(0.0, sign * hi(T)), lambda T: max(0.0, sign * hi(T)),
                         granularity=split)
        tail.min_cutoff = math.e * C + split
    return integrate_semi_infinite(
        Integrand(f, singularity_hint=hint, period_hint=split, tail_estimate=tail), tol,
        breakpoints=peak_breakpoints(s, split))


def peak_breakpoints(s: float, upto: float) -> list[float]:
    """Geometric breakpoints resolving a peak of width ~ 1/sqrt(s) at the origin."""
    w = 1.0 / math.sqrt(s)
    pts = [w * 2.0 ** k for k in range(-3, 60)]
    return [p for p in pts if p < upto]


def _plw_tail_shift(s, k, T, C):
    # int_T^inf u^-s log(u/C)^k du
    return C ** (1 - s) * PowerLogWeight(s, k).tail(T / C)


def _neg(g):
    return lambda u: -g(u)


def _scale(g, c):
    return lambda u: c * g(u)


def fourier_kernel_integral(omc: Callable[[np.ndarray], np.ndarray], s: float, kind: str,
                            period: Optional[float], split: float,
                            hint: tuple[float, float, float], tol: float,
                            decay: Optional[float] = None) -> QuadResult:
    """``int_0^inf G(phi(u)) u^-2 du`` with ``phi = 1 - omc``.

    kind="value": G(x) = 1 - |x|^s;  kind="log": G(x) = |x|^s log|x|.
    Tails use the period of ``|phi|`` when known, else the decay bound
    ``|phi(u)| <= decay/u``.
    """
    if kind == "value":
        def G(u):
            L = log_abs_from_omc(omc(u))
            with np.errstate(over="ignore"):
                return -np.expm1(s * L)
    elif kind == "log":
        def G(u):
            return _pow_log(log_abs_from_omc(omc(u)), s, 1)
    else:
        raise ValueError(f"unknown kernel kind {kind!r}")

    def f(u):
        return G(u) / (u * u)

    if s > 1e3:
        # |phi|^s has spikes of width ~ 1/sqrt(s) at the maxima of |phi|
        split = split / math.ceil(math.sqrt(s) / 30.0)

    if period is not None:
        tail: TailEstimate = PeriodicTail([(G, PowerLogWeight(2.0))], period, split)
    elif decay is not None:
        # |phi|^s u^-2 <= decay^s u^(-2-s); log factor bounded by 1/(e s) * ... use |x^s log x| <= x^(s-1)/(e) for x<1
        if kind == "value":
            def lo(T):
                return 1.0 / T - decay ** s * T ** (-1 - s) / (1 + s)

            def hi(T):
                return 1.0 / T
        else:
            def lo(T):
                return -decay ** (s - 1) * T ** (-s) / (math.e * s)

            def hi(T):
                return 0.0
        tail = BoundTail(lo, hi, granularity=split)
        tail.min_cutoff = 2 * decay
    else:
        raise ValueError("need a period or a decay constant to control the tail")
    return integrate_semi_infinite(
        Integrand(f, singularity_hint=hint, period_hint=split, tail_estimate=tail), tol,
        breakpoints=peak_breakpoints(s, split))


def two_scale_value_integral(k1: float, k2: float, s: float,
                             hint: tuple[float, float, float], tol: float,
                             max_cutoff_periods: int = 2 ** 20) -> QuadResult:
    """``int_0^inf (1 - |cos(k1 u) cos(k2 u)|^s) u^-2 du`` for ``0 < k2 << k1``.

    |phi| then has period ~ pi/k2, too long to sample.  Beyond a cutoff ``T``
    (a multiple of the fast period ``p = pi/k1``) write ``A = |cos k1 u|^s``
    and ``phi(u) = |cos k2 u|^s u^-2``.  Two integrations by parts against
    the fast period give

        int_T^inf A phi = M int_T^inf phi + m1 phi(T) + E,
        |E| <= sup|H2| * TV(phi' on [T, inf)),

    and ``int_T^inf phi = k2 J(k2 T)`` with ``J(x) = int_x^inf |cos v|^s v^-2 dv``,
    a short-period integral.
    """
    if not (0 < k2 < k1 and s >= 1):
        raise ValueError("need 0 < k2 < k1 and s >= 1")
    p = math.pi / k1

    def G(u):
        # accurate near 0 via 1 - cos a cos b = 2 sin^2(a/2) + cos a * 2 sin^2(b/2)
        a, b = k1 * u, k2 * u
        small = 2.0 * np.sin(0.5 * a) ** 2 + np.cos(a) * 2.0 * np.sin(0.5 * b) ** 2
        L = log_abs_from_omc(small)
        with np.errstate(over="ignore"):
            return -np.expm1(s * L)

    def A(u):
        with np.errstate(divide="ignore"):
            L = np.log(np.abs(np.cos(k1 * u)))
        return _pow_log(L, s, 0)

    fast = PeriodicTail([(A, PowerLogWeight(2.0))], p, p, grid_per_split=1024, max_order=2)
    means, sups, mean_err = fast._period_stats(0)
    M, m1, h2 = float(means[0]), float(means[1]), float(sups[1])
    h2 *= 1.25  # grid sup underestimates the true sup slightly

    def remainder(T):
        # TV(phi') <= int |phi''|; per slow period int |B''| <= 4 s / k2
        tv = (4 * s * k2 / T ** 2 + 4 * s * k2 ** 2 / (math.pi * T)
              + 2 * s * k2 / T ** 2 + 2.0 / T ** 3)
        return h2 * tv

    split = p / 2
    if s > 1e3:
        split = split / math.ceil(math.sqrt(s) / 30.0)
    T = 64.0 * p
    while remainder(T) > tol / 8 and T < max_cutoff_periods * p:
        T *= 2.0
    phi_T = abs(math.cos(k2 * T)) ** s / T ** 2

    J = _cos_power_tail(s, k2 * T, tol / (8 * max(M, 1e-300) * k2))
    tail = 1.0 / T - (M * k2 * J.value + m1 * phi_T)
    tail_bound = remainder(T) + M * k2 * J.uncertainty + mean_err * k2 * (J.value + 1.0)

    head = integrate_finite(Integrand(lambda u: G(u) / (u * u), singularity_hint=hint,
                                      period_hint=split), 0.0, T, tol / 2,
                            peak_breakpoints(s, split))
    return QuadResult(head.value + tail, head.abs_error_est, tail_bound, T, head.panels,
                      head.converged and J.converged and tail_bound <= tol / 2)


def _cos_power_tail(s: float, x: float, tol: float) -> QuadResult:
    """``int_x^inf |cos v|^s v^-2 dv`` for ``x > 0``."""
    def B(v):
        with np.errstate(divide="ignore"):
            L = np.log(np.abs(np.cos(v)))
        return _pow_log(L, s, 0)

    tail = PeriodicTail([(B, PowerLogWeight(2.0))], math.pi, math.pi / 2)
    T = math.pi * math.ceil(max(64.0 * math.pi, tail.min_cutoff, 2 * x) / math.pi)
    val, bound = tail(T, tol / 4)
    while bound > tol / 2 and T < 2 ** 24:
        T *= 2.0
        val, bound = tail(T, tol / 4)
    split = math.pi / 2
    if s > 1e3:
        split = split / math.ceil(math.sqrt(s) / 30.0)
    # 1/v^2 varies on the scale x near the left end; peaks of width s^-1/2 at k pi
    bps = [x * 2.0 ** k for k in range(1, 60) if x * 2.0 ** k < split]
    bps += [k * math.pi + d / math.sqrt(s) for k in range(1, 64) for d in (-1.0, 1.0)]
    head = integrate_finite(Integrand(lambda v: B(v) / (v * v), period_hint=split), x, T,
                            tol / 2, bps)
    return QuadResult(head.value + val, head.abs_error_est, bound, T, head.panels,
                      head.converged and bound <= tol / 2)


#: 1/(2 pi^2): constant of the Fourier formula for E|Y|^-1 with Y in R^3
BETA_M1_3 = 1.0 / (2.0 * math.pi ** 2)


def fold_radial(radial_integral: float) -> float:
    """``int_{R^3} g(|t|) |t|^-2 dt`` from ``int_0^inf g(r) dr``."""
    return 4.0 * math.pi * radial_integral

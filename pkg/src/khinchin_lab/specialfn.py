"""Haagerup's and Ball's special functions and their derivatives.

``psi0``  -- Haagerup's function, by the Gamma ratio, the infinite product and
             direct quadrature of the Fourier integral.
``ball_I`` -- ``int_0^inf |sin u / u|^s du`` and its first two s-derivatives.
``phi0``  -- Ball's function ``(2 sqrt(s) / pi) * ball_I(s)`` and its derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import poch, zeta

from .kernels import fourier_kernel_integral, power_lobe_integral

SQRT2 = math.sqrt(2.0)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
SQRT_6_OVER_PI = math.sqrt(6.0 / math.pi)

#: min over [2, 3] of psi0' is at least this
PSI0_PRIME_LOWER = (zeta(3.0) - 1.0) / (8.0 * SQRT2)
#: psi0(3) - psi0(2)
PSI0_GAP_3_2 = 4.0 / (math.pi * math.sqrt(3.0)) - 1.0 / SQRT2
#: |I''(s)| <= this for s >= 2
BALL_I2_BOUND = 48.0 * math.exp(-2.0)

DEFAULT_TOL = 1e-10
ASYMPTOTIC_FROM = 1e5


class Method(str, Enum):
    GAMMA = "gamma_closed_form"
    PRODUCT = "infinite_product"
    QUADRATURE = "direct_quadrature"
    SERIES = "derivative_series"
    DERIVATIVE_QUADRATURE = "derivative_quadrature"
    ASYMPTOTIC = "large_s_asymptotic"


@dataclass(frozen=True)
class SpecialValue:
    s: float
    value: float
    method: Method
    uncertainty: float
    converged: bool = True

    def __post_init__(self):
        for name in ("s", "value", "uncertainty"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "converged", bool(self.converged))

    def as_dict(self) -> dict:
        return {"s": self.s, "value": self.value, "method": self.method.value,
                "uncertainty": self.uncertainty, "converged": self.converged}


def _check_positive(s: float) -> float:
    s = float(s)
    if not s > 0 or not math.isfinite(s):
        raise ValueError(f"s must be positive and finite, got {s}")
    return s


# ---------------------------------------------------------------------------
# Haagerup's function
# ---------------------------------------------------------------------------

def _product_terms(s: float, K: int) -> np.ndarray:
    return 1.0 / (s + 2.0 * np.arange(K, dtype=float) + 1.0) ** 2


def _tail_sum_inv_sq(s: float, K: int) -> tuple[float, float]:
    """sum_{k>=K} (s+2k+1)^-2 by Euler-Maclaurin, with a remainder bound."""
    x = s + 2.0 * K + 1.0
    est = 1.0 / (2.0 * x) + 0.5 / x ** 2 + 1.0 / (3.0 * x ** 3)
    return est, 2.0 / x ** 4


def psi0(s: float, method: Union[Method, str] = Method.GAMMA, tol: float = DEFAULT_TOL,
         K: int | None = None) -> SpecialValue:
    """Haagerup's function ``(2/sqrt(pi s)) Gamma((s+1)/2) / Gamma(s/2)``."""
    s = _check_positive(s)
    method = Method(method)
    if method is Method.GAMMA:
        x = s / 2.0
        if x < RATIO_SERIES_FROM:
            value = 2.0 / math.sqrt(math.pi * s) * poch(x, 0.5)
            return SpecialValue(s, value, method, 2e-14 * value)
        # poch drifts to ~1e-12 relative for large x; the expansion does not
        value = SQRT_2_OVER_PI * _gamma_ratio_series(x)
        return SpecialValue(s, value, method, (4e-16 + 2e-4 / x ** 8) * value)
    if method is Method.PRODUCT:
        if K is None:
            # the Euler-Maclaurin tail correction makes a long head unnecessary
            K = 10 ** 6
        if K < 10:
            raise ValueError("product truncation needs K >= 10")
        y = _product_terms(s, K)
        log_head = 0.5 * float(np.sum(np.log1p(-y)))
        # log(1-y) = -y - y^2/2 - ...; the tail's y^2 part is below y_K * sum y
        tail, tail_err = _tail_sum_inv_sq(s, K)
        y_K = 1.0 / (s + 2.0 * K + 1.0) ** 2
        log_tail = -0.5 * tail
        value = SQRT_2_OVER_PI * math.exp(log_head + log_tail)
        unc = value * (0.5 * tail_err + y_K * tail + 1e-15 * math.sqrt(K) + 4e-16 * abs(log_head))
        return SpecialValue(s, value, method, unc)
    if method is Method.QUADRATURE:
        if s < 1:
            raise ValueError("direct quadrature of psi0 needs s >= 1")
        return _psi0_quadrature(s, tol)
    raise ValueError(f"method {method.value} does not apply to psi0")


#: Gamma(x+1/2) / (Gamma(x) sqrt x) = sum_k c_k x^-k, |c_8| < 2e-4
_RATIO_COEFFS = (1.0, -1 / 8, 1 / 128, 5 / 1024, -21 / 32768, -399 / 262144, 869 / 4194304,
                 39325 / 2 ** 25)
RATIO_SERIES_FROM = 25.0


def _gamma_ratio_series(x: float) -> float:
    acc = 0.0
    for c in reversed(_RATIO_COEFFS):
        acc = acc / x + c
    return acc


def rademacher_omc(u: np.ndarray) -> np.ndarray:
    """1 - cos(u), accurately."""
    return 2.0 * np.sin(0.5 * u) ** 2


def _psi0_quadrature(s: float, tol: float) -> SpecialValue:
    pref = 2.0 / (math.pi * math.sqrt(s))
    # (1 - |cos u|^s) / u^2 = s/2 + (s/12 - s^2/8) u^2 + O(u^4)
    hint = (0.5 * s, s / 12.0 - s * s / 8.0, s ** 3 / 16.0 + s / 40.0)
    res = fourier_kernel_integral(rademacher_omc, s, "value", math.pi, math.pi / 2, hint,
                                  tol / pref).scaled(pref)
    return SpecialValue(s, res.value, Method.QUADRATURE, res.uncertainty, res.converged)


def psi0_prime(s: float, K: int = 10 ** 6) -> SpecialValue:
    """Term-by-term derivative of the product representation."""
    s = _check_positive(s)
    base = psi0(s, Method.GAMMA)
    x = s + 2.0 * np.arange(K, dtype=float) + 1.0
    terms = x ** -3 / (1.0 - x ** -2)
    head = float(np.sum(terms))
    # tail: sum_{k>=K} x_k^-3 (1 + O(x^-2)), x_k = s+2k+1
    xK = s + 2.0 * K + 1.0
    tail = 1.0 / (4.0 * xK ** 2) + 0.5 / xK ** 3
    tail_err = 2.0 / xK ** 4
    value = base.value * (head + tail)
    unc = base.uncertainty * (head + tail) + base.value * (tail_err + 1e-15 * head)
    return SpecialValue(s, value, Method.SERIES, unc)


def central_difference(fn, s: float, h: float = 1e-5) -> float:
    """Central difference with one Richardson step (h and h/2)."""
    d1 = (fn(s + h) - fn(s - h)) / (2 * h)
    d2 = (fn(s + h / 2) - fn(s - h / 2)) / h
    return (4 * d2 - d1) / 3


# ---------------------------------------------------------------------------
# Ball's integral
# ---------------------------------------------------------------------------

def _sinc(u):
    return np.sinc(u / np.pi)


def ball_I(s: float, order: int = 0, tol: float = DEFAULT_TOL) -> SpecialValue:
    """``int_0^inf |sin u/u|^s log^order|sin u/u| du``.

    order 0 is I(s), order 1 is I'(s), order 2 is I''(s) (nonnegative); for
    order 2 and s >= 2 the bound ``48 e^-2`` must hold.
    """
    s = float(s)
    if not s > 1:
        raise ValueError(f"I(s) diverges for s <= 1 (got s={s})")
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    if order == 0:
        hint = (1.0, -s / 6.0, s * s / 36.0 + s / 90.0)
    elif order == 1:
        hint = (0.0, -1.0 / 6.0, s / 18.0 + 1.0 / 90.0)
    else:
        hint = (0.0, 0.0, 1.0 / 18.0)
    res = power_lobe_integral(_sinc, np.sin, math.pi, math.pi, s, order, hint, tol)
    method = Method.QUADRATURE if order == 0 else Method.DERIVATIVE_QUADRATURE
    return SpecialValue(s, res.value, method, res.uncertainty, res.converged)


# ---------------------------------------------------------------------------
# Ball's function
# ---------------------------------------------------------------------------

def _phi0_asymptotic(s: float, order: int) -> SpecialValue:
    # Laplace expansion of I(s): sqrt(3 pi / 2s) (1 - 3/(20 s) - 13/(1120 s^2) + O(s^-3))
    if order == 0:
        value = SQRT_6_OVER_PI * (1.0 - 3.0 / (20.0 * s) - 13.0 / (1120.0 * s * s))
        unc = SQRT_6_OVER_PI / s ** 3
    else:
        value = SQRT_6_OVER_PI * (3.0 / (20.0 * s * s) + 26.0 / (1120.0 * s ** 3))
        unc = 3.0 * SQRT_6_OVER_PI / s ** 4
    return SpecialValue(s, value, Method.ASYMPTOTIC, unc)


def phi0(s: float, order: int = 0, tol: float = DEFAULT_TOL,
         method: Union[Method, str, None] = None) -> SpecialValue:
    """Ball's function ``(2 sqrt(s)/pi) I(s)`` (order 0) or its derivative (order 1).

    ``method=None`` picks direct quadrature below ``ASYMPTOTIC_FROM`` and the
    large-s expansion above it.
    """
    s = float(s)
    if not s > 1:
        raise ValueError(f"phi0 needs s > 1 (got s={s})")
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    if method is None:
        method = Method.ASYMPTOTIC if s >= ASYMPTOTIC_FROM else Method.QUADRATURE
    method = Method(method)
    if method is Method.ASYMPTOTIC:
        return _phi0_asymptotic(s, order)
    if method is not Method.QUADRATURE:
        raise ValueError(f"method {method.value} does not apply to phi0")
    rs = math.sqrt(s)
    I0 = ball_I(s, 0, tol * math.pi / (4 * rs))
    if order == 0:
        pref = 2.0 * rs / math.pi
        return SpecialValue(s, pref * I0.value, method, pref * I0.uncertainty, I0.converged)
    I1 = ball_I(s, 1, tol * math.pi / (4 * rs))
    value = 2.0 / math.pi * (I0.value / (2 * rs) + rs * I1.value)
    unc = 2.0 / math.pi * (I0.uncertainty / (2 * rs) + rs * I1.uncertainty)
    return SpecialValue(s, value, Method.DERIVATIVE_QUADRATURE, unc,
                        I0.converged and I1.converged)


def sinc_gauss_bound_holds(u: np.ndarray) -> np.ndarray:
    """Elementwise check of sin(u)/u <= exp(-u^2/6) on (0, pi)."""
    u = np.asarray(u, dtype=float)
    return _sinc(u) <= np.exp(-u * u / 6.0) * (1 + 4 * np.finfo(float).eps)


def sulogu_gap(u: np.ndarray, v: np.ndarray, s: np.ndarray) -> np.ndarray:
    """|u - v| - |u^s log u - v^s log v|; nonnegative for s >= 2, u, v in (0, 1)."""
    u, v, s = (np.asarray(x, dtype=float) for x in (u, v, s))
    return np.abs(u - v) - np.abs(u ** s * np.log(u) - v ** s * np.log(v))

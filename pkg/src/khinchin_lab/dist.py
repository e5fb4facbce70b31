"""Symmetric laws on R, rotationally invariant laws on R^3 and unit vectors.

Every family wires its characteristic function, moments and Wasserstein-2
distance to the reference law (Rademacher sign, resp. uniform point on S^2)
analytically.  Samplers draw from ``numpy.random.Generator(Philox(seed))`` so
that the same seed reproduces the same stream on every platform.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from .report import LemmaReport, judge

THM1_DELTA0 = 1e-4
SMALL_COEFF = 1.0 / math.sqrt(2.0)


def rng(seed: int) -> np.random.Generator:
    """Counter-based generator; ``seed`` is any 64-bit integer."""
    return np.random.Generator(np.random.Philox(int(seed) % 2 ** 64))


def one_minus_sinc(x: np.ndarray) -> np.ndarray:
    """1 - sin(x)/x without cancellation."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x < 0.05
    xs = x[small] ** 2
    out[small] = xs / 6.0 * (1.0 - xs / 20.0 * (1.0 - xs / 42.0 * (1.0 - xs / 72.0)))
    xl = x[~small]
    out[~small] = 1.0 - np.sin(xl) / xl
    return out


def _atoms_abs_period(xs: Sequence[Fraction]) -> Optional[float]:
    """Period of |sum_k p_k cos(x_k t)| for rational frequencies x_k."""
    d = reduce(math.lcm, (x.denominator for x in xs), 1)
    nums = [x.numerator * (d // x.denominator) for x in xs]
    g = reduce(math.gcd, nums)
    odd = all((n // g) % 2 == 1 for n in nums)
    return math.pi * d / g * (1 if odd else 2)


def _as_fraction(x: float) -> Fraction:
    fr = Fraction(repr(float(x))).limit_denominator(10 ** 9)
    if abs(float(fr) - x) > 4e-16 * abs(x):
        raise ValueError(f"atom {x!r} has no short rational form")
    return fr


# ---------------------------------------------------------------------------
# one-dimensional laws
# ---------------------------------------------------------------------------

class Family1D(str, Enum):
    RADEMACHER = "rademacher"
    TWO_POINT = "two_point"
    FOUR_POINT = "four_point"
    UNIFORM_NOISE = "uniform_noise"


@dataclass(frozen=True)
class Distribution1D:
    """Symmetric law of ``X``; ``|X|`` is either discrete or ``1 + c U``, U uniform on [-1, 1].

    ``cf`` is real and even.  Discrete laws carry their atoms as exact
    fractions so that the period of ``|cf|`` is known exactly.
    """

    name: str
    kind: Family1D
    param: float
    atoms: Optional[tuple[tuple[Fraction, float], ...]] = None  # (|x|, prob) pairs
    noise: float = 0.0
    seed: int = 0
    w2_exactly_zero: bool = False

    # ---- characteristic function -------------------------------------------------
    def cf(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.atoms is not None:
            return sum(p * np.cos(float(x) * t) for x, p in self.atoms)
        c = self.noise
        return np.cos(t) * np.sinc(c * t / np.pi)

    def one_minus_cf(self, t) -> np.ndarray:
        """1 - cf(t), accurate when cf(t) is close to 1."""
        t = np.asarray(t, dtype=float)
        if self.atoms is not None:
            return sum(p * 2.0 * np.sin(0.5 * float(x) * t) ** 2 for x, p in self.atoms)
        c = self.noise
        # 1 - cos t sinc(ct) = (1 - cos t) + cos t (1 - sinc(ct))
        return 2.0 * np.sin(0.5 * t) ** 2 + np.cos(t) * one_minus_sinc(c * t)

    def cf_deviation(self, t) -> np.ndarray:
        """cf(t) - cos(t) in product form, accurate to a few ulps of the result."""
        t = np.asarray(t, dtype=float)
        if self.atoms is not None:
            return sum(-2.0 * p * np.sin(0.5 * float(x + 1) * t) * np.sin(0.5 * float(x - 1) * t)
                       for x, p in self.atoms)
        return -np.cos(t) * one_minus_sinc(self.noise * t)

    @property
    def abs_period(self) -> Optional[float]:
        """A period of |cf|, or None if |cf| is not periodic."""
        if self.atoms is None:
            return None
        return _atoms_abs_period([x for x, _ in self.atoms])

    @property
    def cos_product(self) -> Optional[tuple[float, float]]:
        """(k1, k2) with cf(t) = cos(k1 t) cos(k2 t), for two equiprobable atoms."""
        if self.atoms is None or len(self.atoms) != 2:
            return None
        (x1, p1), (x2, p2) = self.atoms
        if p1 != 0.5 or p2 != 0.5:
            return None
        k1, k2 = float(x1 + x2) / 2, abs(float(x1 - x2)) / 2
        return (k1, k2) if 0 < k2 < k1 else None

    @property
    def zero_spacing(self) -> float:
        """Panel width for quadrature: a divisor of ``abs_period`` near pi/(2 E|X|)."""
        P = self.abs_period
        m1 = self.abs_moment(1)
        if P is None:
            return math.pi / (2.0 * self.max_abs)
        return P / max(1, round(P * 2.0 * m1 / math.pi))

    @property
    def decay(self) -> Optional[float]:
        """C with |cf(t)| <= C/t, when it exists."""
        if self.atoms is None and self.noise > 0:
            return 1.0 / self.noise
        return None

    @property
    def max_abs(self) -> float:
        if self.atoms is not None:
            return max(float(x) for x, _ in self.atoms)
        return 1.0 + self.noise

    # ---- moments ----------------------------------------------------------------
    def abs_moment(self, p: float) -> float:
        """E|X|^p."""
        if self.atoms is not None:
            return math.fsum(q * float(x) ** p for x, q in self.atoms)
        c = self.noise
        if c == 0:
            return 1.0
        if p == -1:
            return (math.log1p(c) - math.log1p(-c)) / (2 * c)
        return ((1 + c) ** (p + 1) - (1 - c) ** (p + 1)) / (2 * c * (p + 1))

    def even_moments(self) -> tuple[float, float, float]:
        """E X^2, E X^4, E X^6."""
        return self.abs_moment(2), self.abs_moment(4), self.abs_moment(6)

    @property
    def w2_rademacher(self) -> float:
        """|| |X| - 1 ||_2, the W2 distance to a random sign."""
        if self.atoms is not None:
            return math.sqrt(math.fsum(q * float((x - 1) ** 2) for x, q in self.atoms))
        return self.noise / math.sqrt(3.0)

    # ---- sampling -----------------------------------------------------------------
    def sample(self, n: int, seed: Optional[int] = None) -> np.ndarray:
        return self.draw(rng(self.seed if seed is None else seed), n)

    def draw(self, g: np.random.Generator, n: int) -> np.ndarray:
        signs = g.integers(0, 2, size=n) * 2.0 - 1.0
        if self.atoms is not None:
            xs = np.array([float(x) for x, _ in self.atoms])
            ps = np.array([p for _, p in self.atoms])
            mags = xs[g.choice(len(xs), size=n, p=ps / ps.sum())] if len(xs) > 1 \
                else np.full(n, xs[0])
        else:
            mags = 1.0 + self.noise * g.uniform(-1.0, 1.0, size=n)
        return signs * mags

    def describe(self) -> dict:
        return {"name": self.name, "kind": self.kind.value, "param": self.param,
                "seed": self.seed, "w2_rademacher": self.w2_rademacher}


def make_perturbed_rademacher(kind, param: float = 0.0, seed: int = 0) -> Distribution1D:
    """Symmetric perturbations of the random sign.

    two_point:     X = +-(1+c)
    four_point:    |X| in {1-c, 1+c} equiprobably, 0 <= c < 1
    uniform_noise: X = eps (1 + c U), U uniform on [-1, 1], 0 <= c < 1
    """
    kind = Family1D(kind)
    c = float(param)
    if not math.isfinite(c):
        raise ValueError("param must be finite")
    if kind is Family1D.RADEMACHER:
        if c != 0:
            raise ValueError("rademacher takes no parameter")
        return Distribution1D("rademacher", kind, 0.0, ((Fraction(1), 1.0),), seed=seed,
                              w2_exactly_zero=True)
    if kind is Family1D.TWO_POINT:
        if not c > -1:
            raise ValueError("two_point needs c > -1 (otherwise the law is degenerate)")
        return Distribution1D(f"two_point(c={c:g})", kind, c, ((_as_fraction(1 + c), 1.0),),
                              seed=seed, w2_exactly_zero=(c == 0))
    if not 0 <= c < 1:
        raise ValueError(f"{kind.value} needs 0 <= c < 1, got {c}")
    if kind is Family1D.FOUR_POINT:
        if c == 0:
            atoms = ((Fraction(1), 1.0),)
        else:
            atoms = ((_as_fraction(1 - c), 0.5), (_as_fraction(1 + c), 0.5))
        return Distribution1D(f"four_point(c={c:g})", kind, c, atoms, seed=seed,
                              w2_exactly_zero=(c == 0))
    if c == 0:
        return Distribution1D("uniform_noise(c=0)", kind, 0.0, ((Fraction(1), 1.0),), seed=seed,
                              w2_exactly_zero=True)
    return Distribution1D(f"uniform_noise(c={c:g})", kind, c, noise=c, seed=seed)


# ---------------------------------------------------------------------------
# radial laws in R^3
# ---------------------------------------------------------------------------

class FamilyRadial(str, Enum):
    SPHERE = "sphere"
    SHELL = "shell"
    TWO_SHELL = "two_shell"


@dataclass(frozen=True)
class RadialDist3D:
    """``X = R theta`` with ``theta`` uniform on S^2 and ``R`` a discrete positive law.

    The characteristic function at ``|t| = r`` is ``E sin(R r)/(R r)``.
    """

    name: str
    kind: FamilyRadial
    param: float
    radii: tuple[tuple[Fraction, float], ...]
    seed: int = 0
    w2_exactly_zero: bool = False

    def cf_radial(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return sum(p * np.sinc(float(R) * r / np.pi) for R, p in self.radii)

    def h(self, r) -> np.ndarray:
        """``r * cf_radial(r) = E sin(R r)/R``; periodic."""
        r = np.asarray(r, dtype=float)
        return sum(p / float(R) * np.sin(float(R) * r) for R, p in self.radii)

    @property
    def abs_period(self) -> float:
        """A period of |h|."""
        return _atoms_abs_period([R for R, _ in self.radii])

    @property
    def zero_spacing(self) -> float:
        P = self.abs_period
        rmax = max(float(R) for R, _ in self.radii)
        return P / math.ceil(P * rmax / math.pi - 1e-9)

    def radius_moment(self, p: float) -> float:
        return math.fsum(q * float(R) ** p for R, q in self.radii)

    @property
    def third_moment(self) -> float:
        return self.radius_moment(3)

    @property
    def decay_C0(self) -> float:
        """E R^-1, so that |cf_radial(r)| <= decay_C0 / r."""
        return self.radius_moment(-1)

    @property
    def C1(self) -> float:
        return max(self.decay_C0, 1.0)

    @property
    def w2_sphere(self) -> float:
        return math.sqrt(math.fsum(q * float((R - 1) ** 2) for R, q in self.radii))

    def sample3d(self, n: int, seed: Optional[int] = None) -> np.ndarray:
        return self.draw3d(rng(self.seed if seed is None else seed), n)

    def draw3d(self, g: np.random.Generator, n: int) -> np.ndarray:
        z = g.standard_normal((n, 3))
        theta = z / np.linalg.norm(z, axis=1, keepdims=True)
        return theta * self.draw_radius(g, n)[:, None]

    def draw_radius(self, g: np.random.Generator, n: int) -> np.ndarray:
        Rs = np.array([float(R) for R, _ in self.radii])
        ps = np.array([p for _, p in self.radii])
        return Rs[g.choice(len(Rs), size=n, p=ps / ps.sum())] if len(Rs) > 1 else np.full(n, Rs[0])

    def describe(self) -> dict:
        return {"name": self.name, "kind": self.kind.value, "param": self.param,
                "seed": self.seed, "w2_sphere": self.w2_sphere}


def make_radial(kind, param: float = 0.0, seed: int = 0) -> RadialDist3D:
    """sphere: R = 1;  shell: R = 1 + c;  two_shell: R in {1-c, 1+c} equiprobably."""
    kind = FamilyRadial(kind)
    c = float(param)
    if not math.isfinite(c):
        raise ValueError("param must be finite")
    if kind is FamilyRadial.SPHERE:
        if c != 0:
            raise ValueError("sphere takes no parameter")
        return RadialDist3D("sphere", kind, 0.0, ((Fraction(1), 1.0),), seed, True)
    if kind is FamilyRadial.SHELL:
        if not c > -1:
            raise ValueError("shell needs R = 1 + c > 0; an atom at 0 has no decay constant")
        if c != 0 and abs(c) < 1e-9:
            # radius not representable as a short rational; keep the exact zero-W2 law
            raise ValueError("shell perturbations below 1e-9 are not resolvable in floating point")
        return RadialDist3D(f"shell(c={c:g})", kind, c, ((_as_fraction(1 + c), 1.0),), seed, c == 0)
    if not 0 <= c < 1:
        raise ValueError(f"two_shell needs 0 <= c < 1 (R > 0), got {c}")
    if c == 0:
        return RadialDist3D("two_shell(c=0)", kind, 0.0, ((Fraction(1), 1.0),), seed, True)
    radii = ((_as_fraction(1 - c), 0.5), (_as_fraction(1 + c), 0.5))
    return RadialDist3D(f"two_shell(c={c:g})", kind, c, radii, seed)


# ---------------------------------------------------------------------------
# coefficient vectors
# ---------------------------------------------------------------------------

_SQRT_FORM = re.compile(r"^\s*([+-]?)\s*1\s*/\s*(?:√|sqrt)\s*\(?\s*(\d+(?:\.\d*)?)\s*\)?\s*$")


def parse_coordinate(text: str) -> float:
    """Decimal or ``1/√k`` (also ``1/sqrtk``, ``1/sqrt(k)``) literal."""
    m = _SQRT_FORM.match(text)
    if m:
        val = 1.0 / math.sqrt(float(m.group(2)))
        return -val if m.group(1) == "-" else val
    return float(text)


@dataclass(frozen=True)
class UnitVector:
    coords: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(x) for x in self.coords)
        object.__setattr__(self, "coords", c)
        if len(c) < 2:
            raise ValueError("a unit vector needs n >= 2 coordinates")
        if not all(math.isfinite(x) for x in c):
            raise ValueError("coordinates must be finite")
        norm2 = math.fsum(x * x for x in c)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"sum of squares is {norm2!r}, not 1 within 1e-12")

    @staticmethod
    def parse_raw(text: str) -> list[float]:
        return [parse_coordinate(p) for p in text.split(",") if p.strip()]

    @classmethod
    def parse(cls, text: str, normalize: bool = False) -> "UnitVector":
        vals = cls.parse_raw(text)
        if normalize:
            n = math.sqrt(math.fsum(v * v for v in vals))
            vals = [v / n for v in vals]
        return cls(tuple(vals))

    @classmethod
    def random(cls, n: int, seed: int, small_coeff: bool = True) -> "UnitVector":
        """Gaussian direction; with ``small_coeff`` redrawn until max|a_j| <= 1/sqrt 2.

        For n = 2 the only small-coefficient directions are (+-1, +-1)/sqrt 2,
        which a continuous draw never hits, so the signs are drawn directly.
        """
        g = rng(seed)
        if small_coeff and n == 2:
            return cls(tuple((SMALL_COEFF * g.choice([-1.0, 1.0], 2)).tolist()))
        while True:
            z = g.standard_normal(n)
            a = z / math.sqrt(math.fsum((z * z).tolist()))
            a = a / math.sqrt(math.fsum((a * a).tolist()))
            if not small_coeff or np.max(np.abs(a)) <= SMALL_COEFF:
                return cls(tuple(a.tolist()))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def nonzero(self) -> np.ndarray:
        """|a_j| for the nonzero coordinates."""
        a = np.abs(self.array)
        return a[a > 0]

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.array)))

    @property
    def small_coeff(self) -> bool:
        return self.sup_norm <= SMALL_COEFF + 1e-12


# ---------------------------------------------------------------------------
# hypothesis checks
# ---------------------------------------------------------------------------

def check_thm1_hypothesis(d: Distribution1D, delta0: float = THM1_DELTA0) -> LemmaReport:
    """|| |X| - 1 ||_2 <= delta0."""
    w2 = 0.0 if d.w2_exactly_zero else d.w2_rademacher
    r = judge("Thm1-hypothesis", delta0 - w2, inputs=d.describe(), paper_bound=delta0)
    r.add("w2_rademacher", w2)
    return r


def thm2_threshold(d: RadialDist3D) -> float:
    return 1e-38 * d.C1 ** -9 * min(d.third_moment ** -6, 1.0)


def thm2_s0(d: RadialDist3D) -> float:
    return max(1e6 * d.third_moment ** 2, 2.0 * math.log(d.C1))


def check_thm2_hypothesis(d: RadialDist3D) -> LemmaReport:
    """W2(X, xi) <= 1e-38 C1^-9 min{(E R^3)^-6, 1}; also reports s0."""
    thr = thm2_threshold(d)
    w2 = 0.0 if d.w2_exactly_zero else d.w2_sphere
    r = judge("Thm2-hypothesis", thr - w2, inputs=d.describe(), paper_bound=thr)
    r.add("w2_sphere", w2)
    r.add("C1", d.C1)
    r.add("third_moment", d.third_moment)
    r.add("s0", thm2_s0(d))
    if d.w2_exactly_zero:
        r.note("reference law: W2 is exactly zero")
    return r


def cf_deviation_check(d, t_grid) -> LemmaReport:
    """|cf - cf_ref| <= delta(delta+2)/2 t^2 on ``t_grid``, delta the stored W2 distance."""
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0 or not np.all(np.isfinite(t)) or np.any(t <= 0):
        raise ValueError("t_grid must be finite and positive")
    if isinstance(d, RadialDist3D):
        lemma, delta = "phi-unif-vec", d.w2_sphere
        dev = np.abs(d.cf_radial(t) - np.sinc(t / np.pi))
    else:
        lemma, delta = "phi-unif", d.w2_rademacher
        dev = np.abs(d.cf_deviation(t))
    if d.w2_exactly_zero:
        dev = np.zeros_like(t)
        delta = 0.0
    bound = 0.5 * delta * (delta + 2.0) * t * t
    # rounding: relative for the product form, absolute for the radial difference
    eps = np.finfo(float).eps
    unc = 16.0 * eps * dev if lemma == "phi-unif" else 4.0 * eps * (1.0 + t)
    slack = bound - dev - unc
    k = int(np.argmin(slack))
    if d.w2_exactly_zero:
        margin = float(np.min(bound))
    else:
        margin = float(slack[k])
    r = judge(lemma, margin, inputs={**d.describe(), "t_min": float(t.min()),
                                     "t_max": float(t.max()), "points": int(t.size)},
              paper_bound=float(bound[k]))
    r.add("max_deviation", float(dev.max()), float(unc.max()))
    r.add("delta", delta)
    return r


# ---------------------------------------------------------------------------
# text config
# ---------------------------------------------------------------------------

RADIAL_KINDS = {k.value for k in FamilyRadial}
LINE_KINDS = {k.value for k in Family1D}


def parse_dist_spec(text: str, default_seed: int = 0):
    """``kind=four_point,param=1e-5,seed=7`` or the bare shorthand ``four_point:1e-5``."""
    fields = _parse_kv(text)
    kind = fields.pop("kind", None)
    if kind is None:
        raise ValueError("distribution spec needs kind=...")
    param = float(fields.pop("param", 0.0))
    seed = int(fields.pop("seed", default_seed))
    if fields:
        raise ValueError(f"unknown distribution keys: {sorted(fields)}")
    if kind in RADIAL_KINDS:
        return make_radial(kind, param, seed)
    if kind in LINE_KINDS:
        return make_perturbed_rademacher(kind, param, seed)
    raise ValueError(f"unknown distribution kind {kind!r}")


def _parse_kv(text: str) -> dict[str, str]:
    text = text.strip()
    if "=" not in text:
        kind, _, param = text.partition(":")
        out = {"kind": kind.strip()}
        if param:
            out["param"] = param.strip()
        return out
    out: dict[str, str] = {}
    for part in re.split(r"[,\n;]", text):
        part = part.strip()
        if not part or part.startswith("#"):
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {part!r}")
        out[key.strip()] = val.strip()
    return out

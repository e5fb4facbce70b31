import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from khinchin_lab import specialfn as sf
from khinchin_lab.cli import parse_grid
from khinchin_lab.dist import UnitVector, make_perturbed_rademacher, make_radial
from khinchin_lab.verify import exact_rademacher_mean

EPS = np.finfo(float).eps
unit = st.floats(1e-9, 1 - 1e-9)


@given(unit, unit, st.floats(2.0, 1e3))
def test_sulogu(u, v, s):
    gap = sf.sulogu_gap(np.array([u]), np.array([v]), np.array([s]))[0]
    assert gap >= -8 * EPS


@given(st.floats(1e-8, math.pi - 1e-8))
def test_sinc_below_gaussian(u):
    assert sf.sinc_gauss_bound_holds(np.array([u]))[0]


# atoms must have short rational forms, so draw c on a decimal lattice
lattice = st.integers(1, 50_000).map(lambda k: k / 100_000)


@given(st.sampled_from(["two_point", "four_point", "uniform_noise"]), lattice,
       st.floats(1e-4, 1e4))
def test_cf_deviation_quadratic_bound(kind, c, t):
    d = make_perturbed_rademacher(kind, c)
    delta = d.w2_rademacher
    dev = abs(float(d.cf_deviation(np.array([t]))[0]))
    assert dev <= 0.5 * delta * (delta + 2) * t * t * (1 + 1e-12) + 1e-300


@given(lattice, st.floats(1e-3, 1e3))
def test_radial_cf_deviation_bound(c, t):
    d = make_radial("two_shell", c)
    dev = abs(float(d.cf_radial(t)) - math.sin(t) / t)
    assert dev <= 0.5 * c * (c + 2) * t * t + 8 * EPS * (1 + t)


@given(st.lists(st.floats(-10, 10).filter(lambda x: abs(x) > 1e-3), min_size=2, max_size=8))
def test_unit_vector_parse_roundtrip(xs):
    n = math.sqrt(math.fsum(x * x for x in xs))
    text = ",".join(repr(x / n) for x in xs)
    try:
        v = UnitVector.parse(text)
    except ValueError:
        v = UnitVector.parse(text, normalize=True)
    assert np.allclose(v.coords, np.array(xs) / n, rtol=1e-12)


@settings(max_examples=30)
@given(st.integers(2, 10), st.integers(0, 2 ** 32), st.randoms(use_true_random=False))
def test_rademacher_mean_symmetry(n, seed, rnd):
    a = UnitVector.random(n, seed, small_coeff=False)
    coords = list(a.coords)
    rnd.shuffle(coords)
    flipped = UnitVector(tuple(x if rnd.random() < 0.5 else -x for x in coords))
    assert abs(exact_rademacher_mean(flipped).value - exact_rademacher_mean(a).value) < 1e-14


@given(st.floats(1e-3, 1e6), st.floats(1.0001, 2.0))
def test_psi0_increasing(s, k):
    assume(s * k < 1e12)
    assert sf.psi0(s * k).value >= sf.psi0(s).value - 1e-15


@given(st.floats(0.1, 10), st.floats(1.0, 1e3), st.integers(1, 50))
def test_grid_spans_interval(lo, ratio, points):
    g = parse_grid(f"{lo!r}:{lo * ratio!r}:{points}:log")
    assert len(g) == points
    assert g[0] == lo
    assert all(x <= lo * ratio * (1 + 1e-12) for x in g)

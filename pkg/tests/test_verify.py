import itertools
import math

import numpy as np
import pytest

from khinchin_lab import specialfn as sf
from khinchin_lab.dist import UnitVector, make_perturbed_rademacher, make_radial
from khinchin_lab.report import Verdict
from khinchin_lab.verify import (BENCHMARK, MomentMethod, PreconditionError, amgm_lower_bound,
                                 cos_product, exact_discrete_mean, exact_rademacher_mean,
                                 fourier_mean, gf_neg_moment, holder_upper_bound, mc_mean,
                                 mc_neg_moment, trend_is_monotone, unimodal_limit,
                                 unimodal_moment, verify_ball, verify_szarek)

RAD = make_perturbed_rademacher("rademacher")
SPHERE = make_radial("sphere")


def _brute_rademacher(a):
    return math.fsum(abs(math.fsum(e * x for e, x in zip(signs, a)))
                     for signs in itertools.product((1, -1), repeat=len(a))) / 2 ** len(a)


@pytest.mark.parametrize("seed", range(5))
def test_meet_in_the_middle_matches_brute_force(seed):
    a = UnitVector.random(9, seed)
    assert exact_rademacher_mean(a).value == pytest.approx(_brute_rademacher(a.coords), abs=1e-14)


def test_exact_known_values():
    assert exact_rademacher_mean(UnitVector.parse("1/√3,1/√3,1/√3")).value == pytest.approx(
        math.sqrt(3) / 2, abs=1e-15)
    assert exact_rademacher_mean(BENCHMARK).value == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_exact_four_point_against_brute_force():
    c = 0.1
    d = make_perturbed_rademacher("four_point", c)
    a = UnitVector.random(4, 3)
    vals = [(s * x, 0.25) for x in (1 - c, 1 + c) for s in (1, -1)]
    ref = math.fsum(math.prod(p for _, p in combo) * abs(math.fsum(aj * x for aj, (x, _) in zip(a.coords, combo)))
                    for combo in itertools.product(vals, repeat=4))
    assert exact_discrete_mean(a, d).value == pytest.approx(ref, abs=1e-14)


def test_enumeration_limit():
    with pytest.raises(PreconditionError):
        exact_rademacher_mean(UnitVector.random(27, 0))


@pytest.mark.parametrize("kind,c", [("rademacher", 0.0), ("two_point", 1e-3), ("four_point", 1e-2)])
@pytest.mark.parametrize("seed", [0, 1])
def test_fourier_matches_enumeration(kind, c, seed):
    d = make_perturbed_rademacher(kind, c)
    a = UnitVector.random(6, seed)
    f = fourier_mean(a, d, 1e-11)
    e = exact_discrete_mean(a, d)
    assert f.method is MomentMethod.FOURIER
    assert abs(f.value - e.value) <= f.stderr_or_bound + 1e-13


def test_fourier_uniform_noise_against_monte_carlo():
    d = make_perturbed_rademacher("uniform_noise", 0.1)
    a = UnitVector.random(5, 2)
    f = fourier_mean(a, d, 1e-10)
    m = mc_mean(a, d, 400_000, seed=1)
    assert abs(f.value - m.value) < 5 * m.stderr_or_bound


def test_cos_product_budget():
    f = (np.array([1.0, 2.0]), np.array([0.5, 0.5]))
    w, c = cos_product([f, f])
    assert math.fsum(c) == pytest.approx(1.0)
    # commensurate frequencies merge; incommensurate ones grow like 2^n
    assert len(cos_product([f] * 12, budget=1000)[0]) <= 25
    g = [(np.array([math.sqrt(k + 2)]), np.array([1.0])) for k in range(12)]
    with pytest.raises(PreconditionError):
        cos_product(g, budget=1000)


def test_gf_single_coordinate_is_one():
    # E|xi|^-1 = 1 for xi uniform on the sphere: checks the Fourier constant
    v = gf_neg_moment(UnitVector((1.0, 0.0)), SPHERE, 1e-11)
    assert abs(v.value - 1.0) < 1e-8


def test_gf_benchmark_and_shell():
    assert gf_neg_moment(BENCHMARK, SPHERE, 1e-11).value == pytest.approx(math.sqrt(2), abs=1e-10)
    c = 1e-3
    v = gf_neg_moment(BENCHMARK, make_radial("shell", c), 1e-11)
    assert v.value == pytest.approx(math.sqrt(2) / (1 + c), abs=1e-10)


def test_gf_against_monte_carlo():
    a = UnitVector.random(4, 8)
    d = make_radial("two_shell", 0.2)
    g = gf_neg_moment(a, d, 1e-10)
    m = mc_neg_moment(a, d, 400_000, seed=3)
    assert abs(g.value - m.value) < 5 * m.stderr_or_bound


def test_monte_carlo_is_reproducible():
    a = UnitVector.random(5, 1)
    d = make_perturbed_rademacher("uniform_noise", 0.3)
    assert mc_mean(a, d, 5000, 9) == mc_mean(a, d, 5000, 9)
    assert mc_mean(a, d, 5000, 9).value != mc_mean(a, d, 5000, 10).value
    with pytest.raises(ValueError):
        mc_mean(a, d, 999)


def test_intermediate_bounds_bracket():
    a = UnitVector.random(5, 4)
    d = make_perturbed_rademacher("four_point", 1e-3)
    assert amgm_lower_bound(a, d).value <= exact_discrete_mean(a, d).value
    r = make_radial("two_shell", 1e-3)
    assert holder_upper_bound(a, r).value >= gf_neg_moment(a, r).value
    with pytest.raises(PreconditionError):
        holder_upper_bound(UnitVector.parse("1,0"), r)


def test_verify_szarek_paths():
    a = UnitVector.random(8, 5)
    r = verify_szarek(a, make_perturbed_rademacher("four_point", 1e-3), mc_samples=20_000,
                      intermediates=True)
    assert r.verdict is Verdict.PASS and r.margin >= 0
    trivial = verify_szarek(UnitVector.parse("1,0"), RAD)
    assert trivial.verdict is Verdict.PASS
    rej = verify_szarek(UnitVector.parse("0.9,0.436", normalize=True),
                        make_perturbed_rademacher("four_point", 1e-3))
    assert rej.verdict is Verdict.REJECTED


def test_verify_ball_paths():
    r = verify_ball(UnitVector.parse("1/√3,1/√3,1/√3"), SPHERE)
    assert r.verdict is Verdict.PASS
    assert r.margin == pytest.approx(math.sqrt(2) - gf_neg_moment(
        UnitVector.parse("1/√3,1/√3,1/√3"), SPHERE).value, abs=1e-8)
    assert verify_ball(UnitVector.parse("0.9,0.436", normalize=True), SPHERE).verdict is Verdict.REJECTED


def test_unimodal_identity_against_direct_sampling():
    a = UnitVector.random(4, 2)
    d = make_radial("two_shell", 0.1)
    q = -0.5
    est = unimodal_moment(a, d, q, 200_000, seed=5)
    g = np.random.default_rng(77)
    N = 400_000
    y = sum(aj * d.draw_radius(g, N) * g.uniform(-1, 1, N) for aj in a.nonzero)
    direct = (1 + q) * np.abs(y) ** q
    se = direct.std() / math.sqrt(N)
    assert abs(est.value - direct.mean()) < 5 * math.hypot(se, est.stderr_or_bound)


def test_unimodal_limit_trend():
    a = BENCHMARK
    qs = [-0.9, -0.99, -0.999]
    ests = unimodal_limit(a, SPHERE, qs, 200_000, seed=1)
    vals = [e.value for e in ests]
    assert trend_is_monotone(vals)
    assert abs(vals[-1] - math.sqrt(2)) < 0.02
    with pytest.raises(ValueError):
        unimodal_moment(a, SPHERE, -1.0)


def test_large_perturbation_counterexample_is_real():
    d = make_perturbed_rademacher("uniform_noise", 0.99)
    a = UnitVector.parse("1/√3,1/√3,1/√3")
    r = verify_szarek(a, d)
    assert r.verdict is Verdict.FAIL
    m = mc_mean(a, d, 4_000_000, seed=2)
    b = mc_mean(BENCHMARK, d, 4_000_000, seed=3)
    assert b.value - m.value > 5 * math.hypot(m.stderr_or_bound, b.stderr_or_bound)


def test_benchmark_vector_equality():
    for d in (RAD, make_perturbed_rademacher("four_point", 0.5)):
        r = verify_szarek(UnitVector.parse("-1/√2,0,1/√2"), d)
        assert r.verdict is Verdict.PASS and r.margin == 0.0

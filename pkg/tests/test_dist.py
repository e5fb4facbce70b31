import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from khinchin_lab.dist import (RadialDist3D, UnitVector, check_thm1_hypothesis,
                               check_thm2_hypothesis, cf_deviation_check,
                               make_perturbed_rademacher, make_radial, parse_dist_spec)
from khinchin_lab.report import Verdict

mp.mp.dps = 40
LINE = [("rademacher", 0.0), ("two_point", 0.01), ("four_point", 0.2), ("uniform_noise", 0.3)]


def _cf_mp(kind, c, t):
    t = mp.mpf(t)
    c = mp.mpf(c)
    if kind == "rademacher":
        return mp.cos(t)
    if kind == "two_point":
        return mp.cos((1 + c) * t)
    if kind == "four_point":
        return (mp.cos((1 - c) * t) + mp.cos((1 + c) * t)) / 2
    return mp.cos(t) * mp.sin(c * t) / (c * t)


@pytest.mark.parametrize("kind,c", LINE)
@pytest.mark.parametrize("t", [1e-7, 0.3, 2.0, 40.0])
def test_cf_and_one_minus_cf(kind, c, t):
    d = make_perturbed_rademacher(kind, c)
    ref = _cf_mp(kind, c, t)
    assert float(d.cf(np.array([t]))[0]) == pytest.approx(float(ref), abs=1e-15)
    omc = float(d.one_minus_cf(np.array([t]))[0])
    assert omc == pytest.approx(float(1 - ref), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("kind,c", LINE[1:])
def test_cf_deviation_relative_accuracy(kind, c):
    t = np.array([1e-6, 0.5, 3.0, 100.0])
    got = np.asarray(make_perturbed_rademacher(kind, c).cf_deviation(t))
    ref = [float(_cf_mp(kind, c, x) - mp.cos(x)) for x in t]
    assert np.allclose(got, ref, rtol=1e-10, atol=0)


def test_four_point_is_a_cosine_product():
    d = make_perturbed_rademacher("four_point", 1e-3)
    k1, k2 = d.cos_product
    t = np.linspace(0, 50, 101)
    assert np.allclose(d.cf(t), np.cos(k1 * t) * np.cos(k2 * t), atol=1e-15)
    assert make_perturbed_rademacher("two_point", 0.1).cos_product is None


@pytest.mark.parametrize("p", [-1.0, 0.5, 1.0, 2.0, 4.0])
def test_uniform_noise_moments_against_density(p):
    c = 0.3
    d = make_perturbed_rademacher("uniform_noise", c)
    ref, _ = integrate.quad(lambda x: x ** p / (2 * c), 1 - c, 1 + c, epsabs=1e-14)
    assert d.abs_moment(p) == pytest.approx(ref, rel=1e-12)


def test_w2_distances():
    assert make_perturbed_rademacher("uniform_noise", 0.3).w2_rademacher == pytest.approx(0.3 / math.sqrt(3))
    assert make_perturbed_rademacher("four_point", 0.2).w2_rademacher == pytest.approx(0.2)
    assert make_radial("two_shell", 0.1).w2_sphere == pytest.approx(0.1)


@pytest.mark.parametrize("kind,c", LINE)
def test_sampling_matches_moments(kind, c):
    d = make_perturbed_rademacher(kind, c, seed=11)
    x = d.sample(200_000)
    assert abs(x.mean()) < 5 * math.sqrt(d.abs_moment(2) / x.size)
    m2 = np.mean(x * x)
    sd = math.sqrt((d.abs_moment(4) - d.abs_moment(2) ** 2) / x.size)
    assert abs(m2 - d.abs_moment(2)) <= 5 * sd + 1e-12


def test_sampling_is_seeded():
    d = make_perturbed_rademacher("uniform_noise", 0.2, seed=3)
    assert np.array_equal(d.sample(100), d.sample(100))
    assert not np.array_equal(d.sample(100), d.sample(100, seed=4))


@pytest.mark.parametrize("kind,c", [("sphere", 0.0), ("shell", 0.2), ("two_shell", 0.3)])
def test_radial_cf_against_samples(kind, c):
    d = make_radial(kind, c, seed=5)
    X = d.sample3d(400_000)
    r = 1.7
    emp = np.mean(np.cos(r * X[:, 0]))
    se = math.sqrt(0.5 / X.shape[0])
    assert abs(emp - float(d.cf_radial(r))) < 5 * se


def test_sphere_cf_is_sinc():
    d = make_radial("sphere")
    r = np.linspace(0.01, 30, 200)
    assert np.allclose(d.cf_radial(r), np.sin(r) / r, atol=1e-15)
    assert np.allclose(d.h(r), np.sin(r), atol=1e-15)


@pytest.mark.parametrize("kind,c,msg", [("four_point", 1.0, "0 <= c < 1"), ("two_point", -1.0, "c > -1"),
                                        ("rademacher", 0.1, "no parameter")])
def test_line_family_parameter_domains(kind, c, msg):
    with pytest.raises(ValueError, match=msg):
        make_perturbed_rademacher(kind, c)


def test_radial_family_parameter_domains():
    with pytest.raises(ValueError):
        make_radial("shell", -1.0)
    with pytest.raises(ValueError):
        make_radial("shell", 1e-12)
    with pytest.raises(ValueError):
        make_radial("two_shell", 1.0)
    with pytest.raises(ValueError):
        make_radial("sphere", 0.5)


def test_parse_dist_spec_forms():
    d = parse_dist_spec("four_point:1e-5")
    assert d.kind.value == "four_point" and d.param == 1e-5
    d = parse_dist_spec("kind=two_shell,param=0.01,seed=7")
    assert isinstance(d, RadialDist3D) and d.seed == 7
    assert parse_dist_spec("sphere").kind.value == "sphere"
    for bad in ("", "kind=nope", "kind=sphere,colour=red", "param=1"):
        with pytest.raises(ValueError):
            parse_dist_spec(bad)


def test_unit_vector_parsing():
    v = UnitVector.parse("1/√3, 1/sqrt(3), -1/√3")
    assert v.coords[2] == pytest.approx(-1 / math.sqrt(3))
    assert v.small_coeff
    assert not UnitVector.parse("1,0").small_coeff
    with pytest.raises(ValueError):
        UnitVector.parse("0.9,0.436")
    w = UnitVector.parse("0.9,0.436", normalize=True)
    assert math.fsum(x * x for x in w.coords) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        UnitVector.parse("1")


def test_random_unit_vectors():
    for seed in range(20):
        v = UnitVector.random(7, seed)
        assert v.small_coeff and len(v.coords) == 7
    assert UnitVector.random(5, 1) == UnitVector.random(5, 1)


def test_random_small_coeff_low_dimension():
    for seed in range(8):
        v = UnitVector.random(2, seed)
        assert np.allclose(np.abs(v.array), 1 / math.sqrt(2)) and v.small_coeff
    with pytest.raises(ValueError):
        UnitVector.random(1, 0, small_coeff=False)


def test_hypothesis_reports():
    assert check_thm1_hypothesis(make_perturbed_rademacher("rademacher")).verdict is Verdict.PASS
    assert check_thm1_hypothesis(make_perturbed_rademacher("four_point", 0.5)).verdict is Verdict.FAIL
    assert check_thm2_hypothesis(make_radial("sphere")).verdict is Verdict.PASS
    # any representable perturbation is far above the 1e-38 scale
    assert check_thm2_hypothesis(make_radial("shell", 1e-5)).verdict is Verdict.FAIL


@pytest.mark.parametrize("d", [make_perturbed_rademacher("two_point", 1e-3),
                               make_perturbed_rademacher("four_point", 1e-5),
                               make_perturbed_rademacher("uniform_noise", 0.1),
                               make_radial("shell", 1e-3), make_radial("two_shell", 1e-5)])
def test_cf_deviation_bound(d):
    r = cf_deviation_check(d, np.geomspace(1e-3, 1e3, 400))
    assert r.verdict is Verdict.PASS


def test_cf_deviation_grid_must_be_positive():
    with pytest.raises(ValueError):
        cf_deviation_check(make_radial("sphere"), [0.0, 1.0])

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from khinchin_lab import specialfn as sf
from khinchin_lab.dist import make_perturbed_rademacher, make_radial
from khinchin_lab.perturbed import (GaussBoundInput, der_psi_unif_report, gauss_tail_bound,
                                    lemma_phi_bounds, phi3, phi3_prime, phi_dominance_scan,
                                    psi, psi2_regimes, psi_monotone_scan, psi_prime,
                                    psi_unif_report, regime_pipeline)
from khinchin_lab.report import Verdict


def _even_sum_mean(atoms, n):
    """E|X_1 + ... + X_n| / sqrt(n) for a symmetric law with |X| on ``atoms``, by enumeration."""
    total = 0.0
    vals = [(sgn * x, p / 2) for x, p in atoms for sgn in (1, -1)]
    terms = []
    for combo in itertools.product(vals, repeat=n):
        prob = math.prod(p for _, p in combo)
        terms.append(prob * abs(math.fsum(x for x, _ in combo)))
    total = math.fsum(terms)
    return total / math.sqrt(n)


# at even integer s, |phi|^s = phi^s and Psi(s) is a plain first absolute moment
@pytest.mark.parametrize("n", [2, 4, 6])
@pytest.mark.parametrize("c", [1e-3, 0.2])
def test_psi_even_integer_against_enumeration(n, c):
    d = make_perturbed_rademacher("four_point", c)
    v = psi(float(n), d, 1e-11)
    ref = _even_sum_mean([(1 - c, 0.5), (1 + c, 0.5)], n)
    assert abs(v.value - ref) <= v.uncertainty + 1e-13


@pytest.mark.parametrize("s", [1.0, 2.0, 3.3, 25.0, 800.0])
def test_two_point_scaling(s):
    c = 1e-3
    v = psi(s, make_perturbed_rademacher("two_point", c), 1e-11)
    assert abs(v.value - (1 + c) * sf.psi0(s).value) <= v.uncertainty + 1e-14


def test_uniform_noise_against_monte_carlo():
    d = make_perturbed_rademacher("uniform_noise", 0.4)
    g = np.random.default_rng(2024)
    n, N = 4, 1_000_000
    x = d.draw(g, n * N).reshape(N, n).sum(axis=1)
    emp = np.abs(x).mean() / 2.0
    se = np.abs(x).std() / 2.0 / math.sqrt(N)
    assert abs(psi(4.0, d, 1e-10).value - emp) < 5 * se


@pytest.mark.parametrize("s", [2.0, 5.0, 300.0])
@pytest.mark.parametrize("c", [1e-5, 1e-4])
def test_four_point_routes_agree(s, c):
    d = make_perturbed_rademacher("four_point", c)
    a = psi(s, d, 1e-10, route="two_scale")
    b = psi(s, d, 1e-10, route="periodic")
    assert abs(a.value - b.value) <= a.uncertainty + b.uncertainty


def test_route_requires_two_atoms():
    with pytest.raises(ValueError):
        psi(3.0, make_perturbed_rademacher("two_point", 0.1), route="two_scale")
    with pytest.raises(ValueError):
        psi(3.0, make_perturbed_rademacher("two_point", 0.1), route="fast")


@pytest.mark.parametrize("kind,c", [("four_point", 1e-2), ("uniform_noise", 0.2)])
@pytest.mark.parametrize("s", [2.0, 4.5])
def test_psi_prime_against_difference(kind, c, s):
    d = make_perturbed_rademacher(kind, c)
    v = psi_prime(s, d, 1e-11)
    fd = sf.central_difference(lambda x: psi(x, d, 1e-13).value, s, 1e-3)
    assert v.value == pytest.approx(fd, abs=1e-7)


def test_psi_domain():
    d = make_perturbed_rademacher("rademacher")
    with pytest.raises(ValueError):
        psi(0.5, d)
    with pytest.raises(ValueError):
        psi_prime(1.5, d)


@pytest.mark.parametrize("s", [2.0, 3.0, 40.0])
def test_shell_scaling(s):
    c = 1e-3
    v = phi3(s, make_radial("shell", c), 1e-11)
    assert abs(v.value - sf.phi0(s, tol=1e-12).value / (1 + c)) <= v.uncertainty + 1e-11


def test_two_shell_at_two_by_newton():
    # E|R1 xi1 + R2 xi2|^-1 = E 1/max(R1, R2): the shell theorem
    c = 0.1
    ref = math.sqrt(2) * (0.25 / (1 - c) + 0.75 / (1 + c))
    v = phi3(2.0, make_radial("two_shell", c), 1e-11)
    assert abs(v.value - ref) <= v.uncertainty + 1e-12


def test_sphere_is_ball_function():
    for s in (2.0, 7.5):
        assert phi3(s, make_radial("sphere"), 1e-11).value == pytest.approx(sf.phi0(s).value, abs=1e-10)


def test_phi_prime_against_difference():
    d = make_radial("two_shell", 0.05)
    v = phi3_prime(3.0, d, 1e-11)
    fd = sf.central_difference(lambda x: phi3(x, d, 1e-13).value, 3.0, 1e-3)
    assert v.value == pytest.approx(fd, abs=1e-7)


def test_phi_domain():
    with pytest.raises(ValueError):
        phi3(1.9, make_radial("sphere"))


@pytest.mark.parametrize("d", [make_perturbed_rademacher("four_point", 1e-5),
                               make_perturbed_rademacher("uniform_noise", 1e-4)])
def test_psi_uniform_bounds_hold(d):
    grid = [1.0, 2.0, 3.0, 10.0]
    assert psi_unif_report(d, grid).verdict is Verdict.PASS
    assert der_psi_unif_report(d, [2.0, 3.0, 10.0]).verdict is Verdict.PASS


def test_phi_bounds_hold():
    r = lemma_phi_bounds(make_radial("two_shell", 1e-5), [2.0, 2.5, 3.0, 10.0])
    assert r.verdict is Verdict.PASS, r.notes


def test_gauss_tail_reference_point():
    b = gauss_tail_bound(GaussBoundInput(0.0, 1.0, 1.0, 0.01, 1e6))
    assert sf.phi0(1e6).value <= b < math.sqrt(2)


def test_gauss_tail_preconditions():
    with pytest.raises(ValueError, match="theta"):
        gauss_tail_bound(GaussBoundInput(0.0, 1.0, 1.0, 0.5, 1e6))
    with pytest.raises(ValueError, match="delta"):
        gauss_tail_bound(GaussBoundInput(0.1, 1.0, 1.0, 0.01, 1e6))


def test_regime_pipeline_verdicts():
    assert regime_pipeline(make_radial("sphere")).verdict is Verdict.PASS
    assert regime_pipeline(delta=1e-38).verdict is Verdict.PASS
    bad = regime_pipeline(delta=1e-3)
    assert bad.verdict is Verdict.FAIL and "failing regimes" in bad.notes
    assert regime_pipeline(delta=-1.0).verdict is Verdict.REJECTED


def test_psi2_regimes():
    assert psi2_regimes().verdict is Verdict.PASS
    assert psi2_regimes(0.1).verdict is Verdict.FAIL


def test_monotone_scans():
    r = psi_monotone_scan(make_perturbed_rademacher("four_point", 1e-4), [2.0, 2.5, 10.0, 1e3])
    assert r.verdict is Verdict.PASS
    r = phi_dominance_scan(make_radial("shell", 1e-4), [2.0, 2.5, 10.0, 1e3])
    assert r.verdict is Verdict.PASS

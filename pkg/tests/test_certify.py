import json

import pytest

from khinchin_lab.certify import (LEMMA_IDS, certify_all, lobe_log_integral, phi0_der,
                                  psi1_bounds, sec_der_2, sulogu)
from khinchin_lab.report import Verdict
from khinchin_lab.specialfn import ball_I


def test_lemma_ids_are_unique():
    assert len(LEMMA_IDS) == 17 == len(set(LEMMA_IDS))


def test_log_integral_two_routes():
    direct = ball_I(2.0, 1, tol=1e-10).value
    lobes, err = lobe_log_integral()
    assert abs(direct - lobes) <= 1e-4
    assert direct <= -0.48


def test_cheap_lemmas_pass():
    for r in (psi1_bounds(), sulogu(50_000), phi0_der(), sec_der_2()):
        assert r.verdict is Verdict.PASS, (r.lemma_id, r.notes)


def test_subset_and_serialization():
    summary = certify_all(only=["Psi2-regimes", "phi-unif", "Phi2-regimes"])
    assert summary.verdict is Verdict.PASS
    assert [r.lemma_id for r in summary.reports] == ["phi-unif", "Psi2-regimes", "Phi2-regimes"]
    doc = json.loads(json.dumps(summary.as_dict()))
    assert doc["counts"]["pass"] == 3


def test_empty_distribution_lists_reject_dependent_lemmas():
    summary = certify_all(line_dists=[], radial_dists=[], only=["Psi-unif", "Phi-bulk", "sulogu"])
    verdicts = {r.lemma_id: r.verdict for r in summary.reports}
    assert verdicts == {"Psi-unif": Verdict.REJECTED, "Phi-bulk": Verdict.REJECTED,
                        "sulogu": Verdict.PASS}
    assert summary.verdict is Verdict.REJECTED


def test_bad_arguments():
    with pytest.raises(ValueError):
        certify_all(only=["nope"])
    with pytest.raises(ValueError):
        certify_all(tol=0.0)


@pytest.mark.slow
def test_all_lemmas_pass_at_default_tolerance():
    summary = certify_all()
    bad = [(r.lemma_id, r.verdict.value, r.notes) for r in summary.reports if not r.passed]
    assert not bad
    assert summary.counts["pass"] == 17

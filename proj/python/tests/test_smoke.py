import json
import math

import numpy as np
import pytest

import motzkin_chain as mc


def test_counts_and_walks():
    assert mc.count(2, 1) == 9
    assert mc.count(2, 2) == 21
    assert mc.count(30, 3) > 2**63  # exact big integers
    ws = mc.walks(1, 1)
    assert ws == ["u1.d1", "0.0"]
    assert mc.areas(2, 2).max() == 4


def test_walk_info():
    info = mc.walk_info("u1.u1.d1.d1", 1)
    assert info["area"] == 4
    assert info["heights"] == [0, 1, 2, 1, 0]
    assert info["prime"]
    assert info["moves"] == [("u1.0.0.d1", -1)]
    with pytest.raises(mc.MotzkinError) as err:
        mc.walk_info("u1.d2", 2)
    assert err.value.kind == "ColorMismatch"


def test_two_site_gap_and_chain():
    for t in (1.0, 1.5, 2.0, 3.0):
        assert abs(mc.hamiltonian_gap(1, 1, t)["gap"] - 1.0) < 1e-12
        rel = mc.gap_relation(1, 1, t)
        assert abs(rel["lambda2"] - (t * t - 1) / (2 * t * t)) < 1e-12
        assert rel["passed"]


def test_ground_state_is_a_zero_mode():
    h = mc.h_subspace(3, 2, 1.5)
    psi, log_z = mc.ground_state(3, 2, 1.5)
    assert np.abs(h @ psi).max() < 1e-12
    assert abs(np.linalg.norm(psi) - 1) < 1e-12
    # amplitudes t^A / sqrt(Z)
    a = mc.areas(3, 2)
    z = np.sum(1.5 ** (2 * a))
    assert np.allclose(psi, 1.5**a / math.sqrt(z), rtol=1e-12)
    assert abs(log_z - math.log(z)) < 1e-12


def test_transition_matrix_identities():
    n, s, t = 3, 2, 2.0
    p = mc.transition_matrix(n, s, t)
    q = mc.transition_matrix(n, s, t, from_h=True)
    pi = mc.stationary(n, s, t)
    assert abs(p - q).max() < 1e-12
    assert np.abs(np.asarray(p.sum(axis=1)).ravel() - 1).max() < 1e-12
    flow = p.multiply(pi[:, None]).toarray()
    assert np.abs(flow - flow.T).max() < 1e-15
    assert mc.transition_beta(n, s, t) == pytest.approx((1 + t * t) / (2 * n * s * t * t))


def test_cheeger_and_lemmas():
    c = mc.conductance(3, 2, 2.0)
    assert c["pi_a"] <= 0.5
    assert c["gap_chain"] <= c["cheeger_bound"] <= c["bottleneck_bound"]
    lemmas = mc.lemma_suite(3, 2, 2.0)
    assert all(l["passed"] for l in lemmas if l["asserted"])
    assert all(l["caveat"] for l in lemmas if not l["asserted"])


def test_entropy():
    assert abs(mc.entropy(1, 2, 1.0) - math.log2(3)) < 1e-12
    p, mult = mc.schmidt_spectrum(4, 2, 1.5)
    assert abs(sum(a * b for a, b in zip(p, mult)) - 1) < 1e-12
    dist, mean = mc.midpoint_height(1, 1, 2.0)
    assert dist == pytest.approx([0.2, 0.8])


def test_mcmc_is_reproducible():
    a = mc.mcmc(3, 1, 2.0, 100000, seed=4)
    b = mc.mcmc(3, 1, 2.0, 100000, seed=4)
    assert a["trajectory_digest"] == b["trajectory_digest"]
    assert a["visit_counts"] == b["visit_counts"]
    assert sum(a["visit_counts"]) == 100000


def test_partitions():
    assert mc.partition_count(100) == 190569292
    assert 0.9 <= mc.hardy_ramanujan(100) / 190569292 <= 1.1


def test_report_matches_cli_schema():
    code, text, err = mc.run("gap", [1], [1], [2.0], format="json")
    assert code == 0, err
    doc = json.loads(text)
    assert doc["artifact_version"] == mc.__version__
    row = doc["tables"]["gap"][0]
    assert abs(row["gap"] - 1) < 1e-12
    assert row["config_hash"] == doc["config_hash"]
    code, _, err = mc.run("gap", [0], [1], [1.0])
    assert code == 2 and "InvalidParams" in err

import math

import pytest

hyperem = pytest.importorskip("hyperem")


def test_regime_names():
    assert hyperem.classify_regime(3, 2.0) == "Subcritical"
    assert hyperem.classify_regime(3, 0.5) == "Sublinear"


def test_ground_state_matches_integrator():
    traj = hyperem.integrate(3, 2.0, 6.0, r_max=5.0, tol=1e-12)
    for r in (0.5, 2.0, 4.5):
        u, _ = traj.at(r)
        assert u == pytest.approx(6.0 / math.cosh(r) ** 2, rel=1e-7)


def test_classify_and_separatrix():
    rep = hyperem.classify(3, 2.0, 7.0)
    assert rep.sign_class == "SignChanging"
    assert rep.zero_count == 1
    res = hyperem.find_separatrix(3, 2.0, tol_alpha=1e-3)
    assert res.converged
    assert res.alpha_star == pytest.approx(6.0, abs=1e-2)


def test_closed_form_family_b():
    f = hyperem.exact_ground_state(3, "B")
    assert f.amplitude == pytest.approx(6.0)
    assert f.printed_constant_matches


def test_errors_are_translated():
    with pytest.raises(hyperem.HyperemError):
        hyperem.classify(3, 2.0, 0.0)
    with pytest.raises(hyperem.HyperemError):
        hyperem.exact_ground_state(3, "Z")


def test_acceptance_criterion_runs():
    [(cid, _name, passed, detail)] = hyperem.run_acceptance([11])
    assert cid == 11
    assert passed, detail

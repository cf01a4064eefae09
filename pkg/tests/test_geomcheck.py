import math

import numpy as np
import pytest

from pnverify.errors import ConfigurationError
from pnverify.geomcheck import (Mutations, adjoint, compute_A, dN_mu, eval_dN_poly, eval_level, kphi_invariants,
                                make_context, nijenhuis_spectrum, random_orbit_point, run_suite, run_trials,
                                slice_closed_forms, spectrum_match_residual, suite_commutation, unitary_exp)
from pnverify.hermcat import build_space, maximal_orthogonal_set
from pnverify.minimality import quadratic_relation_residual
from pnverify.repforge import rep_for_space


@pytest.fixture(scope="module")
def ci3():
    return make_context(build_space("CI", 3))


def test_identity_group_element_fixes_rho(ci3):
    rep = ci3.rep
    u = unitary_exp(rep, np.zeros(rep.basis.dim))
    assert np.allclose(adjoint(rep, u, ci3.rho), ci3.rho)
    assert np.allclose(random_orbit_point(ci3, mode="slice", a=(0, 0, 0)).mu, ci3.rho)


def test_slice_quarter_turn_torus_part(ci3):
    rep = ci3.rep
    mu = random_orbit_point(ci3, mode="slice", a=(math.pi / 2,) * 3).mu
    expected = ci3.rho - sum(rep.coroot_element(r) for r in maximal_orthogonal_set(ci3.space).roots)
    assert np.allclose(rep.project(mu, ci3.k_phi), expected, atol=1e-12)


def test_generic_point_quadratic_relation(ci3):
    mu = random_orbit_point(ci3, seed=3).mu
    assert quadratic_relation_residual(ci3.rep, ci3.rep.matrix(mu), ci3.lam) <= 1e-9


def test_dN_mu_basic_cases(ci3, rng):
    rep = ci3.rep
    rho = ci3.rho
    h = rep.coroot_element(rep.system.simple_roots[0])
    assert np.allclose(dN_mu(ci3, rho, h), 0)
    alpha = ci3.space.noncompact_positive[0]
    y = rep.root_element("y", alpha)
    assert np.allclose(rep.bracket(y, rho), rep.root_element("x", alpha), atol=1e-12)
    mu = random_orbit_point(ci3, seed=11).mu
    xs = [rng.standard_normal(rep.basis.dim) for _ in range(3)]
    lhs = dN_mu(ci3, mu, 2 * xs[0] - xs[1] + 0.5 * xs[2])
    rhs = 2 * dN_mu(ci3, mu, xs[0]) - dN_mu(ci3, mu, xs[1]) + 0.5 * dN_mu(ci3, mu, xs[2])
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_A_vanishes_at_base_point(ci3):
    for lvl in ci3.chain.levels:
        assert np.allclose(compute_A(ci3, ci3.rho, lvl), 0)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_eval_dN_poly_matches_theorem(ci3, rng, r):
    mu = random_orbit_point(ci3, seed=5).mu
    x = ci3.random_element(rng)
    val = eval_dN_poly(ci3, 1, r, mu, x)
    ev = eval_level(ci3, 1, mu, x, rmax=r + 1)
    expected = -2j * ci3.lam * ev.dI[r] + 2 * ev.dI[r + 1]
    assert abs(val - expected) <= 1e-9 * max(1, abs(val))


@pytest.mark.parametrize("a, f, g", [(0.0, 0.0, 0.0), (math.pi / 4, -0.5, -0.5), (math.pi / 2, -1.0, 0.0)])
def test_slice_substitution(a, f, g):
    assert 0.5 * (math.cos(2 * a) - 1) == pytest.approx(f, abs=1e-15)
    assert -0.5 * math.sin(2 * a) == pytest.approx(g, abs=1e-15)


@pytest.mark.parametrize("tag, n, k", [("CI", 3, None), ("DIII", 4, None), ("BDI", 8, None), ("AIII", 5, 2)])
def test_slice_closed_forms(tag, n, k, rng):
    ctx = make_context(build_space(tag, n, k))
    a = rng.uniform(-math.pi, math.pi, size=ctx.space.rank)
    assert max(slice_closed_forms(ctx, a).values()) <= 1e-9


def test_kphi_base_point(ci3):
    v = kphi_invariants(ci3, ci3.rho)
    assert v["I10"] == pytest.approx(float(ci3.space.rho_norm2), abs=1e-12)
    assert v["I01"] == pytest.approx(0, abs=1e-12)


def test_spectrum_special_points(ci3):
    eigs = nijenhuis_spectrum(ci3, ci3.rho)
    assert np.allclose(eigs, 0, atol=1e-12)
    eigs = nijenhuis_spectrum(ci3, random_orbit_point(ci3, mode="slice", a=(math.pi / 2, 0.2, 0.1)).mu)
    assert np.min(np.abs(eigs - 2)) < 1e-12


def test_spectrum_random_diii5(rng):
    ctx = make_context(build_space("DIII", 5))
    a = rng.uniform(-math.pi, math.pi, size=2)
    eigs = nijenhuis_spectrum(ctx, random_orbit_point(ctx, mode="slice", a=a).mu)
    f = [0.5 * (math.cos(2 * t) - 1) for t in a]
    assert spectrum_match_residual(eigs, f) <= 1e-9


def test_commutation_aiii_levels():
    ctx = make_context(build_space("AIII", 4, 2))
    rep = suite_commutation(ctx, trials=20, seed=1, pairs=[(1, 2), (2, 2)], degrees=(2,))
    assert rep.passed and rep.max_residual <= 1e-9


@pytest.mark.parametrize("suite", ["explicit-formula", "quadratic", "basic-forms", "commutation", "slice", "kphi",
                                   "spectrum"])
@pytest.mark.parametrize("tag, n, k", [("AIII", 4, 2), ("BDI", 6, None), ("DIII", 4, None), ("CI", 3, None)])
def test_suites_pass(suite, tag, n, k):
    ctx = make_context(build_space(tag, n, k))
    report = run_suite(suite, ctx, trials=8, seed=2)
    assert report.passed, report.worst_entry
    assert report.to_json()["pass"] is True


@pytest.mark.parametrize("mutation, suite", [("drop-half", "basic-forms"), ("drop-half", "explicit-formula"),
                                             ("flip-mother-sign", "explicit-formula"),
                                             ("zero-lambda", "explicit-formula")])
def test_mutations_are_caught(mutation, suite):
    ctx = make_context(build_space("CI", 3), mutate=[mutation])
    report = run_suite(suite, ctx, trials=5, seed=4)
    if suite == "basic-forms":
        # dropping the half leaves the differentials basic; only the formula suites notice
        assert report.passed
    else:
        assert not report.passed
        assert report.worst_entry.residual >= 1e-2


def test_thread_count_does_not_change_results(ci3):
    a = run_suite("kphi", ci3, trials=12, seed=9, threads=1).to_json()
    b = run_suite("kphi", ci3, trials=12, seed=9, threads=4).to_json()
    assert a == b


def test_run_trials_reduces_by_max():
    merged = run_trials(lambda rng, k: {"x": float(k)}, 5, seed=0)
    assert merged == {"x": 4.0}
    with pytest.raises(ConfigurationError):
        run_trials(lambda rng, k: {}, 0, seed=0)


def test_bad_configuration(ci3):
    with pytest.raises(ConfigurationError):
        run_suite("nope", ci3)
    with pytest.raises(ConfigurationError):
        Mutations.parse(["halve"])
    with pytest.raises(ConfigurationError):
        random_orbit_point(ci3, mode="slice", a=(0.1,))
    with pytest.raises(ConfigurationError):
        space = build_space("BDI", 6)
        make_context(space, rep=rep_for_space(space, "fundamental"))

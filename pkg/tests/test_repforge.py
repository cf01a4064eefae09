import numpy as np
import pytest

from pnverify.errors import ConfigurationError
from pnverify.hermcat import build_space
from pnverify.repforge import (J_apply, bracket_closure_residual, clifford_residual, default_rep,
                               fundamental_rep, gamma_matrices, half_spin_rep, project, rep_for_space,
                               root_vectors, spin_rep)


def _eigs(m):
    return np.sort(np.linalg.eigvals(m).imag)


@pytest.mark.parametrize("n, k", [(2, 1), (4, 1), (5, 2), (6, 3)])
def test_su_rho_spectrum(n, k):
    space = build_space("AIII", n, k)
    rep = default_rep(space)
    got = _eigs(rep.torus(space.rho_pairing))
    want = np.sort([(n - k) / n] * k + [-k / n] * (n - k))
    assert np.allclose(got, want, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_so_fundamental_has_three_levels(n):
    space = build_space("BDI", n)
    rep = rep_for_space(space, "fundamental")
    vals = np.round(_eigs(rep.torus(space.rho_pairing)), 9)
    assert set(vals) == {-1.0, 0.0, 1.0}


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_spin_rho_two_eigenvalues(n):
    space = build_space("BDI", n)
    rep = rep_for_space(space, "spin")
    vals = np.round(_eigs(rep.torus(space.rho_pairing)), 9)
    assert set(vals) == {-0.5, 0.5}


def test_sp_rho_is_half_identity_blocks():
    space = build_space("CI", 3)
    rep = default_rep(space)
    vals = _eigs(rep.torus(space.rho_pairing))
    assert np.allclose(vals, [-0.5] * 3 + [0.5] * 3)


@pytest.mark.parametrize("big", [4, 5, 6, 7, 8])
def test_clifford_relations(big):
    assert clifford_residual(big) < 1e-12
    gammas = gamma_matrices(big)
    assert len(gammas) == big


def test_spin_sizes():
    assert spin_rep(8).dim == 16
    assert half_spin_rep(8).dim == 8
    assert spin_rep(7).dim == 8


@pytest.mark.parametrize("family, size, hdual", [("su", 2, 2), ("su", 4, 4), ("so", 7, 5), ("so", 8, 6),
                                                 ("sp", 6, 4)])
def test_killing_and_dual_coxeter(family, size, hdual):
    rep = fundamental_rep(family, size)
    assert rep.dual_coxeter == pytest.approx(hdual, abs=1e-10)
    assert bracket_closure_residual(rep) < 1e-12
    # normalized form is proportional to the trace form on the torus
    h = rep.coroot_element(rep.system.simple_roots[0])
    ratio = rep.killing[np.ix_(np.nonzero(h)[0], np.nonzero(h)[0])]
    assert np.all(np.isfinite(ratio))


def test_su2_root_vector_shape():
    rep = fundamental_rep("su", 2)
    (alpha,) = rep.system.positive_roots
    e = root_vectors(rep)[alpha]
    assert abs(e[0, 1]) > 0.5
    assert np.allclose(np.abs(e) > 1e-12, [[False, True], [False, False]])


@pytest.mark.parametrize("rep", [fundamental_rep("su", 4), fundamental_rep("so", 8), fundamental_rep("sp", 6),
                                 spin_rep(7)], ids=lambda r: r.name)
def test_long_root_normalization(rep):
    # (e, e^dagger)(alpha, alpha) = 2 for every positive root, not only simple ones
    for alpha in rep.system.positive_roots:
        x, y = rep.root_element("x", alpha), rep.root_element("y", alpha)
        pairing = -(rep.inner(x, x) + rep.inner(y, y)) / 4
        assert pairing * float(rep.system.norm2(alpha)) == pytest.approx(2, abs=1e-10)
    assert all(abs(v["killing_pairing_times_norm"] - 2) < 1e-10
               for v in rep.certificate["simple_roots"].values())


def test_J_action():
    rep = fundamental_rep("sp", 6)
    for alpha in rep.system.positive_roots:
        x, y = rep.root_element("x", alpha), rep.root_element("y", alpha)
        assert np.allclose(J_apply(x, rep), y)
        assert np.allclose(rep.J(rep.J(y)), -y)
    h = rep.coroot_element(rep.system.simple_roots[1])
    assert np.allclose(rep.J(h), 0)


def test_projection_identities(rng):
    space = build_space("DIII", 4)
    rep = default_rep(space)
    sub = space.k_phi
    x = rng.standard_normal(rep.basis.dim)
    px = project(x, sub, rep)
    assert np.allclose(project(px, sub, rep), px)
    assert np.allclose(px + rep.project_perp(x, sub), x)
    assert np.allclose(rep.project(rep.project_perp(x, sub), sub), 0)
    assert rep.inner(px, rep.project_perp(x, sub)) == pytest.approx(0, abs=1e-12)


def test_matrix_coefficient_round_trip(rng):
    rep = fundamental_rep("so", 7)
    x = rng.standard_normal(rep.basis.dim)
    assert np.allclose(rep.coefficients(rep.matrix(x)), x)
    y = rng.standard_normal(rep.basis.dim)
    assert np.allclose(rep.matrix(rep.bracket(x, y)),
                       rep.matrix(x) @ rep.matrix(y) - rep.matrix(y) @ rep.matrix(x))


def test_rep_selection_errors():
    with pytest.raises(ConfigurationError):
        rep_for_space(build_space("EIII"))
    with pytest.raises(ConfigurationError):
        rep_for_space(build_space("CI", 2), "spin")
    with pytest.raises((ConfigurationError, ValueError)):
        fundamental_rep("sp", 5)

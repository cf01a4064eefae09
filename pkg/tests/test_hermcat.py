from fractions import Fraction as F

import numpy as np
import pytest

from pnverify.errors import ConfigurationError
from pnverify.hermcat import (Subalgebra, build_space, catalog, check_compat, maximal_orthogonal_set,
                              noncompact_sums_are_not_roots, rho_phi, thimm_chain)
from pnverify.repforge import default_rep
from pnverify.rootsys import combination

CLASSICAL = [("AIII", 3, 1), ("AIII", 5, 2), ("AIII", 6, 3), ("BDI", 5, None), ("BDI", 6, None),
             ("DIII", 4, None), ("DIII", 5, None), ("CI", 3, None)]


@pytest.mark.parametrize("tag, n, k, rank", [
    ("AIII", 3, 1, 1), ("AIII", 5, 2, 2), ("AIII", 6, 3, 3), ("BDI", 7, None, 2),
    ("DIII", 5, None, 2), ("DIII", 6, None, 3), ("CI", 4, None, 4), ("EIII", None, None, 2),
    ("EVII", None, None, 3),
])
def test_ranks_and_orthogonal_sets(tag, n, k, rank):
    space = build_space(tag, n, k)
    assert space.rank == rank
    p = maximal_orthogonal_set(space)
    assert len(p.roots) == rank
    system = space.root_system
    assert all(system.inner(a, b) == 0 for a in p.roots for b in p.roots if a != b)
    assert all(space.phi_coefficient(a) == 1 for a in p.roots)


def test_eiii_data():
    space = build_space("EIII")
    assert space.algebra == "e6"
    assert space.k_phi_name == "so(10)+so(2)"
    assert space.rho_norm2 == F(-4, 3)
    system = space.root_system
    psi = combination(system, [F(1, 2)] * 4 + [F(-1, 2)], F(1, 2))
    assert set(maximal_orthogonal_set(space).roots) == {space.phi, psi}


def test_evii_data():
    space = build_space("EVII")
    assert space.phi == space.root_system.simple_roots[0]
    assert space.rho_norm2 == F(-3, 2)


@pytest.mark.parametrize("n, k", [(3, 1), (4, 2), (5, 2), (6, 4)])
def test_rho_aiii_matrix(n, k):
    space = build_space("AIII", n, k)
    coords, m = rho_phi(space, default_rep(space))
    assert coords == space.rho_phi_coords
    expected = 1j / n * np.diag([n - k] * k + [-k] * (n - k))
    assert np.allclose(m, expected, atol=1e-12)


@pytest.mark.parametrize("tag, n, k", CLASSICAL)
def test_chain_levels_are_compatible(tag, n, k):
    space = build_space(tag, n, k)
    chain = thimm_chain(space)
    if tag == "AIII":
        # the unitary chain peels off one u(1) at a time
        assert len(chain.levels) == n - 1
        assert chain.levels[0].name == f"s(u({n - 1})+u(1))"
    else:
        assert chain.levels[0].roots == space.k_phi.roots
    for lvl in chain.levels:
        assert check_compat(lvl, space).ok
    for a, b in zip(chain.levels, chain.levels[1:]):
        assert b.roots <= a.roots
    assert noncompact_sums_are_not_roots(space)


@pytest.mark.parametrize("tag, n, last", [("AIII", 5, "u(1)^4"), ("CI", 3, "u(1)^3")])
def test_chain_ends_in_torus(tag, n, last):
    space = build_space(tag, n, 2 if tag == "AIII" else None)
    chain = thimm_chain(space)
    assert chain.levels[-1].roots == frozenset()
    assert chain.levels[-1].name == last


def test_odd_bdi_chain_end():
    space = build_space("BDI", 5)
    assert thimm_chain(space).levels[-1].name.startswith("so(3)")


def test_compat_whole_algebra_and_counterexample():
    space = build_space("AIII", 3, 1)
    assert check_compat(space.whole, space).ok
    a1, a2 = space.root_system.simple_roots
    bad = Subalgebra("bad", frozenset({a1, a2, tuple(-x for x in a1), tuple(-x for x in a2)}), ())
    cert = check_compat(bad, space)
    assert not cert.ok and not cert.is_subalgebra


def test_catalog_is_stable():
    tags = [s.tag for s in catalog()]
    assert tags == [s.tag for s in catalog()]
    assert [t.rstrip("()0123456789,") for t in tags] == ["AIII", "BDI", "DIII", "CI", "EIII", "EVII"]


@pytest.mark.parametrize("args", [("AIII", 4, 4), ("AIII", 1, 1), ("BDI", 2), ("CI", 0), ("XX", 3)])
def test_bad_parameters(args):
    with pytest.raises((ConfigurationError, ValueError)):
        build_space(*args)

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from pnverify.errors import ConfigurationError, UsageError
from pnverify.rootsys import (DominantLabels, build_root_system, combination, enumerate_positive_roots_with,
                              epsilon_vector, inner, noncompact_predicate, weight_from_labels, weyl_closed)


@pytest.mark.parametrize("family, rank, n_pos", [
    ("A", 1, 1), ("A", 4, 10), ("B", 3, 9), ("C", 3, 9), ("D", 4, 12), ("D", 6, 30),
    ("E6", None, 36), ("E7", None, 63),
])
def test_positive_root_counts(family, rank, n_pos):
    system = build_root_system(family, rank)
    assert len(system.positive_roots) == n_pos
    assert len(system.roots) == 2 * n_pos


def test_a1_roots():
    system = build_root_system("A", 1)
    assert set(system.roots) == {(F(1), F(-1)), (F(-1), F(1))}


def test_e6_positive_root_types():
    system = build_root_system("E6")
    half = [r for r in system.positive_roots if any(x.denominator == 2 for x in r)]
    assert len(half) == 16
    assert len(system.positive_roots) - len(half) == 20


@pytest.mark.parametrize("family, rank", [("A", 3), ("B", 3), ("C", 4), ("D", 5), ("E6", None)])
def test_weyl_closure_and_long_roots(family, rank):
    system = build_root_system(family, rank)
    assert weyl_closed(system)
    assert system.long_root_norm2 == 2
    assert max(system.norm2(r) for r in system.roots) == 2


def test_e6_phi_norm_and_orthogonal_partner():
    system = build_root_system("E6")
    phi = system.simple_roots[5]
    eps = epsilon_vector(system)
    assert phi == combination(system, [F(-1, 2)] * 5, F(1, 2))
    assert system.inner(phi, phi) == 2
    assert inner(eps, eps, system) == 3
    psi = combination(system, [F(1, 2), F(1, 2), F(1, 2), F(1, 2), F(-1, 2)], F(1, 2))
    assert system.is_root(psi)
    assert system.inner(phi, psi) == 0


def test_inner_with_zero_and_mismatch():
    system = build_root_system("D", 4)
    zero = (F(0),) * 4
    assert all(system.inner(r, zero) == 0 for r in system.roots)
    with pytest.raises(UsageError):
        system.inner((F(1),), zero)


@pytest.mark.parametrize("labels, coords, eps", [
    ((0, 0, 0, 0, 0, 1), [], F(2, 3)),
    ((1, 0, 0, 0, 0, 0), [1], F(1, 3)),
    ((0,) * 6, [], 0),
])
def test_e6_weights_from_labels(labels, coords, eps):
    system = build_root_system("E6")
    assert weight_from_labels(labels, system) == combination(system, coords, eps)


def test_e7_weight_and_n0():
    system = build_root_system("E7")
    assert weight_from_labels((1, 0, 0, 0, 0, 0, 0), system) == combination(system, [1], F(1, 2))
    assert DominantLabels((0, 0, 0, 0, 0, 0, 3)).n0 == 3


def test_weight_from_labels_rejects_bad_input():
    with pytest.raises(UsageError):
        weight_from_labels((1, 0), build_root_system("A", 2))
    with pytest.raises(UsageError):
        DominantLabels((-1, 0))


@pytest.mark.parametrize("family, phi, count", [("E6", 5, 16), ("E7", 0, 27)])
def test_noncompact_counts(family, phi, count):
    system = build_root_system(family)
    assert len(enumerate_positive_roots_with(system, noncompact_predicate(system, phi))) == count
    assert enumerate_positive_roots_with(system, lambda r: False) == []


def test_unsupported_family():
    with pytest.raises(ConfigurationError):
        build_root_system("G2", 2)
    with pytest.raises(ConfigurationError):
        build_root_system("D", 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("A", 4), ("B", 3), ("C", 3), ("D", 5), ("E6", None)]),
       st.data())
def test_reflections_preserve_form(case, data):
    system = build_root_system(*case)
    a = data.draw(st.sampled_from(system.roots))
    b = data.draw(st.sampled_from(system.roots))
    s = data.draw(st.sampled_from(system.simple_roots))
    assert system.inner(system.reflect(a, s), system.reflect(b, s)) == system.inner(a, b)
    assert system.coroot_pairing(a, b).denominator == 1

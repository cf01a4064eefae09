"""Catalog of compact hermitian symmetric spaces and their root data.

Cartan elements are written in coweight coordinates: a vector ``h`` acts on a
weight ``w`` by the plain dot product ``w . h``.  The central element
``rho_phi`` is ``i`` times the coweight ``h_phi`` dual to the noncompact
simple root ``phi``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from . import _exact as ex
from .errors import ConfigurationError, StructuralError
from .rootsys import RootSystem, build_root_system

FAMILY_TAGS = ("AIII", "BDI", "DIII", "CI", "EIII", "EVII")


@dataclass(frozen=True, eq=False)
class Subalgebra:
    """Root-subset subalgebra: the full torus plus the listed roots.

    ``centrals`` holds the coweights ``h_1..h_i`` whose common kernel cuts out
    the roots (empty for the whole algebra)."""

    name: str
    roots: frozenset
    centrals: tuple = ()

    def contains(self, root) -> bool:
        return tuple(root) in self.roots


@dataclass(frozen=True, eq=False)
class SpaceDescriptor:
    family_tag: str
    params: tuple
    root_system: RootSystem
    phi_index: int
    rank: int
    algebra: str
    k_phi_name: str

    @property
    def tag(self) -> str:
        if not self.params:
            return self.family_tag
        return f"{self.family_tag}({','.join(str(p) for p in self.params)})"

    @property
    def phi(self) -> tuple:
        return self.root_system.simple_roots[self.phi_index]

    def phi_coefficient(self, root) -> int:
        return self.root_system.coefficients(root)[self.phi_index]

    def is_compact(self, root) -> bool:
        return self.phi_coefficient(root) == 0

    @cached_property
    def noncompact_positive(self) -> tuple:
        return tuple(r for r in self.root_system.positive_roots if not self.is_compact(r))

    @cached_property
    def compact_positive(self) -> tuple:
        return tuple(r for r in self.root_system.positive_roots if self.is_compact(r))

    @cached_property
    def rho_pairing(self) -> tuple:
        """Coweight ``h_phi``: ``alpha . h_phi`` is the phi-coefficient of ``alpha``."""
        return self.root_system.fundamental_coweight(self.phi_index)

    @cached_property
    def rho_phi_coords(self) -> tuple:
        """Weight-space vector ``w`` with ``(w, alpha) = alpha(rho_phi)/i``."""
        return ex.scale(1 / self.root_system.scale, self.rho_pairing)

    @cached_property
    def rho_norm2(self) -> Fraction:
        """Invariant-form value ``(rho_phi, rho_phi)`` (negative)."""
        return -ex.dot(self.rho_pairing, self.rho_pairing) / self.root_system.scale

    @cached_property
    def k_phi(self) -> Subalgebra:
        roots = frozenset(r for r in self.root_system.roots if self.is_compact(r))
        return Subalgebra(self.k_phi_name, roots, (self.rho_pairing,))

    @cached_property
    def whole(self) -> Subalgebra:
        return Subalgebra(self.algebra, frozenset(self.root_system.roots), ())

    def to_json(self) -> dict:
        p = maximal_orthogonal_set(self)
        return {
            "space": self.tag,
            "algebra": self.algebra,
            "k_phi": self.k_phi_name,
            "rank": self.rank,
            "phi": ex.fmt_vec(self.phi),
            "n_compact_positive": len(self.compact_positive),
            "n_noncompact_positive": len(self.noncompact_positive),
            "rho_phi": ex.fmt_vec(self.rho_phi_coords),
            "rho_phi_norm2": ex.fmt(self.rho_norm2),
            "P_phi": [ex.fmt_vec(r) for r in p.roots],
            "chain": [lvl.name for lvl in thimm_chain(self).levels],
        }


# -- construction ----------------------------------------------------------

def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigurationError(msg)


@lru_cache(maxsize=None)
def build_space(family_tag: str, n: int | None = None, k: int | None = None) -> SpaceDescriptor:
    """Descriptor for one of ``AIII(n,k)`` (su(n) / s(u(k)+u(n-k))), ``BDI(n)``
    (so(n+2)), ``DIII(n)`` (so(2n)), ``CI(n)`` (sp(2n)), ``EIII``, ``EVII``."""
    tag = str(family_tag).upper()
    _require(tag in FAMILY_TAGS, f"unknown family {family_tag!r}; expected one of {FAMILY_TAGS}")
    if tag == "AIII":
        _require(n is not None and k is not None, "AIII needs n and k")
        _require(n >= 2 and 1 <= k <= n - 1, f"AIII needs n >= 2 and 1 <= k <= n-1, got n={n}, k={k}")
        system = build_root_system("A", n - 1)
        return SpaceDescriptor(tag, (n, k), system, k - 1, min(k, n - k), f"su({n})",
                               f"s(u({k})+u({n - k}))")
    if tag == "BDI":
        _require(n is not None and n >= 3, f"BDI needs n >= 3, got {n}")
        big = n + 2
        fam = "D" if big % 2 == 0 else "B"
        system = build_root_system(fam, big // 2)
        return SpaceDescriptor(tag, (n,), system, 0, 2, f"so({big})", f"so({n})+so(2)")
    if tag == "DIII":
        _require(n is not None and n >= 3, f"DIII needs n >= 3, got {n}")
        system = build_root_system("D", n)
        return SpaceDescriptor(tag, (n,), system, n - 1, n // 2, f"so({2 * n})", f"u({n})")
    if tag == "CI":
        _require(n is not None and n >= 1, f"CI needs n >= 1, got {n}")
        system = build_root_system("C", n)
        return SpaceDescriptor(tag, (n,), system, n - 1, n, f"sp({2 * n})", f"u({n})")
    if tag == "EIII":
        return SpaceDescriptor(tag, (), build_root_system("E6"), 5, 2, "e6", "so(10)+so(2)")
    return SpaceDescriptor(tag, (), build_root_system("E7"), 0, 3, "e7", "e6+so(2)")


def rho_phi(space: SpaceDescriptor, rep=None):
    """Weight-space vector of ``rho_phi``; with a matrix rep also its matrix."""
    if rep is None:
        return space.rho_phi_coords
    return space.rho_phi_coords, rep.torus(space.rho_pairing)


# -- maximal orthogonal sets ---------------------------------------------

@dataclass(frozen=True)
class OrthogonalSet:
    roots: tuple
    cartan_split: dict = field(default_factory=dict)
    method: str = "greedy"


def _compatible(system: RootSystem, chosen, candidate) -> bool:
    return all(not system.is_root(ex.sub(candidate, b)) for b in chosen)


def _is_maximal(system: RootSystem, chosen, pool) -> bool:
    return all(r in chosen or not _compatible(system, chosen, r) for r in pool)


def _exhaustive(space: SpaceDescriptor, pool):
    system = space.root_system
    rest = [r for r in pool if r != space.phi]
    for combo in itertools.combinations(rest, space.rank - 1):
        chosen = [space.phi]
        ok = True
        for r in combo:
            if not _compatible(system, chosen, r):
                ok = False
                break
            chosen.append(r)
        if ok and _is_maximal(system, chosen, pool):
            return chosen
    return None


@lru_cache(maxsize=None)
def maximal_orthogonal_set(space: SpaceDescriptor) -> OrthogonalSet:
    """A maximal set ``P_phi`` of noncompact positive roots without root differences.

    Starts from ``phi`` and adds roots greedily in descending lexicographic
    order; if the result is maximal but smaller than the rank (a greedy dead
    end) an exhaustive search over sets containing ``phi`` is used instead.
    """
    system = space.root_system
    pool = sorted(space.noncompact_positive, reverse=True)
    chosen = [space.phi]
    for r in pool:
        if r not in chosen and _compatible(system, chosen, r):
            chosen.append(r)
    method = "greedy"
    if len(chosen) != space.rank:
        found = _exhaustive(space, pool)
        if found is None:
            raise StructuralError(f"{space.tag}: no maximal orthogonal set of size {space.rank}")
        chosen, method = found, "exhaustive"
    if not _is_maximal(system, chosen, pool):
        raise StructuralError(f"{space.tag}: orthogonal set is not maximal")
    for a, b in itertools.combinations(chosen, 2):
        if system.inner(a, b) != 0:
            raise StructuralError(f"{space.tag}: P_phi roots are not orthogonal")
    # t_P is the annihilator of P inside the torus; t_P' is spanned by the coroots of P
    split = {
        "t_P_dim": system.rank - len(chosen),
        "t_P_prime": tuple(system.coroot(a) for a in chosen),
    }
    return OrthogonalSet(tuple(chosen), split, method)


# -- Thimm chains ----------------------------------------------------------

@dataclass(frozen=True)
class ThimmChain:
    levels: tuple  # Subalgebra, outermost first


def _a_type_coweight(dim: int, m: int) -> tuple:
    # (1/m)(1, ..., 1, -(m-1), 0, ..., 0) on the first m coordinates
    v = [Fraction(0)] * dim
    for j in range(m - 1):
        v[j] = Fraction(1, m)
    v[m - 1] = Fraction(-(m - 1), m)
    return tuple(v)


def _level(system: RootSystem, name: str, centrals: Sequence[tuple]) -> Subalgebra:
    roots = frozenset(r for r in system.roots
                      if all(ex.dot(r, h) == 0 for h in centrals))
    return Subalgebra(name, roots, tuple(centrals))


def chain_coweights(space: SpaceDescriptor) -> list:
    system = space.root_system
    d = system.ambient_dim
    tag = space.family_tag
    if tag == "AIII":
        n = space.params[0]
        return [_a_type_coweight(d, n - i + 1) for i in range(1, n)]
    if tag == "BDI":
        m = system.rank
        return [tuple(Fraction(int(j == i)) for j in range(d)) for i in range(m - 1)]
    if tag in ("DIII", "CI"):
        n = system.rank
        first = tuple(Fraction(1, 2) for _ in range(d))
        return [first] + [_a_type_coweight(d, m) for m in range(n, 1, -1)]
    return [space.rho_pairing]


def _level_name(space: SpaceDescriptor, i: int) -> str:
    tag, p = space.family_tag, space.params
    if tag == "AIII":
        rest = p[0] - i
        if rest == 1:
            return f"u(1)^{p[0] - 1}"
        return f"s(u({rest})+u(1))" if i == 1 else f"s(u({rest})+u(1)^{i})"
    if tag == "BDI":
        big = p[0] + 2 - 2 * i
        return f"so({big})+so(2)^{i}" if big > 2 else f"so(2)^{i + 1}"
    if tag in ("DIII", "CI"):
        n = p[0]
        rest = n - i + 1
        return f"u({n})" if i == 1 else (f"u({rest})+u(1)^{i - 1}" if rest > 1 else f"u(1)^{n}")
    return space.k_phi_name


@lru_cache(maxsize=None)
def thimm_chain(space: SpaceDescriptor) -> ThimmChain:
    """Nested levels ``k_1 > k_2 > ...``; exceptional spaces stop at ``k_phi``."""
    system = space.root_system
    hs = chain_coweights(space)
    levels = []
    for i in range(1, len(hs) + 1):
        levels.append(_level(system, _level_name(space, i), hs[:i]))
    for outer, inner_ in zip(levels, levels[1:]):
        if not inner_.roots <= outer.roots:
            raise StructuralError(f"{space.tag}: chain is not nested")
    return ThimmChain(tuple(levels))


# -- subalgebra compatibility ---------------------------------------------

@dataclass(frozen=True)
class CompatCertificate:
    ok: bool
    is_subalgebra: bool
    reason: str
    witness: tuple = ()

    def to_json(self) -> dict:
        return {"ok": self.ok, "is_subalgebra": self.is_subalgebra, "reason": self.reason,
                "witness": [ex.fmt_vec(w) for w in self.witness]}


def check_compat(subalgebra: Subalgebra | frozenset | set, space: SpaceDescriptor) -> CompatCertificate:
    """Exact combinatorial check that ``k_1`` (torus + root subset) is a
    subalgebra whose complement is J-invariant and ad(k_1)-compatible with J."""
    system = space.root_system
    roots = subalgebra.roots if isinstance(subalgebra, Subalgebra) else frozenset(map(tuple, subalgebra))
    for r in roots:
        if not system.is_root(r):
            return CompatCertificate(False, False, "not a root", (r,))
        if ex.neg(r) not in roots:
            return CompatCertificate(False, False, "not a subalgebra: subset not symmetric", (r,))
    for a, b in itertools.combinations_with_replacement(sorted(roots), 2):
        s = ex.add(a, b)
        if system.is_root(s) and s not in roots:
            return CompatCertificate(False, False, "not a subalgebra: not closed under brackets", (a, b))
    outside = [r for r in system.roots if r not in roots]
    for a in roots:
        for b in outside:
            s = ex.add(a, b)
            if system.is_root(s) and system.is_positive(s) != system.is_positive(b):
                return CompatCertificate(False, True, "ad_X does not commute with J on the complement",
                                         (a, b))
    return CompatCertificate(True, True, "compatible")


def noncompact_sums_are_not_roots(space: SpaceDescriptor) -> bool:
    system = space.root_system
    nc = space.noncompact_positive
    return all(not system.is_root(ex.add(a, b)) for a in nc for b in nc)


def catalog(default_sizes: dict | None = None) -> list:
    """Representative descriptors of the six families in a fixed order."""
    sizes = default_sizes or {"AIII": (5, 2), "BDI": (6,), "DIII": (5,), "CI": (3,)}
    out = []
    for tag in FAMILY_TAGS:
        out.append(build_space(tag, *sizes.get(tag, ())))
    return out

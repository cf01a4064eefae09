"""Exact root systems of types A-D, E6, E7 in epsilon coordinates.

Vectors are tuples of :class:`fractions.Fraction`.  The bilinear form is the
Euclidean one multiplied by ``RootSystem.scale`` so that long roots have
squared length 2 (``scale`` is 1/2 for type C and 1 otherwise).

Two pairings coexist and must not be mixed up:

* ``inner(a, b)`` is the invariant form on weights (``scale * a.b``);
* ``a . h`` (plain dot product) evaluates a weight ``a`` on a Cartan element
  ``h`` written in the dual ("coweight") coordinates.  Coroots in these
  coordinates are ``2 a / |a|^2`` whatever the scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

from . import _exact as ex
from .errors import ConfigurationError, StructuralError, UsageError

FAMILIES = ("A", "B", "C", "D", "E6", "E7")


@dataclass(frozen=True)
class Root:
    vec: tuple
    is_positive: bool
    # meaningful only relative to a chosen non compact simple root
    is_compact: bool | None = None


@dataclass(frozen=True)
class DominantLabels:
    """Coroot pairings ``N_i = 2(L, a_i)/(a_i, a_i)``, one per simple root.

    For E7 the label pairing with ``alpha_7 = (eps - sum eps_i)/2`` is stored
    last; this is the label written ``N_0`` in the usual E7 formulas.
    """

    labels: tuple

    def __post_init__(self):
        labels = tuple(int(n) for n in self.labels)
        if any(n < 0 for n in labels):
            raise UsageError(f"dominant labels must be >= 0, got {labels}")
        object.__setattr__(self, "labels", labels)

    @property
    def n0(self) -> int:
        return self.labels[-1]


@dataclass(frozen=True, eq=False)
class RootSystem:
    family: str
    rank: int
    ambient_dim: int
    simple_roots: tuple
    scale: Fraction
    roots: tuple = field(repr=False)

    # -- bilinear data -----------------------------------------------------
    def inner(self, a: Sequence, b: Sequence) -> Fraction:
        if len(a) != self.ambient_dim or len(b) != self.ambient_dim:
            raise UsageError(
                f"vectors of length {len(a)}, {len(b)} do not live in the "
                f"{self.ambient_dim}-dimensional ambient space of {self.name}")
        return self.scale * ex.dot(a, b)

    def norm2(self, a: Sequence) -> Fraction:
        return self.inner(a, a)

    @property
    def name(self) -> str:
        return self.family if self.family.startswith("E") else f"{self.family}{self.rank}"

    @staticmethod
    def coroot(alpha: Sequence) -> tuple:
        """Coroot of ``alpha`` in coweight coordinates (``alpha . h_alpha = 2``)."""
        return ex.scale(Fraction(2) / ex.dot(alpha, alpha), alpha)

    def coroot_pairing(self, weight: Sequence, alpha: Sequence) -> Fraction:
        return 2 * self.inner(weight, alpha) / self.inner(alpha, alpha)

    # -- simple root expansions ------------------------------------------
    @cached_property
    def _gram_inverse(self):
        g = [[ex.dot(a, b) for b in self.simple_roots] for a in self.simple_roots]
        return ex.inverse(g)

    def span_coefficients(self, vec: Sequence) -> tuple:
        """Coefficients ``c`` with ``vec = sum c_i alpha_i`` (``vec`` in the root span)."""
        rhs = [ex.dot(a, vec) for a in self.simple_roots]
        coeffs = ex.matvec(self._gram_inverse, rhs)
        back = [sum((c * a[k] for c, a in zip(coeffs, self.simple_roots)), Fraction(0))
                for k in range(self.ambient_dim)]
        if tuple(back) != tuple(vec):
            raise UsageError(f"{ex.fmt_vec(vec)} is not in the span of the simple roots")
        return coeffs

    def coefficients(self, root: Sequence) -> tuple:
        """Integer simple-root coefficients of a root."""
        coeffs = self.span_coefficients(root)
        if any(c.denominator != 1 for c in coeffs):
            raise StructuralError(f"non integral expansion of root {ex.fmt_vec(root)}")
        return tuple(int(c) for c in coeffs)

    def coweight_coordinates(self, h: Sequence) -> tuple:
        """Coefficients of ``h`` on the simple coroots (``h`` in their span)."""
        coroots = [self.coroot(a) for a in self.simple_roots]
        g = [[ex.dot(a, b) for b in coroots] for a in coroots]
        coeffs = ex.matvec(ex.inverse(g), [ex.dot(a, h) for a in coroots])
        back = tuple(sum((c * a[k] for c, a in zip(coeffs, coroots)), Fraction(0))
                     for k in range(self.ambient_dim))
        if back != tuple(h):
            raise UsageError(f"{ex.fmt_vec(h)} is not in the span of the coroots")
        return coeffs

    # -- root bookkeeping -------------------------------------------------
    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    def is_root(self, vec: Sequence) -> bool:
        return tuple(vec) in self.root_set

    @cached_property
    def positive_roots(self) -> tuple:
        return tuple(r for r in self.roots if self._is_positive(r))

    def _is_positive(self, root) -> bool:
        return all(c >= 0 for c in self.coefficients(root))

    def is_positive(self, root: Sequence) -> bool:
        return tuple(root) in self._positive_set

    @cached_property
    def _positive_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    def root_objects(self) -> list[Root]:
        return [Root(r, self.is_positive(r)) for r in self.roots]

    def height(self, root: Sequence) -> int:
        return sum(self.coefficients(root))

    @cached_property
    def highest_root(self) -> tuple:
        return max(self.positive_roots, key=lambda r: (self.height(r), r))

    def reflect(self, vec: Sequence, alpha: Sequence) -> tuple:
        c = 2 * ex.dot(vec, alpha) / ex.dot(alpha, alpha)
        return ex.sub(tuple(vec), ex.scale(c, alpha))

    @cached_property
    def long_root_norm2(self) -> Fraction:
        return max(self.norm2(r) for r in self.simple_roots)

    @cached_property
    def cartan_matrix(self) -> tuple:
        """``A[i][j] = 2 (a_i, a_j) / (a_j, a_j)``."""
        return tuple(tuple(int(self.coroot_pairing(a, b)) for b in self.simple_roots)
                     for a in self.simple_roots)

    def fundamental_weight(self, i: int) -> tuple:
        labels = [0] * self.rank
        labels[i] = 1
        return _weight_from_labels(self, labels)

    def fundamental_coweight(self, i: int) -> tuple:
        """Cartan element ``h`` (coweight coordinates, in the root span) with
        ``alpha_j . h = delta_ij``."""
        g = [[ex.dot(a, b) for b in self.simple_roots] for a in self.simple_roots]
        rhs = [Fraction(int(j == i)) for j in range(self.rank)]
        coeffs = ex.matvec(ex.inverse(g), rhs)
        return tuple(sum((c * a[k] for c, a in zip(coeffs, self.simple_roots)), Fraction(0))
                     for k in range(self.ambient_dim))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "scale": ex.fmt(self.scale),
            "simple_roots": [ex.fmt_vec(a) for a in self.simple_roots],
            "n_roots": len(self.roots),
            "n_positive": len(self.positive_roots),
        }


# -- construction ----------------------------------------------------------

def _unit(dim: int, i: int, c=1) -> tuple:
    v = [Fraction(0)] * dim
    v[i] = Fraction(c)
    return tuple(v)


def _simple_roots(family: str, rank: int) -> tuple[int, tuple, Fraction]:
    e = _unit
    if family == "A":
        d = rank + 1
        simple = [ex.sub(e(d, i), e(d, i + 1)) for i in range(rank)]
        return d, tuple(simple), Fraction(1)
    if family == "B":
        d = rank
        simple = [ex.sub(e(d, i), e(d, i + 1)) for i in range(rank - 1)] + [e(d, rank - 1)]
        return d, tuple(simple), Fraction(1)
    if family == "C":
        d = rank
        simple = [ex.sub(e(d, i), e(d, i + 1)) for i in range(rank - 1)] + [e(d, rank - 1, 2)]
        return d, tuple(simple), Fraction(1, 2)
    if family == "D":
        d = rank
        simple = [ex.sub(e(d, i), e(d, i + 1)) for i in range(rank - 1)]
        simple.append(ex.add(e(d, rank - 2), e(d, rank - 1)))
        return d, tuple(simple), Fraction(1)
    half = Fraction(1, 2)
    if family == "E6":
        eps = ex.ratvec([0, 0, 0, 0, 0, 1, 1, 1])
        simple = [ex.sub(e(8, i), e(8, i + 1)) for i in range(4)]
        simple.append(ex.add(e(8, 3), e(8, 4)))
        simple.append(ex.scale(half, ex.sub(eps, ex.ratvec([1] * 5 + [0] * 3))))
        return 8, tuple(simple), Fraction(1)
    if family == "E7":
        eps = ex.ratvec([0] * 6 + [1, 1])
        simple = [ex.sub(e(8, i), e(8, i + 1)) for i in range(5)]
        simple.append(ex.add(e(8, 4), e(8, 5)))
        simple.append(ex.scale(half, ex.sub(eps, ex.ratvec([1] * 6 + [0, 0]))))
        return 8, tuple(simple), Fraction(1)
    raise ConfigurationError(f"unsupported family {family!r}")


def _weyl_closure(simple: Sequence[tuple]) -> set:
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for a in simple:
                c = 2 * ex.dot(v, a) / ex.dot(a, a)
                if c == 0:
                    continue
                w = ex.sub(v, ex.scale(c, a))
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    return roots


_MIN_RANK = {"A": 1, "B": 2, "C": 1, "D": 3}
_E_RANK = {"E6": 6, "E7": 7}


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int | None = None) -> RootSystem:
    """Root system with simple roots ordered as in the standard Dynkin labelling.

    ``family`` is one of ``A B C D E6 E7``; for E6/E7 ``rank`` may be omitted.
    """
    family = str(family).upper()
    if family not in FAMILIES:
        raise ConfigurationError(f"unsupported family {family!r}; expected one of {FAMILIES}")
    if family in _E_RANK:
        if rank is not None and rank != _E_RANK[family]:
            raise ConfigurationError(f"{family} has rank {_E_RANK[family]}, not {rank}")
        rank = _E_RANK[family]
    elif rank is None or int(rank) < _MIN_RANK[family]:
        raise ConfigurationError(f"{family}{rank}: rank must be >= {_MIN_RANK[family]}")
    rank = int(rank)
    dim, simple, scale = _simple_roots(family, rank)
    roots = tuple(sorted(_weyl_closure(simple)))
    system = RootSystem(family, rank, dim, simple, scale, roots)
    n_pos = len(system.positive_roots)
    if 2 * n_pos != len(roots):
        raise StructuralError(f"{system.name}: positive roots are not half of all roots")
    norms = {system.norm2(r) for r in roots}
    if max(norms) != 2:
        raise StructuralError(f"{system.name}: long roots must have (a, a) = 2, got {norms}")
    return system


def inner(a: Sequence, b: Sequence, system: RootSystem) -> Fraction:
    return system.inner(a, b)


def _weight_from_labels(system: RootSystem, labels: Sequence[int]) -> tuple:
    # Lambda = sum_j c_j alpha_j with sum_j c_j A[j][i] = N_i
    a = system.cartan_matrix
    at = [[Fraction(a[j][i]) for j in range(system.rank)] for i in range(system.rank)]
    coeffs = ex.matvec(ex.inverse(at), [Fraction(n) for n in labels])
    return tuple(sum((c * s[k] for c, s in zip(coeffs, system.simple_roots)), Fraction(0))
                 for k in range(system.ambient_dim))


def weight_from_labels(labels: DominantLabels | Sequence[int], system: RootSystem) -> tuple:
    """Dominant weight with the given coroot pairings (E6 and E7 only)."""
    if system.family not in _E_RANK:
        raise UsageError("weight_from_labels is defined for E6 and E7 only")
    if not isinstance(labels, DominantLabels):
        labels = DominantLabels(tuple(labels))
    if len(labels.labels) != system.rank:
        raise UsageError(f"{system.name} needs {system.rank} labels, got {len(labels.labels)}")
    weight = _weight_from_labels(system, labels.labels)
    for n, alpha in zip(labels.labels, system.simple_roots):
        if system.coroot_pairing(weight, alpha) != n:
            raise StructuralError("weight does not reproduce its labels")
    return weight


def enumerate_positive_roots_with(system: RootSystem,
                                  predicate: Callable[[tuple], bool]) -> list:
    """Positive roots satisfying ``predicate``, in lexicographic order."""
    return sorted(r for r in system.positive_roots if predicate(r))


def noncompact_predicate(system: RootSystem, phi_index: int) -> Callable[[tuple], bool]:
    return lambda r: system.coefficients(r)[phi_index] == 1


def weyl_closed(system: RootSystem) -> bool:
    """Exhaustive check that every simple reflection maps roots to roots."""
    return all(system.reflect(r, a) in system.root_set
               for r in system.roots for a in system.simple_roots)


def epsilon_vector(system: RootSystem) -> tuple:
    """The vector written ``eps`` in E6 (eps_6+eps_7+eps_8) and E7 (eps_7+eps_8)."""
    if system.family == "E6":
        return ex.ratvec([0] * 5 + [1, 1, 1])
    if system.family == "E7":
        return ex.ratvec([0] * 6 + [1, 1])
    raise UsageError("eps is defined for E6 and E7 only")


def combination(system: RootSystem, coords: Iterable, eps_coeff=0) -> tuple:
    """Build ``sum coords_i eps_i + eps_coeff * eps`` for the exceptional systems."""
    coords = list(coords)
    base = list(ex.ratvec(coords + [0] * (system.ambient_dim - len(coords))))
    if eps_coeff:
        base = list(ex.add(tuple(base), ex.scale(eps_coeff, epsilon_vector(system))))
    return tuple(base)

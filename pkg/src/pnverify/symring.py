"""Exact polynomial ring in the slice variables ``f_1..f_m`` with ``d`` and ``d_N``.

The Nijenhuis differential acts on the slice variables by the eigen-rule
``d_N f_j = -2 f_j df_j`` and is extended as a derivation.  For rank 2 this
rule is a theorem; for higher rank (EVII) it is taken as an axiom and reports
say so.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import sympy as sp

from ._exact import fmt, from_sympy
from .errors import ConfigurationError, UsageError

MAX_MEMBERSHIP_DEGREE = 12


@dataclass(frozen=True)
class SymPoly:
    """Polynomial with rational coefficients keyed by exponent tuples."""

    nvars: int
    terms: tuple = ()  # sorted ((exps, Fraction), ...), no zero coefficients

    @classmethod
    def from_dict(cls, nvars: int, coeffs: Mapping) -> "SymPoly":
        clean = {}
        for exps, c in coeffs.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ConfigurationError(f"bad exponent tuple {exps} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        return cls(nvars, tuple(sorted((e, c) for e, c in clean.items() if c)))

    @classmethod
    def const(cls, nvars: int, c) -> "SymPoly":
        return cls.from_dict(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, j: int) -> "SymPoly":
        exps = [0] * nvars
        exps[j] = 1
        return cls.from_dict(nvars, {tuple(exps): 1})

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def _coerce(self, other) -> "SymPoly":
        if isinstance(other, SymPoly):
            if other.nvars != self.nvars:
                raise UsageError("polynomials live in rings with different variable counts")
            return other
        return SymPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = self.coeffs
        for e, c in other.terms:
            out[e] = out.get(e, Fraction(0)) + c
        return SymPoly.from_dict(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SymPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms, other.terms):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
        return SymPoly.from_dict(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = SymPoly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def partial(self, j: int) -> "SymPoly":
        out = {}
        for e, c in self.terms:
            if e[j]:
                e2 = list(e)
                e2[j] -= 1
                out[tuple(e2)] = c * e[j]
        return SymPoly.from_dict(self.nvars, out)

    def permute(self, perm: Sequence[int]) -> "SymPoly":
        """Rename ``f_j`` to ``f_{perm[j]}``."""
        out = {}
        for e, c in self.terms:
            e2 = [0] * self.nvars
            for j, k in enumerate(perm):
                e2[k] = e[j]
            out[tuple(e2)] = c
        return SymPoly.from_dict(self.nvars, out)

    def is_symmetric(self) -> bool:
        return all(self.permute(p) == self for p in itertools.permutations(range(self.nvars)))

    def evaluate(self, f: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms:
            term = c
            for x, k in zip(f, e):
                term *= Fraction(x) ** k
            total += term
        return total

    def to_json(self) -> list:
        return [{"exponents": list(e), "coeff": fmt(c)} for e, c in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"f{j + 1}^{k}" if k > 1 else f"f{j + 1}" for j, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class OneForm:
    """``sum_j g_j df_j`` with polynomial coefficients."""

    coeffs: tuple

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return OneForm(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, p):
        return OneForm(tuple(a * p for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def permute(self, perm: Sequence[int]) -> "OneForm":
        out = [None] * self.nvars
        for j, k in enumerate(perm):
            out[k] = self.coeffs[j].permute(perm)
        return OneForm(tuple(out))

    def to_json(self) -> list:
        return [g.to_json() for g in self.coeffs]


def d(p: SymPoly) -> OneForm:
    return OneForm(tuple(p.partial(j) for j in range(p.nvars)))


def dN(p: SymPoly) -> OneForm:
    """Derivation with ``d_N f_j = -2 f_j df_j``."""
    return OneForm(tuple(SymPoly.var(p.nvars, j) * p.partial(j) * (-2) for j in range(p.nvars)))


def two_form_d(alpha: OneForm) -> dict:
    """Components ``(j, k), j < k`` of ``d alpha``; only nonzero entries are kept."""
    m = alpha.nvars
    out = {}
    for j, k in itertools.combinations(range(m), 2):
        v = alpha.coeffs[k].partial(j) - alpha.coeffs[j].partial(k)
        if not v.is_zero():
            out[(j, k)] = v
    return out


def two_form_dN(alpha: OneForm) -> dict:
    """``d_N alpha`` using ``d_N(df_k) = -d(d_N f_k) = 0``."""
    m = alpha.nvars
    f = [SymPoly.var(m, j) for j in range(m)]
    out = {}
    for j, k in itertools.combinations(range(m), 2):
        v = f[j] * alpha.coeffs[k].partial(j) * (-2) - f[k] * alpha.coeffs[j].partial(k) * (-2)
        if not v.is_zero():
            out[(j, k)] = v
    return out


# -- constants and invariants ------------------------------------------------

@dataclass(frozen=True)
class RingConstants:
    c: tuple
    rho_norm2: Fraction
    label: str = ""

    @property
    def nvars(self) -> int:
        return len(self.c)

    def to_json(self) -> dict:
        return {"label": self.label, "c": [fmt(x) for x in self.c], "rho_norm2": fmt(self.rho_norm2)}


def ring_constants(space) -> RingConstants:
    """``c_j = -2/(alpha_j, alpha_j)`` over the orthogonal set, and ``(rho, rho)``."""
    from .hermcat import maximal_orthogonal_set

    system = space.root_system
    roots = maximal_orthogonal_set(space).roots
    c = tuple(Fraction(-2) / system.norm2(r) for r in roots)
    return RingConstants(c, Fraction(space.rho_norm2), space.tag)


def power_sum(n: int, constants: RingConstants) -> SymPoly:
    if n < 1:
        raise ConfigurationError("power sums start at n = 1")
    m = constants.nvars
    return SymPoly.from_dict(m, {tuple(n if i == j else 0 for i in range(m)): c
                                 for j, c in enumerate(constants.c)})


def kphi_invariants(constants: RingConstants) -> dict:
    p1, p2, p3 = (power_sum(n, constants) for n in (1, 2, 3))
    r = constants.rho_norm2
    return {
        "I10": p1 + r,
        "I20": p1 * 2 + p2 * 2 + r,
        "I01": p1 + p2,
        "I11": p1 + p2 * 3 + p3 * 2,
    }


# -- membership --------------------------------------------------------------

@dataclass(frozen=True)
class MembershipVerdict:
    is_member: bool
    max_degree: int
    products: tuple        # labels of the spanning products
    combination: tuple     # coefficients when a member
    functional: dict       # monomial -> coefficient when not a member
    pairing: Fraction      # functional applied to the target (nonzero certifies)

    def to_json(self) -> dict:
        return {
            "is_member": self.is_member,
            "max_degree": self.max_degree,
            "products": list(self.products),
            "combination": [fmt(c) for c in self.combination],
            "functional": [{"exponents": list(e), "coeff": fmt(c)}
                           for e, c in sorted(self.functional.items())],
            "functional_on_target": fmt(self.pairing),
        }


def _products(generators: Sequence[SymPoly], names, max_degree: int):
    nvars = generators[0].nvars
    out = [(SymPoly.const(nvars, 1), "1")]
    degs = [g.degree for g in generators]
    if any(dg < 1 for dg in degs):
        raise ConfigurationError("generators must have positive degree")

    def rec(start, poly, label, deg):
        for i in range(start, len(generators)):
            nd = deg + degs[i]
            if nd > max_degree:
                continue
            np_ = poly * generators[i]
            nl = names[i] if label == "1" else f"{label}*{names[i]}"
            out.append((np_, nl))
            rec(i, np_, nl, nd)

    rec(0, SymPoly.const(nvars, 1), "1", 0)
    return out


def subring_membership(target: SymPoly, generators: Sequence[SymPoly], max_degree: int,
                       names: Sequence[str] | None = None) -> MembershipVerdict:
    """Decide whether ``target`` is a rational combination of products of
    ``generators`` of total degree at most ``max_degree``."""
    if max_degree > MAX_MEMBERSHIP_DEGREE:
        raise ConfigurationError(f"max_degree {max_degree} exceeds the guard {MAX_MEMBERSHIP_DEGREE}")
    if target.degree > max_degree:
        raise ConfigurationError("target degree exceeds max_degree")
    names = list(names) if names is not None else [f"g{i + 1}" for i in range(len(generators))]
    prods = _products(list(generators), names, max_degree)
    monos = sorted({e for p, _ in prods for e, _ in p.terms} | {e for e, _ in target.terms})
    cols = [p.coeffs for p, _ in prods]
    P = sp.Matrix([[sp.Rational(str(col.get(e, 0))) for col in cols] for e in monos])
    t = sp.Matrix([sp.Rational(str(target.coeffs.get(e, 0))) for e in monos])
    labels = tuple(lbl for _, lbl in prods)
    aug = P.row_join(t)
    if aug.rank() == P.rank():
        sol, params = P.gauss_jordan_solve(t)
        sol = sol.subs({s: 0 for s in params})
        combo = tuple(from_sympy(x) for x in sol)
        return MembershipVerdict(True, max_degree, labels, combo, {}, Fraction(0))
    for vec in P.T.nullspace():
        pairing = (vec.T * t)[0]
        if pairing != 0:
            functional = {e: from_sympy(v) for e, v in zip(monos, vec) if v != 0}
            return MembershipVerdict(False, max_degree, labels, (), functional, from_sympy(pairing))
    raise AssertionError("rank test and left null space disagree")  # pragma: no cover


def functional_certifies(verdict: MembershipVerdict, target: SymPoly, generators, names=None) -> bool:
    """Independent re-check of a non-membership certificate."""
    if verdict.is_member:
        return False
    names = list(names) if names is not None else [f"g{i + 1}" for i in range(len(generators))]

    def apply(p):
        return sum((verdict.functional.get(e, Fraction(0)) * c for e, c in p.terms), Fraction(0))

    prods = _products(list(generators), names, verdict.max_degree)
    return all(apply(p) == 0 for p, _ in prods) and apply(target) != 0


# -- certificates ------------------------------------------------------------

@dataclass
class SymbolicCertificate:
    name: str
    constants: RingConstants
    identities: dict               # identity name -> exact residual is zero
    axiomatized: bool
    membership: MembershipVerdict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        ok = all(self.identities.values())
        if self.membership is not None:
            ok = ok and self.extra.get("expected_member") == self.membership.is_member \
                and self.extra.get("certificate_valid", True)
        return ok

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "constants": self.constants.to_json(),
            "identities": {k: bool(v) for k, v in sorted(self.identities.items())},
            "eigen_rule": "axiomatized" if self.axiomatized else "proved for rank 2",
            "membership": None if self.membership is None else self.membership.to_json(),
            "extra": self.extra,
            "pass": self.passed,
        }


def _eiii_constants() -> RingConstants:
    from .hermcat import build_space
    return ring_constants(build_space("EIII"))


def _evii_constants() -> RingConstants:
    from .hermcat import build_space
    return ring_constants(build_space("EVII"))


def verify_eiii(constants: RingConstants | None = None) -> SymbolicCertificate:
    """Rank-2 relations: ``p_3`` through ``p_1, p_2`` and closure of ``d_N``."""
    k = constants or _eiii_constants()
    if k.nvars != 2:
        raise ConfigurationError("the EIII certificate needs two slice variables")
    p = {n: power_sum(n, k) for n in range(1, 6)}
    ids = {
        "p3_relation": (p[3] + p[1] * p[2] * Fraction(3, 2) + p[1] ** 3 * Fraction(1, 2)).is_zero(),
        "dN_p1_eq_minus_dp2": (dN(p[1]) + d(p[2])).is_zero(),
        "dN_p2_eq_two_thirds_d": (dN(p[2]) - d(p[1] * p[2] * 3 + p[1] ** 3) * Fraction(2, 3)).is_zero(),
        "dN_squared_zero": all(not two_form_dN(dN(p[n])) for n in range(1, 5)),
        "d_squared_zero": all(not two_form_d(d(p[n])) for n in range(1, 5)),
    }
    # rank-2 completeness: d_N p_n = d(q) with q in Q[p1, p2] for n <= 4
    reductions = {}
    for n in range(1, 5):
        prim = p[n + 1] * Fraction(-2 * n, n + 1)
        ids[f"dN_p{n}_exact"] = (dN(p[n]) - d(prim)).is_zero()
        v = subring_membership(prim, [p[1], p[2]], n + 1, ["p1", "p2"])
        ids[f"dN_p{n}_in_p1_p2"] = v.is_member
        reductions[f"p{n + 1}"] = {lbl: fmt(c) for lbl, c in zip(v.products, v.combination) if c}
    return SymbolicCertificate("eiii", k, ids, axiomatized=False,
                               extra={"primitives_in_p1_p2": reductions})


def verify_evii(constants: RingConstants | None = None, max_degree: int = 3) -> SymbolicCertificate:
    """``I11`` is not a polynomial in ``I10, I20`` through f-degree 3."""
    k = constants or _evii_constants()
    inv = kphi_invariants(k)
    p = {n: power_sum(n, k) for n in range(1, 5)}
    gens = [inv["I10"], inv["I20"]]
    names = ["I10", "I20"]
    v = subring_membership(inv["I11"], gens, max_degree, names)
    ids = {
        "dN_p1_eq_minus_dp2": (dN(p[1]) + d(p[2])).is_zero(),
        "dN_p2_eq_minus_four_thirds_dp3": (dN(p[2]) + d(p[3]) * Fraction(4, 3)).is_zero(),
        "targets_symmetric": inv["I11"].is_symmetric() and all(g.is_symmetric() for g in gens),
    }
    extra = {"expected_member": False,
             "certificate_valid": functional_certifies(v, inv["I11"], gens, names)}
    return SymbolicCertificate("evii", k, ids, axiomatized=True, membership=v, extra=extra)

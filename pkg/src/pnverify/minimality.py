"""phi-gradings, minimality verdicts and the exceptional nonexistence scan."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _exact as ex
from .errors import StructuralError, UsageError
from .hermcat import SpaceDescriptor, Subalgebra, maximal_orthogonal_set, thimm_chain
from .repforge import MatrixRep
from .rootsys import RootSystem, weight_from_labels

CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class PhiGrading:
    """Eigenspaces of a central torus element, by level ``l``."""

    levels: dict          # l -> column indices into the weight basis
    top: Fraction         # top eigenvalue divided by i
    exact_values: dict    # l -> eigenvalue divided by i

    @property
    def lambda_phi(self) -> complex:
        return 1j * float(self.top)

    @property
    def eigenvalues(self) -> dict:
        return {l: 1j * float(v) for l, v in self.exact_values.items()}

    @property
    def dims(self) -> dict:
        return {l: len(c) for l, c in self.levels.items()}


def _grade_columns(rep: MatrixRep, h, columns: Sequence[int]) -> PhiGrading:
    """Grade the span of weight-basis columns by ``T(h)`` (eigenvalue ``i w.h``)."""
    cols = list(columns)
    qs = rep.Q[:, cols]
    t = qs.conj().T @ rep.torus(h) @ qs
    herm = -1j * t
    if np.max(np.abs(herm - herm.conj().T), initial=0.0) > 1e-10:
        raise StructuralError("central element is not anti-Hermitian on the subspace")
    vals, vecs = np.linalg.eigh(herm)
    off = np.max(np.abs(t - (vecs * (1j * vals)) @ vecs.conj().T), initial=0.0)
    if off > 1e-9:
        raise StructuralError("central element is numerically defective")
    # numerical spectrum must cluster on the exact weight values
    exact = sorted({ex.dot(rep.weights[c], h) for c in cols}, reverse=True)
    if any(min(abs(v - float(e)) for e in exact) > CLUSTER_TOL for v in vals):
        raise StructuralError("spectrum does not match the weight data")
    top = exact[0]
    levels: dict = {}
    values: dict = {}
    for c in cols:
        val = ex.dot(rep.weights[c], h)
        gap = top - val
        if gap.denominator != 1:
            raise StructuralError(f"eigenvalue string is not integral (gap {gap})")
        ell = int(gap)
        levels.setdefault(ell, []).append(c)
        values[ell] = val
    levels = {l: tuple(levels[l]) for l in sorted(levels)}
    return PhiGrading(levels, top, {l: values[l] for l in sorted(values)})


def grade_by_rho(rep: MatrixRep, space: SpaceDescriptor) -> PhiGrading:
    """Decomposition of the representation into ``rho_phi``-eigenspaces."""
    if rep.system is not space.root_system:
        raise UsageError("representation does not belong to this space")
    return _grade_columns(rep, space.rho_pairing, range(rep.dim))


def _joint_kernel_dim(rep: MatrixRep, columns, roots) -> int:
    cols = list(columns)
    qs = rep.Q[:, cols]
    if not roots:
        return len(cols)
    stacked = np.vstack([qs.conj().T @ rep.root_vectors[r] @ qs for r in roots])
    s = np.linalg.svd(stacked, compute_uv=False)
    rank = int(np.sum(s > 1e-9))
    return len(cols) - rank


@dataclass(frozen=True)
class MinimalityVerdict:
    is_minimal: bool
    lambda_im: Fraction  # Lambda_phi = i * lambda_im
    dims: dict
    reason: str
    witness: dict = field(default_factory=dict)

    @property
    def lambda_phi(self) -> complex:
        return 1j * float(self.lambda_im)

    @property
    def dim_plus(self) -> int:
        return self.dims.get(0, 0)

    @property
    def dim_minus(self) -> int:
        return self.dims.get(1, 0)

    def to_json(self) -> dict:
        return {
            "is_minimal": self.is_minimal,
            "lambda_phi": {"re": 0.0, "im": float(self.lambda_im)},
            "lambda_phi_over_i": ex.fmt(self.lambda_im),
            "dims": {str(k): v for k, v in self.dims.items()},
            "reason": self.reason,
            "witness": self.witness,
        }


def _verdict(rep: MatrixRep, grading: PhiGrading, sub_roots) -> MinimalityVerdict:
    levels = grading.levels
    dims = grading.dims
    lam = grading.top
    if len(levels) == 1:
        return MinimalityVerdict(False, lam, dims, "single level (trivial grading)")
    if set(levels) != {0, 1}:
        vals = [grading.exact_values[l] for l in sorted(levels)[:3]]
        return MinimalityVerdict(False, lam, dims, "more than two levels",
                                 {"eigenvalues_over_i": [ex.fmt(v) for v in vals]})
    positive = [r for r in sub_roots if rep.system.is_positive(r)]
    kernel = _joint_kernel_dim(rep, levels[0], positive)
    if kernel != 1:
        return MinimalityVerdict(False, lam, dims, "top level is reducible",
                                 {"highest_weight_vectors": kernel})
    return MinimalityVerdict(True, lam, dims, "two levels, irreducible top")


def is_phi_minimal(rep: MatrixRep, space: SpaceDescriptor) -> MinimalityVerdict:
    """Verdict per the two-level / irreducible-top definition.

    The trivial representation (one level) is reported as not minimal."""
    grading = grade_by_rho(rep, space)
    verdict = _verdict(rep, grading, space.k_phi.roots)
    if verdict.is_minimal:
        res = quadratic_relation_residual(rep, rep.torus(space.rho_pairing), verdict.lambda_phi)
        if res > 1e-9:
            raise StructuralError(f"minimal rep violates the quadratic relation ({res:.1e})")
    return verdict


def quadratic_relation_residual(rep: MatrixRep, mu: np.ndarray, lam: complex) -> float:
    """``|(mu - L)(mu - L + i)|`` normalized by ``max(1, |mu|^2)``."""
    eye = np.eye(mu.shape[0])
    res = (mu - lam * eye) @ (mu - lam * eye + 1j * eye)
    return float(np.max(np.abs(res))) / max(1.0, float(np.max(np.abs(mu))) ** 2)


@dataclass(frozen=True)
class ChainLevel:
    index: int
    name: str
    w_plus: tuple       # weight-basis columns of W^i_+
    w_minus: tuple
    eigenvalues: tuple  # central eigenvalues on the graded piece
    verdict: MinimalityVerdict


@dataclass(frozen=True)
class ChainMinimality:
    levels: tuple
    is_minimal: bool
    failing_level: int | None = None

    def w_plus(self, i: int) -> tuple:
        return self.levels[i].w_plus


def chain_minimality(rep: MatrixRep, space: SpaceDescriptor, chain=None) -> ChainMinimality:
    """Walk down the chain grading ``W^{i-1}_+`` by the i-th central element."""
    chain = chain or thimm_chain(space)
    current = tuple(range(rep.dim))
    out = [ChainLevel(0, space.algebra, current, (), (), MinimalityVerdict(True, Fraction(0), {}, "level 0"))]
    failing = None
    for i, level in enumerate(chain.levels, start=1):
        h = level.centrals[-1]
        grading = _grade_columns(rep, h, current)
        verdict = _verdict(rep, grading, level.roots)
        if not verdict.is_minimal and failing is None:
            failing = i
        plus = grading.levels[0]
        minus = tuple(c for c in range(rep.dim) if c not in plus)
        out.append(ChainLevel(i, level.name, plus, minus,
                              tuple(grading.exact_values.values()), verdict))
        current = plus
    return ChainMinimality(tuple(out), failing is None, failing)


def string_length_residual(rep: MatrixRep, space: SpaceDescriptor) -> float:
    """Largest component of ``e_-a`` (a noncompact positive) that does not
    lower the level by exactly one."""
    grading = grade_by_rho(rep, space)
    level_of = {c: l for l, cols in grading.levels.items() for c in cols}
    worst = 0.0
    for a in space.noncompact_positive:
        f = rep.Q.conj().T @ rep.root_vectors[a].conj().T @ rep.Q
        for k, l in zip(*np.nonzero(np.abs(f) > 1e-12)):
            if level_of[k] != level_of[l] + 1:
                worst = max(worst, float(abs(f[k, l])))
    return worst


def idempotent_coroot_residual(rep: MatrixRep, space: SpaceDescriptor) -> float:
    """``max |h_i h_j - delta_ij h_i|`` on ``V_+`` over the coroots of ``P_phi``."""
    grading = grade_by_rho(rep, space)
    qs = rep.Q[:, list(grading.levels[0])]
    hs = [-1j * (qs.conj().T @ rep.torus(space.root_system.coroot(a)) @ qs)
          for a in maximal_orthogonal_set(space).roots]
    worst = 0.0
    for i, hi in enumerate(hs):
        for j, hj in enumerate(hs):
            target = hi if i == j else 0 * hi
            worst = max(worst, float(np.max(np.abs(hi @ hj - target))))
    return worst


def block_shape_residual(rep: MatrixRep, space: SpaceDescriptor) -> float:
    """For each chain level and each perp basis vector ``xi``: the top-left
    block of ``R(xi)`` vanishes and ``R(J xi)`` has blocks ``i nu`` and ``i nu^dagger``."""
    cm = chain_minimality(rep, space)
    worst = 0.0
    for lvl, sub in zip(cm.levels[1:], thimm_chain(space).levels):
        plus, minus = list(lvl.w_plus), list(lvl.w_minus)
        qp, qm = rep.Q[:, plus], rep.Q[:, minus]
        for kind, r in rep.basis.labels:
            if kind == "t" or tuple(r) in sub.roots:
                continue
            xi = rep.root_element(kind, r)
            m = rep.matrix(xi)
            jm = rep.matrix(rep.J(xi))
            top = qp.conj().T @ m @ qp
            nu = qp.conj().T @ m @ qm
            low = qm.conj().T @ m @ qp
            worst = max(worst, float(np.max(np.abs(top), initial=0.0)),
                        float(np.max(np.abs(low + nu.conj().T), initial=0.0)),
                        float(np.max(np.abs(qp.conj().T @ jm @ qp), initial=0.0)),
                        float(np.max(np.abs(qp.conj().T @ jm @ qm - 1j * nu), initial=0.0)),
                        float(np.max(np.abs(qm.conj().T @ jm @ qp - 1j * nu.conj().T), initial=0.0)))
    return worst


# -- exceptional scan --------------------------------------------------------

def _require_exceptional(space: SpaceDescriptor):
    if space.family_tag not in ("EIII", "EVII"):
        raise UsageError(f"{space.tag}: a phi-minimal representation exists for classical "
                         "families; see `minimal check`")
    if not space.noncompact_positive:
        raise UsageError("no noncompact roots")


def label_bound(space: SpaceDescriptor) -> int:
    """Certified bound on every label from ``(L, theta) <= 1`` at the highest root.

    ``(L, theta) = sum_i N_i * m_i (a_i, a_i)/2`` with ``m_i >= 1``, so every
    label with positive coefficient is at most ``1 / coefficient``."""
    system = space.root_system
    theta = system.highest_root
    if theta not in space.noncompact_positive:
        raise StructuralError("highest root is compact")
    coeffs = system.coefficients(theta)
    bound = 0
    for i, a in enumerate(system.simple_roots):
        weight = coeffs[i] * system.norm2(a) / 2
        if weight <= 0:
            raise StructuralError(f"label {i} is unbounded by the first condition")
        bound = max(bound, int(Fraction(1) / weight))
    return bound


@dataclass(frozen=True)
class Survivor:
    labels: tuple
    weight: tuple
    witness: tuple | None  # (alpha, beta) or None for the trivial weight

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "weight": ex.fmt_vec(self.weight),
            "witness": "trivial" if self.witness is None else {
                "alpha": ex.fmt_vec(self.witness[0]), "beta": ex.fmt_vec(self.witness[1])},
        }


def weight_condition_scan(space: SpaceDescriptor, bound: int | None = None) -> list:
    """All dominant label vectors with ``(L, a) in {0, 1}`` for every
    noncompact positive root ``a``; labels range over ``0..bound``."""
    _require_exceptional(space)
    system = space.root_system
    if bound is None:
        bound = label_bound(space)
    # (omega_i, a) for every noncompact positive root, as integer numerators
    omegas = [system.fundamental_weight(i) for i in range(system.rank)]
    table = [[system.inner(w, a) for w in omegas] for a in space.noncompact_positive]
    den = 1
    for row in table:
        for x in row:
            den = den * x.denominator // np.gcd(den, x.denominator)
    itable = np.array([[int(x * den) for x in row] for row in table], dtype=np.int64)
    grid = np.array(list(itertools.product(range(bound + 1), repeat=system.rank)), dtype=np.int64)
    values = grid @ itable.T
    ok = np.all((values == 0) | (values == den), axis=1)
    survivors = [tuple(int(v) for v in row) for row in grid[ok]]
    return sorted(survivors)


def second_order_witness(weight: Sequence, space: SpaceDescriptor):
    """First pair ``(a, b)`` of noncompact positive roots (lexicographic) with
    ``(L, a) = (L, b) = 1`` and ``(a, b) = 0``; None when there is none."""
    system = space.root_system
    cands = sorted(a for a in space.noncompact_positive if system.inner(weight, a) == 1)
    for a, b in itertools.combinations(cands, 2):
        if system.inner(a, b) == 0:
            return a, b
    return None


def witness_is_valid(weight, pair, space: SpaceDescriptor) -> bool:
    system = space.root_system
    a, b = pair
    nc = set(space.noncompact_positive)
    return (a in nc and b in nc and system.inner(weight, a) == 1
            and system.inner(weight, b) == 1 and system.inner(a, b) == 0)


@dataclass(frozen=True)
class NogoCertificate:
    system: str
    bound: int
    survivors: tuple
    verdict: str

    @property
    def nontrivial(self) -> tuple:
        return tuple(s for s in self.survivors if s.witness is not None or any(s.labels))

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "label_bound": self.bound,
            "survivors": [s.to_json() for s in self.survivors],
            "verdict": self.verdict,
        }


def nogo_report(space: SpaceDescriptor, bound: int | None = None) -> NogoCertificate:
    """Scan plus second-order witnesses: no phi-minimal representation exists."""
    _require_exceptional(space)
    system = space.root_system
    if bound is None:
        bound = label_bound(space)
    survivors = []
    all_witnessed = True
    for labels in weight_condition_scan(space, bound):
        weight = weight_from_labels(labels, system)
        if not any(labels):
            survivors.append(Survivor(labels, weight, None))
            continue
        pair = second_order_witness(weight, space)
        if pair is None or not witness_is_valid(weight, pair, space):
            all_witnessed = False
        survivors.append(Survivor(labels, weight, pair))
    verdict = "none exist" if all_witnessed else "inconclusive"
    return NogoCertificate(system.name, bound, tuple(survivors), verdict)

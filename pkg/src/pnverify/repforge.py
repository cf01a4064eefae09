"""Matrix representations of su(n), so(N), sp(2n) with a normalized compact basis.

Every representation carries a unitary weight basis ``Q`` (columns are torus
eigenvectors) and the torus map ``T(h) = Q diag(i w.h) Q^dagger``.  Root
vectors are extracted from the representation itself, normalized so that
``[e_a, e_-a] = h_a`` with ``e_-a = e_a^dagger``, and assembled into the
compact basis

* ``i h_{a_j}`` for the simple roots ``a_j`` (torus part),
* ``x_a = e_a - e_-a`` and ``y_a = i (e_a + e_-a)`` for each positive root.

Lie elements are real coefficient vectors over this basis.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import _exact as ex
from .errors import ConfigurationError, NumericError, StructuralError
from .hermcat import SpaceDescriptor, Subalgebra
from .rootsys import RootSystem, build_root_system

ALGEBRAS = ("su", "so", "sp")


@dataclass(frozen=True)
class CompactBasis:
    rank: int
    positive_roots: tuple
    labels: tuple  # ("t", j) | ("x", root) | ("y", root)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def slot(self, kind: str, root) -> int:
        return self._index[(kind, tuple(root))]

    @cached_property
    def _index(self) -> dict:
        return {(k, r): i for i, (k, r) in enumerate(self.labels) if k != "t"}

    def root_of(self, i: int):
        kind, r = self.labels[i]
        return None if kind == "t" else r


def _compact_basis(system: RootSystem) -> CompactBasis:
    labels = [("t", j) for j in range(system.rank)]
    for r in system.positive_roots:
        labels += [("x", r), ("y", r)]
    return CompactBasis(system.rank, system.positive_roots, tuple(labels))


def _comm(a, b):
    return a @ b - b @ a


@dataclass(eq=False)
class MatrixRep:
    """Faithful representation of a classical compact algebra."""

    algebra: str
    size: int
    label: str
    system: RootSystem
    weights: tuple
    Q: np.ndarray
    matrices: np.ndarray
    root_vectors: dict
    certificate: dict = field(default_factory=dict)
    _shared: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    @cached_property
    def basis(self) -> CompactBasis:
        return _compact_basis(self.system)

    @property
    def name(self) -> str:
        return f"{self.algebra}({self.size}) {self.label}"

    # -- torus ------------------------------------------------------------
    def torus(self, h) -> np.ndarray:
        """Matrix of the Cartan element with coweight coordinates ``h``."""
        vals = np.array([float(ex.dot(w, h)) for w in self.weights])
        return (self.Q * (1j * vals)) @ self.Q.conj().T

    # -- coefficient maps ---------------------------------------------------
    @cached_property
    def _flat(self) -> np.ndarray:
        m = self.matrices.reshape(len(self.matrices), -1)
        return np.concatenate([m.real, m.imag], axis=1)

    @cached_property
    def _extract(self) -> np.ndarray:
        gram = self._flat @ self._flat.T
        if np.linalg.cond(gram) > 1e10:
            raise StructuralError(f"{self.name}: basis matrices are not independent")
        return np.linalg.solve(gram, self._flat)

    def matrix(self, coeffs) -> np.ndarray:
        return np.tensordot(np.asarray(coeffs, dtype=float), self.matrices, axes=1)

    def coefficients(self, mat, check: bool = True) -> np.ndarray:
        flat = np.concatenate([mat.real.ravel(), mat.imag.ravel()])
        c = self._extract @ flat
        if check:
            resid = np.max(np.abs(self.matrix(c) - mat), initial=0.0)
            scale = max(1.0, float(np.max(np.abs(mat), initial=0.0)))
            if resid > 1e-8 * scale:
                raise NumericError(f"matrix is not in the image of {self.name} (residual {resid:.2e})")
        return c

    # -- Lie algebra data -----------------------------------------------------
    @cached_property
    def structure_constants(self) -> np.ndarray:
        """``f[a, b, c]`` with ``[B_a, B_b] = sum_c f[a, b, c] B_c``."""
        if "f" in self._shared:
            return self._shared["f"]
        mats = self.matrices
        n = len(mats)
        f = np.zeros((n, n, n))
        for a in range(n):
            comm = (np.matmul(mats[a], mats) - np.matmul(mats, mats[a])).reshape(n, -1)
            flat = np.concatenate([comm.real, comm.imag], axis=1)
            f[a] = flat @ self._extract.T
        return f

    @cached_property
    def killing(self) -> np.ndarray:
        f = self.structure_constants
        return np.einsum("abc,dcb->ad", f, f)

    @cached_property
    def _ih_long(self) -> np.ndarray:
        s = self.system
        j = max(range(s.rank), key=lambda i: (s.norm2(s.simple_roots[i]), -i))
        v = np.zeros(self.basis.dim)
        v[j] = 1.0
        return v

    @cached_property
    def form_scale(self) -> float:
        """Factor ``c`` such that ``c * Killing`` gives long roots length 2."""
        k = self._ih_long @ self.killing @ self._ih_long
        return -2.0 / k

    @cached_property
    def form(self) -> np.ndarray:
        return self.form_scale * self.killing

    @property
    def dual_coxeter(self) -> float:
        return 1.0 / (2.0 * self.form_scale)

    def inner(self, u, v) -> float:
        return float(np.asarray(u) @ self.form @ np.asarray(v))

    def bracket(self, u, v) -> np.ndarray:
        return np.einsum("a,b,abc->c", u, v, self.structure_constants)

    def ad(self, u) -> np.ndarray:
        """Matrix of ``ad_u`` acting on coefficient column vectors."""
        return np.einsum("a,abc->cb", u, self.structure_constants)

    @cached_property
    def J_matrix(self) -> np.ndarray:
        n = self.basis.dim
        jm = np.zeros((n, n))
        for r in self.system.positive_roots:
            x, y = self.basis.slot("x", r), self.basis.slot("y", r)
            jm[y, x] = 1.0   # J x = y
            jm[x, y] = -1.0  # J y = -x
        return jm

    def J(self, u) -> np.ndarray:
        return self.J_matrix @ u

    def mask(self, sub: Subalgebra) -> np.ndarray:
        key = id(sub)
        cache = self._shared.setdefault("masks", {})
        if key in cache and cache[key][0] is sub:
            return cache[key][1]
        m = np.zeros(self.basis.dim)
        for i, (kind, r) in enumerate(self.basis.labels):
            m[i] = 1.0 if kind == "t" or tuple(r) in sub.roots else 0.0
        cache[key] = (sub, m)
        return m

    def project(self, u, sub: Subalgebra) -> np.ndarray:
        return self.mask(sub) * u

    def project_perp(self, u, sub: Subalgebra) -> np.ndarray:
        return (1.0 - self.mask(sub)) * u

    def coweight_element(self, h) -> np.ndarray:
        """Coefficients of ``i h`` for a Cartan element with coweight coordinates ``h``."""
        c = self.system.coweight_coordinates(h)
        v = np.zeros(self.basis.dim)
        v[: self.system.rank] = [float(x) for x in c]
        return v

    def coroot_element(self, alpha) -> np.ndarray:
        return self.coweight_element(self.system.coroot(alpha))

    def root_element(self, kind: str, alpha) -> np.ndarray:
        v = np.zeros(self.basis.dim)
        v[self.basis.slot(kind, alpha)] = 1.0
        return v

    def restrict(self, columns, label: str) -> "MatrixRep":
        """Subrepresentation on the span of the given weight-basis columns."""
        cols = list(columns)
        qs = self.Q[:, cols]
        sub_mats = np.einsum("ij,ajk,kl->ail", qs.conj().T, self.matrices, qs)
        full = np.einsum("ij,ajk,kl->ail", qs, sub_mats, qs.conj().T)
        leak = np.max(np.abs(self.matrices @ (qs @ qs.conj().T) - full))
        if leak > 1e-10:
            raise StructuralError(f"{self.name}: columns do not span an invariant subspace")
        rv = {r: qs.conj().T @ e @ qs for r, e in self.root_vectors.items()}
        rep = MatrixRep(self.algebra, self.size, label, self.system,
                        tuple(self.weights[c] for c in cols), np.eye(len(cols), dtype=complex),
                        sub_mats, rv, dict(self.certificate))
        rep._shared["f"] = self.structure_constants
        return rep


# -- spanning sets and weight bases ---------------------------------------

def _su_span(n: int) -> list:
    mats = []
    for a, b in itertools.combinations(range(n), 2):
        m = np.zeros((n, n), complex)
        m[a, b], m[b, a] = 1, -1
        mats.append(m)
        m = np.zeros((n, n), complex)
        m[a, b], m[b, a] = 1j, 1j
        mats.append(m)
    for a in range(n - 1):
        m = np.zeros((n, n), complex)
        m[a, a], m[a + 1, a + 1] = 1j, -1j
        mats.append(m)
    return mats


def _so_span(big: int) -> list:
    mats = []
    for a, b in itertools.combinations(range(big), 2):
        m = np.zeros((big, big), complex)
        m[a, b], m[b, a] = 1, -1
        mats.append(m)
    return mats


def _sp_span(n: int) -> list:
    # compact sp(n): [[A, B], [-conj(B), conj(A)]] with A anti-Hermitian, B symmetric
    mats = []
    for a in _su_span(n) + [np.diag([1j if j == 0 else 0 for j in range(n)])]:
        mats.append(np.block([[a, np.zeros((n, n))], [np.zeros((n, n)), a.conj()]]))
    for a, b in itertools.combinations_with_replacement(range(n), 2):
        for c in (1.0, 1j):
            bm = np.zeros((n, n), complex)
            bm[a, b] = bm[b, a] = c
            mats.append(np.block([[np.zeros((n, n)), bm], [-bm.conj(), np.zeros((n, n))]]))
    return mats


def _unit_weight(dim: int, j: int, sign: int = 1) -> tuple:
    return tuple(Fraction(sign if i == j else 0) for i in range(dim))


def _so_weight_basis(big: int):
    m = big // 2
    q = np.zeros((big, big), complex)
    weights = []
    col = 0
    for j in range(m):
        for sign in (1, -1):
            q[2 * j, col] = 1 / np.sqrt(2)
            q[2 * j + 1, col] = sign * 1j / np.sqrt(2)
            weights.append(_unit_weight(m, j, sign))
            col += 1
    if big % 2:
        q[big - 1, col] = 1
        weights.append(tuple(Fraction(0) for _ in range(m)))
    return q, weights


# -- Clifford / spin ---------------------------------------------------------

def fermion_operators(m: int) -> list:
    """Annihilation operators ``c_j`` on the exterior algebra of C^m (Jordan-Wigner).

    Basis state ``s`` has mode ``j`` occupied when bit ``j`` of ``s`` is set."""
    dim = 2 ** m
    ops = []
    for j in range(m):
        c = np.zeros((dim, dim))
        for s in range(dim):
            if s >> j & 1:
                sign = (-1) ** bin(s & ((1 << j) - 1)).count("1")
                c[s ^ (1 << j), s] = sign
        ops.append(c.astype(complex))
    return ops


def gamma_matrices(big: int) -> list:
    """Hermitian generators of Cl(big) with ``{g_a, g_b} = 2 delta_ab``."""
    m = big // 2
    cs = fermion_operators(m)
    gammas = []
    for c in cs:
        cd = c.conj().T
        gammas += [c + cd, 1j * (cd - c)]
    if big % 2:
        deg = np.array([bin(s).count("1") for s in range(2 ** m)])
        gammas.append(np.diag((-1.0) ** deg).astype(complex))
    return gammas


def spin_matrix(x: np.ndarray, gammas) -> np.ndarray:
    """``S(X) = (1/8) sum_ab X_ab [g_a, g_b]`` for real antisymmetric ``X``."""
    out = np.zeros_like(gammas[0])
    n = len(gammas)
    for a in range(n):
        for b in range(n):
            if x[a, b] != 0:
                out = out + x[a, b] * _comm(gammas[a], gammas[b])
    return out / 8


def _spin_weights(m: int) -> list:
    half = Fraction(1, 2)
    return [tuple(half if not (s >> j & 1) else -half for j in range(m)) for s in range(2 ** m)]


# -- root vectors -----------------------------------------------------------

def _phase_fix(e: np.ndarray) -> np.ndarray:
    flat = e.ravel()
    mags = np.abs(flat)
    k = int(np.argmax(mags >= mags.max() - 1e-9))
    return e * (abs(flat[k]) / flat[k])


def _root_vectors(system: RootSystem, q: np.ndarray, weights, span, torus) -> dict:
    qd = q.conj().T
    span_w = [qd @ y @ q for y in span]
    wts = list(weights)
    pairs: dict = {}
    for k, wk in enumerate(wts):
        for l, wl in enumerate(wts):
            pairs.setdefault(ex.sub(wk, wl), []).append((k, l))
    out = {}
    for alpha in system.positive_roots:
        mask = np.zeros((len(wts), len(wts)), dtype=bool)
        for k, l in pairs.get(alpha, ()):
            mask[k, l] = True
        if not mask.any():
            raise StructuralError(f"root {ex.fmt_vec(alpha)} has no weight pair in the representation")
        cands = [np.where(mask, y, 0) for y in span_w]
        best = max(range(len(cands)), key=lambda i: (np.linalg.norm(cands[i]) > 1e-9, -i)
                   if np.linalg.norm(cands[i]) > 1e-9 else (False, 0))
        e = q @ cands[best] @ qd
        if np.linalg.norm(e) < 1e-9:
            raise StructuralError(f"no root vector for {ex.fmt_vec(alpha)}")
        h = -1j * torus(system.coroot(alpha))
        c = _comm(e, e.conj().T)
        k = np.vdot(h, c).real / np.vdot(h, h).real
        if k <= 0 or np.max(np.abs(c - k * h)) > 1e-9 * max(1.0, abs(k)):
            raise StructuralError(f"root vector for {ex.fmt_vec(alpha)} is not an sl2 triple")
        e = _phase_fix(e / np.sqrt(k))
        for j, hv in enumerate(_torus_probe(system)):
            t = torus(hv)
            lam = float(ex.dot(alpha, hv))
            if np.max(np.abs(_comm(t, e) - 1j * lam * e)) > 1e-9:
                raise StructuralError("torus action on root vector is not diagonal")
        out[alpha] = e
    return out


def _torus_probe(system: RootSystem):
    return [system.coroot(a) for a in system.simple_roots]


def _assemble(algebra, size, label, system, q, weights, span) -> MatrixRep:
    weights = tuple(tuple(w) for w in weights)

    def torus(h):
        vals = np.array([float(ex.dot(w, h)) for w in weights])
        return (q * (1j * vals)) @ q.conj().T

    rv = _root_vectors(system, q, weights, span, torus)
    mats = [torus(system.coroot(a)) for a in system.simple_roots]
    for r in system.positive_roots:
        e = rv[r]
        mats += [e - e.conj().T, 1j * (e + e.conj().T)]
    rep = MatrixRep(algebra, size, label, system, weights, q, np.array(mats), rv)
    _certify(rep)
    return rep


def _certify(rep: MatrixRep):
    mats = rep.matrices
    anti = float(np.max(np.abs(mats + np.conj(np.transpose(mats, (0, 2, 1))))))
    if anti > 1e-12:
        raise StructuralError(f"{rep.name}: basis is not anti-Hermitian ({anti:.1e})")
    form = rep.form
    sys_ = rep.system
    ratios = {}
    for j, a in enumerate(sys_.simple_roots):
        e = rep.root_vectors[a]
        x = rep.root_element("x", a)
        y = rep.root_element("y", a)
        # (e, e^dagger) = -(B(x, x) + B(y, y)) / 4
        b_e = -(x @ form @ x + y @ form @ y) / 4
        ratios[j] = {
            "killing_pairing_times_norm": b_e * float(sys_.norm2(a)),
            "trace_over_killing": float(np.trace(mats[j] @ mats[j]).real) / float(rep.killing[j, j]),
        }
        if abs(ratios[j]["killing_pairing_times_norm"] - 2) > 1e-9:
            raise StructuralError(f"{rep.name}: root vector normalization fails at simple root {j}")
    rep.certificate = {
        "anti_hermitian_residual": anti,
        "form_scale": rep.form_scale,
        "dual_coxeter": rep.dual_coxeter,
        "simple_roots": ratios,
    }


# -- public constructors -----------------------------------------------------

@lru_cache(maxsize=None)
def fundamental_rep(family: str, size: int) -> MatrixRep:
    """Defining representation of ``su(size)``, ``so(size)`` or ``sp(size)`` (size even)."""
    family = family.lower()
    if family == "su":
        if size < 2:
            raise ConfigurationError("su(n) needs n >= 2")
        system = build_root_system("A", size - 1)
        weights = [_unit_weight(size, j) for j in range(size)]
        return _assemble("su", size, "fundamental", system, np.eye(size, dtype=complex),
                         weights, _su_span(size))
    if family == "so":
        if size < 5:
            raise ConfigurationError("so(N) needs N >= 5 (B2 or D3 and up)")
        system = build_root_system("D" if size % 2 == 0 else "B", size // 2)
        q, weights = _so_weight_basis(size)
        return _assemble("so", size, "fundamental", system, q, weights, _so_span(size))
    if family == "sp":
        if size < 2 or size % 2:
            raise ConfigurationError("sp(2n) needs an even size >= 2")
        n = size // 2
        system = build_root_system("C", n)
        weights = [_unit_weight(n, j) for j in range(n)] + [_unit_weight(n, j, -1) for j in range(n)]
        return _assemble("sp", size, "fundamental", system, np.eye(size, dtype=complex),
                         weights, _sp_span(n))
    raise ConfigurationError(f"unknown algebra family {family!r}; expected su, so or sp")


@lru_cache(maxsize=None)
def spin_rep(big: int) -> MatrixRep:
    """Spin representation of ``so(big)`` on the exterior algebra of C^m, ``m = big // 2``.

    For odd ``big`` the last generator is the parity operator; for even
    ``big`` the space is the sum of the two half-spin representations."""
    if big < 5:
        raise ConfigurationError("spin_rep needs so(N) with N >= 5")
    m = big // 2
    system = build_root_system("D" if big % 2 == 0 else "B", m)
    gammas = gamma_matrices(big)
    span = [spin_matrix(x.real, gammas) for x in _so_span(big)]
    weights = _spin_weights(m)
    return _assemble("so", big, "spin", system, np.eye(2 ** m, dtype=complex), weights, span)


def half_spin_rep(big: int) -> MatrixRep:
    """Even-degree summand of the even-dimensional spin representation."""
    if big % 2:
        raise ConfigurationError("half-spin summands exist for so(2m) only")
    full = spin_rep(big)
    cols = [s for s in range(full.dim) if bin(s).count("1") % 2 == 0]
    return full.restrict(cols, "half-spin")


def rep_for_space(space: SpaceDescriptor, label: str = "fundamental") -> MatrixRep:
    """The representation used for a classical space (fundamental, spin or half-spin)."""
    tag = space.family_tag
    label = label.lower()
    if tag in ("EIII", "EVII"):
        raise ConfigurationError("matrix representations of e6/e7 are not provided")
    if label == "spin" and tag != "BDI":
        raise ConfigurationError("the spin representation is provided for BDI only")
    if tag == "AIII":
        rep = fundamental_rep("su", space.params[0])
    elif tag == "BDI":
        big = space.params[0] + 2
        if label == "spin":
            rep = spin_rep(big)
        elif label == "half-spin":
            rep = half_spin_rep(big)
        else:
            rep = fundamental_rep("so", big)
    elif tag == "DIII":
        rep = fundamental_rep("so", 2 * space.params[0])
    else:
        rep = fundamental_rep("sp", 2 * space.params[0])
    if rep.system is not space.root_system:
        raise StructuralError("representation and space use different root systems")
    return rep


def minimality_rep(space: SpaceDescriptor, label: str = "fundamental") -> MatrixRep:
    """Irreducible representation on which minimality verdicts are stated."""
    if label == "spin" and space.family_tag == "BDI" and (space.params[0] + 2) % 2 == 0:
        return rep_for_space(space, "half-spin")
    return rep_for_space(space, label)


def default_rep(space: SpaceDescriptor) -> MatrixRep:
    """phi-minimal irreducible representation used by the geometric suites."""
    return minimality_rep(space, "spin" if space.family_tag == "BDI" else "fundamental")


# -- module-level operations -----------------------------------------------

def root_vectors(rep: MatrixRep, system: RootSystem | None = None) -> dict:
    if system is not None and system is not rep.system:
        raise StructuralError("root system does not match the representation")
    return dict(rep.root_vectors)


def J_apply(x, rep: MatrixRep) -> np.ndarray:
    return rep.J(np.asarray(x, dtype=float))


def project(x, sub: Subalgebra, rep: MatrixRep) -> np.ndarray:
    return rep.project(np.asarray(x, dtype=float), sub)


def bracket_closure_residual(rep: MatrixRep) -> float:
    """``max |[R(a), R(b)] - R([a, b])|`` over all basis pairs."""
    mats = rep.matrices
    f = rep.structure_constants
    worst = 0.0
    for a in range(len(mats)):
        lhs = np.matmul(mats[a], mats) - np.matmul(mats, mats[a])
        rhs = np.tensordot(f[a], mats, axes=1)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def clifford_residual(big: int) -> float:
    g = gamma_matrices(big)
    eye = np.eye(g[0].shape[0])
    return max(float(np.max(np.abs(a @ b + b @ a - 2 * (i == j) * eye)))
               for i, a in enumerate(g) for j, b in enumerate(g))

"""Numerical checks of the Nijenhuis identities at random points of the orbit.

A point of the orbit is ``mu = Ad_g(rho_phi)``; tangent vectors are
``X#(mu) = [X, mu]`` and the only geometric input is

    d_N mu = d mu - [J(d mu), mu].

All Lie-algebra quantities are real coefficient vectors over the compact
basis of a :class:`~pnverify.repforge.MatrixRep`.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, NumericError, StructuralError
from .hermcat import SpaceDescriptor, Subalgebra, maximal_orthogonal_set, thimm_chain
from .minimality import chain_minimality, is_phi_minimal, quadratic_relation_residual, grade_by_rho
from .repforge import MatrixRep, default_rep

FD_STEP = 1e-5
FD_TOL = 1e-6
MUTATIONS = ("drop-half", "flip-mother-sign", "zero-lambda")


@dataclass(frozen=True)
class Mutations:
    drop_half: bool = False
    flip_mother_sign: bool = False
    zero_lambda: bool = False

    @classmethod
    def parse(cls, names: Sequence[str] | str | None) -> "Mutations":
        if not names:
            return cls()
        if isinstance(names, str):
            names = [names]
        bad = [n for n in names if n not in MUTATIONS]
        if bad:
            raise ConfigurationError(f"unknown mutation(s) {bad}; expected {MUTATIONS}")
        return cls("drop-half" in names, "flip-mother-sign" in names, "zero-lambda" in names)

    @property
    def names(self) -> list:
        return [n for n, on in zip(MUTATIONS, (self.drop_half, self.flip_mother_sign,
                                               self.zero_lambda)) if on]


# -- orbit samples -----------------------------------------------------------

@dataclass(frozen=True)
class OrbitSample:
    mu: np.ndarray
    generator: np.ndarray | None = None
    slice_coeffs: tuple | None = None
    seed: int | None = None


def unitary_exp(rep: MatrixRep, x) -> np.ndarray:
    """``exp(R(x))`` through the eigendecomposition of the Hermitian ``-i R(x)``."""
    m = rep.matrix(x)
    vals, vecs = np.linalg.eigh(-1j * m)
    u = (vecs * np.exp(1j * vals)) @ vecs.conj().T
    err = float(np.max(np.abs(u @ u.conj().T - np.eye(len(u)))))
    if err > 1e-12 * max(1.0, float(np.max(np.abs(vals), initial=0.0))):
        raise NumericError(f"matrix exponential lost unitarity (error {err:.1e})")
    return u


def adjoint(rep: MatrixRep, u: np.ndarray, v) -> np.ndarray:
    return rep.coefficients(u @ rep.matrix(v) @ u.conj().T)


@dataclass(eq=False)
class Context:
    """Precomputed data for one (space, representation, mutation) triple."""

    space: SpaceDescriptor
    rep: MatrixRep
    mutations: Mutations = field(default_factory=Mutations)

    def __post_init__(self):
        verdict = is_phi_minimal(self.rep, self.space)
        if not verdict.is_minimal:
            raise ConfigurationError(f"{self.rep.name} is not phi-minimal for {self.space.tag}")
        self.lam = verdict.lambda_phi
        self.chain = thimm_chain(self.space)
        self.chain_min = chain_minimality(self.rep, self.space, self.chain)
        self.rho = self.rep.coweight_element(self.space.rho_pairing)
        self.k_phi = self.space.k_phi
        self.v_plus = grade_by_rho(self.rep, self.space).levels[0]

    @property
    def mother_sign(self) -> float:
        return 1.0 if self.mutations.flip_mother_sign else -1.0

    @property
    def half(self) -> float:
        return 1.0 if self.mutations.drop_half else 0.5

    @property
    def n_levels(self) -> int:
        return len(self.chain.levels)

    def level(self, i: int) -> Subalgebra:
        return self.chain.levels[i - 1]

    @cached_property
    def _isometries(self) -> dict:
        q = self.rep.Q
        out = {i: q[:, list(self.chain_min.levels[i].w_plus)] for i in range(1, self.n_levels + 1)}
        out["V+"] = q[:, list(self.v_plus)]
        return out

    def w_plus(self, key) -> np.ndarray:
        return self._isometries[key]

    def restrict(self, key, u) -> np.ndarray:
        p = self._isometries[key]
        return p.conj().T @ self.rep.matrix(u) @ p

    def random_element(self, rng: np.random.Generator, scale: float = 1.0, sub=None) -> np.ndarray:
        x = rng.standard_normal(self.rep.basis.dim)
        if sub is not None:
            x = self.rep.project(x, sub)
        norm = math.sqrt(max(-self.rep.inner(x, x), 1e-300))
        return scale * x / norm


def random_orbit_point(ctx: Context, seed=None, mode: str = "generic", a=None) -> OrbitSample:
    """``mu = Ad_{exp X} rho_phi`` (generic) or ``Ad_{exp a} rho_phi`` on the slice."""
    rng = np.random.default_rng(seed)
    rep = ctx.rep
    if mode == "generic":
        x = ctx.random_element(rng, scale=float(rng.uniform(0.5, 3.0)))
        mu = adjoint(rep, unitary_exp(rep, x), ctx.rho)
        return OrbitSample(mu, x, None, seed if isinstance(seed, int) else None)
    if mode == "slice":
        roots = maximal_orthogonal_set(ctx.space).roots
        if a is None:
            a = rng.uniform(-math.pi, math.pi, size=len(roots))
        a = tuple(float(v) for v in a)
        gen = slice_generator(ctx, a)
        mu = adjoint(rep, unitary_exp(rep, gen), ctx.rho)
        return OrbitSample(mu, gen, a)
    raise ConfigurationError(f"unknown sampling mode {mode!r}")


def slice_generator(ctx: Context, a) -> np.ndarray:
    roots = maximal_orthogonal_set(ctx.space).roots
    if len(a) != len(roots):
        raise ConfigurationError(f"slice needs {len(roots)} coefficients, got {len(a)}")
    gen = np.zeros(ctx.rep.basis.dim)
    for aj, r in zip(a, roots):
        gen += aj * ctx.rep.root_element("y", r)
    return gen


# -- differential quantities ---------------------------------------------------

def dN_mu(ctx: Context, mu, x) -> np.ndarray:
    """``[X, mu] - [J[X, mu], mu]`` (sign flipped under the mutation)."""
    rep = ctx.rep
    dmu = rep.bracket(x, mu)
    return dmu + ctx.mother_sign * rep.bracket(rep.J(dmu), mu)


def compute_A(ctx: Context, mu, sub: Subalgebra) -> np.ndarray:
    rep = ctx.rep
    perp = rep.project_perp(mu, sub)
    return ctx.half * rep.project(rep.bracket(rep.J(perp), perp), sub)


def compute_dA(ctx: Context, mu, dmu, sub: Subalgebra) -> np.ndarray:
    rep = ctx.rep
    perp = rep.project_perp(mu, sub)
    dperp = rep.project_perp(dmu, sub)
    both = rep.bracket(rep.J(dperp), perp) + rep.bracket(rep.J(perp), dperp)
    return ctx.half * rep.project(both, sub)


@dataclass(frozen=True)
class LevelEval:
    I: np.ndarray          # I_r, r = 0..rmax+1 (index 0 unused)
    dI: np.ndarray
    dN_A: np.ndarray       # through dA
    dN_direct: np.ndarray  # through pr(d_N mu)
    M: np.ndarray
    A: np.ndarray
    dA: np.ndarray
    mu_k: np.ndarray


def eval_level(ctx: Context, i: int, mu, x, rmax: int = 4) -> LevelEval:
    """Trace polynomials ``I_r = i^r/r Tr_{W+}(mu_k^r)`` and their differentials."""
    rep = ctx.rep
    sub = ctx.level(i)
    dmu = rep.bracket(x, mu)
    mu_k = rep.project(mu, sub)
    dmu_k = rep.project(dmu, sub)
    A = compute_A(ctx, mu, sub)
    dA = compute_dA(ctx, mu, dmu, sub)
    m = ctx.restrict(i, mu_k)
    dm = ctx.restrict(i, dmu_k)
    da = ctx.restrict(i, dA)
    dn = ctx.restrict(i, rep.project(dN_mu(ctx, mu, x), sub))
    top = rmax + 1
    I = np.zeros(top + 1, complex)
    dI = np.zeros(top + 1, complex)
    dN_A = np.zeros(top + 1, complex)
    dN_direct = np.zeros(top + 1, complex)
    power = np.eye(len(m), dtype=complex)  # M^{r-1}
    for r in range(1, top + 1):
        ir = 1j ** r
        dI[r] = ir * np.trace(power @ dm)
        dN_A[r] = dI[r] + ctx.mother_sign * ir * np.trace(power @ da)
        dN_direct[r] = ir * np.trace(power @ dn)
        power = power @ m
        I[r] = ir / r * np.trace(power)
    return LevelEval(I, dI, dN_A, dN_direct, m, A, dA, mu_k)


def _rel(diff, *operands) -> float:
    scale = max([1.0] + [float(np.max(np.abs(o), initial=0.0)) for o in operands])
    return float(np.max(np.abs(diff), initial=0.0)) / scale


def theorem_residuals(ctx: Context, ev: LevelEval, rmax: int = 4) -> np.ndarray:
    lam = 0.0 if ctx.mutations.zero_lambda else ctx.lam
    out = np.zeros(rmax + 1)
    for r in range(1, rmax + 1):
        a = ev.dN_A[r]
        b = 2j * lam * ev.dI[r]
        c = 2 * ev.dI[r + 1]
        out[r] = _rel(a + b - c, a, b, c)
    return out


def fundamental_from_quadratic_residual(ctx: Context, i: int, ev: LevelEval) -> float:
    lam = ctx.lam
    m = ev.M
    rhs = -1j * m @ m + (2j * lam + 1) * m - lam * (1 + 1j * lam) * np.eye(len(m))
    lhs = ctx.restrict(i, ev.A)
    return _rel(lhs - rhs, lhs, rhs)


def eval_dN_poly(ctx: Context, i: int, r: int, mu, x) -> complex:
    """``d_N I_r^{(i)}`` on the fundamental vector field of ``x`` at ``mu``,
    cross-checked against central finite differences."""
    ev = eval_level(ctx, i, mu, x, rmax=max(r, 1))
    fd = finite_difference_residuals(ctx, i, mu, x, ev, rmax=r)
    if fd["dI"] > FD_TOL or fd["dA"] > FD_TOL:
        raise NumericError(f"chain rule and finite differences disagree ({fd})")
    return complex(ev.dN_A[r])


def finite_difference_residuals(ctx: Context, i: int, mu, x, ev: LevelEval, rmax: int = 4) -> dict:
    rep = ctx.rep
    sub = ctx.level(i)
    vals, vecs = np.linalg.eigh(-1j * rep.matrix(x))
    out_i, out_a = [], []
    for t in (FD_STEP, -FD_STEP):
        u = (vecs * np.exp(1j * t * vals)) @ vecs.conj().T
        mt = adjoint(rep, u, mu)
        out_i.append(eval_level_values(ctx, i, mt, rmax))
        out_a.append(compute_A(ctx, mt, sub))
    d_i = (out_i[0] - out_i[1]) / (2 * FD_STEP)
    d_a = (out_a[0] - out_a[1]) / (2 * FD_STEP)
    return {
        "dI": _rel(d_i[1:rmax + 1] - ev.dI[1:rmax + 1], ev.dI[1:rmax + 1]),
        "dA": _rel(d_a - ev.dA, ev.dA),
    }


def eval_level_values(ctx: Context, i: int, mu, rmax: int) -> np.ndarray:
    m = ctx.restrict(i, ctx.rep.project(mu, ctx.level(i)))
    out = np.zeros(rmax + 1, complex)
    power = np.eye(len(m), dtype=complex)
    for r in range(1, rmax + 1):
        power = power @ m
        out[r] = 1j ** r / r * np.trace(power)
    return out


# -- reports -----------------------------------------------------------------

@dataclass
class Entry:
    identity: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_json(self) -> dict:
        return {"identity": self.identity, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class SuiteReport:
    suite: str
    space: str
    rep: str
    trials: int
    seed: int
    tolerance: float
    breakdown: list
    mutations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        """Largest residual among entries held to the suite tolerance."""
        vals = [e.residual for e in self.breakdown if e.tolerance == self.tolerance]
        return max(vals, default=0.0)

    @property
    def worst_entry(self) -> Entry | None:
        return max(self.breakdown, key=lambda e: e.residual / e.tolerance, default=None)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.breakdown)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "space": self.space,
            "rep": self.rep,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "pass": self.passed,
            "mutations": list(self.mutations),
            "breakdown": [e.to_json() for e in self.breakdown],
            "notes": self.notes,
        }


def run_trials(fn: Callable[[np.random.Generator, int], dict], trials: int, seed: int,
               threads: int = 1) -> dict:
    """Run ``fn(rng, index)`` per trial and reduce each identity by ``max``.

    Each trial gets its own child of ``SeedSequence(seed)`` so results do not
    depend on the number of worker threads."""
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    children = np.random.SeedSequence(seed).spawn(trials)

    def one(k):
        return fn(np.random.default_rng(children[k]), k)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(k) for k in range(trials)]
    merged: dict = {}
    for res in results:  # trial order, so the reduction is deterministic
        for key, val in res.items():
            merged[key] = max(merged.get(key, 0.0), float(val))
    return merged


def _entries(merged: dict, tol: float, fd_keys=()) -> list:
    return [Entry(k, v, FD_TOL if k in fd_keys or k.startswith("fd_") else tol)
            for k, v in sorted(merged.items())]


def _report(name, ctx, trials, seed, tol, merged, notes=None) -> SuiteReport:
    return SuiteReport(name, ctx.space.tag, ctx.rep.name, trials, int(seed), tol,
                       _entries(merged, tol), ctx.mutations.names, notes or {})


def _generic_pair(ctx: Context, rng):
    x = ctx.random_element(rng, scale=float(rng.uniform(0.5, 3.0)))
    mu = adjoint(ctx.rep, unitary_exp(ctx.rep, x), ctx.rho)
    probe = ctx.random_element(rng)
    # resample degenerate probes; [X, mu] = 0 makes every identity trivial
    for _ in range(10):
        if np.max(np.abs(ctx.rep.bracket(probe, mu))) > 1e-6:
            break
        probe = ctx.random_element(rng)
    return mu, probe


# -- suites ------------------------------------------------------------------

def suite_explicit_formula(ctx: Context, trials: int = 100, tol: float = 1e-9, seed: int = 0,
                           threads: int = 1, rmax: int = 4, fd: bool = True) -> SuiteReport:
    """``d_N I_r + 2i Lambda dI_r - 2 dI_{r+1} = 0`` at every chain level."""

    def trial(rng, k):
        mu, x = _generic_pair(ctx, rng)
        out = {}
        for i in range(1, ctx.n_levels + 1):
            ev = eval_level(ctx, i, mu, x, rmax)
            res = theorem_residuals(ctx, ev, rmax)
            for r in range(1, rmax + 1):
                out[f"explicit_formula_level{i}_r{r}"] = res[r]
            out[f"routes_agree_level{i}"] = _rel(ev.dN_A[1:] - ev.dN_direct[1:], ev.dN_A, ev.dN_direct)
            out[f"fundamental_from_quadratic_level{i}"] = fundamental_from_quadratic_residual(ctx, i, ev)
            if fd:
                f = finite_difference_residuals(ctx, i, mu, x, ev, rmax)
                out[f"fd_dI_level{i}"] = f["dI"]
                out[f"fd_dA_level{i}"] = f["dA"]
        return out

    merged = run_trials(trial, trials, seed, threads)
    return _report("explicit-formula", ctx, trials, seed, tol, merged,
                   {"levels": [lvl.name for lvl in ctx.chain.levels], "r_max": rmax})


def suite_quadratic(ctx: Context, trials: int = 100, tol: float = 1e-9, seed: int = 0,
                    threads: int = 1) -> SuiteReport:
    """Quadratic relation for ``R(mu)`` and ``[mu_k, A_k] = 0`` for ``k = k_phi``."""
    rep = ctx.rep

    def trial(rng, k):
        mu, _ = _generic_pair(ctx, rng)
        m = rep.matrix(mu)
        A = compute_A(ctx, mu, ctx.k_phi)
        mu_k = rep.project(mu, ctx.k_phi)
        return {
            "quadratic_relation": quadratic_relation_residual(rep, m, ctx.lam),
            "k_phi_sufficient_condition": _rel(rep.bracket(mu_k, A), mu_k, A),
        }

    return _report("quadratic", ctx, trials, seed, tol, run_trials(trial, trials, seed, threads))


def suite_basic_forms(ctx: Context, trials: int = 100, tol: float = 1e-9, seed: int = 0,
                      threads: int = 1, rmax: int = 3) -> SuiteReport:
    """(a) ``[A_k, mu_k]``; (b) ``d_N p`` kills ``X#`` for ``X`` in ``k``;
    (c) invariance of ``d_N p`` under ``Ad_g``, ``g = exp Y``, ``Y`` in ``k``."""
    rep = ctx.rep

    def trial(rng, k):
        mu, x = _generic_pair(ctx, rng)
        out = {}
        for i in range(1, ctx.n_levels + 1):
            sub = ctx.level(i)
            A = compute_A(ctx, mu, sub)
            mu_k = rep.project(mu, sub)
            out[f"sufficient_condition_level{i}"] = _rel(rep.bracket(A, mu_k), A, mu_k)
            xin = ctx.random_element(rng, sub=sub)
            ev_in = eval_level(ctx, i, mu, xin, rmax)
            out[f"basic_level{i}"] = _rel(ev_in.dN_A[1:rmax + 1], ev_in.dN_A)
            y = ctx.random_element(rng, scale=float(rng.uniform(0.5, 2.0)), sub=sub)
            u = unitary_exp(rep, y)
            ev = eval_level(ctx, i, mu, x, rmax)
            ev_g = eval_level(ctx, i, adjoint(rep, u, mu), adjoint(rep, u, x), rmax)
            out[f"equivariance_level{i}"] = _rel(ev_g.dN_A[1:rmax + 1] - ev.dN_A[1:rmax + 1],
                                                 ev.dN_A, ev_g.dN_A)
        return out

    return _report("basic-forms", ctx, trials, seed, tol, run_trials(trial, trials, seed, threads))


def hamiltonian_generator(ctx: Context, j: int, s: int, mu) -> np.ndarray:
    """``X_q`` in ``k_j`` with ``(Y, X_q) = dq(Y)`` for ``q = I_s^{(j)}``."""
    rep = ctx.rep
    sub = ctx.level(j)
    slots = np.nonzero(rep.mask(sub))[0]
    gram = rep.form[np.ix_(slots, slots)]
    if abs(np.linalg.det(gram)) < 1e-300 or np.linalg.cond(gram) > 1e12:
        raise StructuralError(f"invariant form is singular on level {j}")
    m = ctx.restrict(j, rep.project(mu, sub))
    power = np.linalg.matrix_power(m, s - 1)
    p = ctx.w_plus(j)
    rhs = np.array([(1j ** s * np.trace(power @ (p.conj().T @ rep.matrices[a] @ p))).real
                    for a in slots])
    coeffs = np.linalg.solve(gram, rhs)
    out = np.zeros(rep.basis.dim)
    out[slots] = coeffs
    return out


def suite_commutation(ctx: Context, trials: int = 100, tol: float = 1e-9, seed: int = 0,
                      threads: int = 1, pairs=None, degrees=(1, 2, 3)) -> SuiteReport:
    """``d_N p (X_q#) = 0`` for ``p`` at level ``i`` and ``q`` at level ``j >= i``."""
    n = ctx.n_levels
    if pairs is None:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]

    def trial(rng, k):
        mu, _ = _generic_pair(ctx, rng)
        out = {}
        for i, j in pairs:
            for s in degrees:
                xq = hamiltonian_generator(ctx, j, s, mu)
                ev = eval_level(ctx, i, mu, xq, max(degrees))
                scale = max(1.0, float(np.max(np.abs(xq))))
                for r in degrees:
                    key = f"poisson_level{i}_r{r}_vs_level{j}_s{s}"
                    out[key] = abs(ev.dN_A[r]) / scale
        return out

    return _report("commutation", ctx, trials, seed, tol, run_trials(trial, trials, seed, threads))


def slice_closed_forms(ctx: Context, a) -> dict:
    """Residuals of the closed forms for ``Ad_{exp a} rho_phi`` on the slice."""
    rep = ctx.rep
    roots = maximal_orthogonal_set(ctx.space).roots
    sample = random_orbit_point(ctx, mode="slice", a=a)
    mu = sample.mu
    f = [0.5 * (math.cos(2 * aj) - 1) for aj in a]
    g = [-0.5 * math.sin(2 * aj) for aj in a]
    ih = [rep.coroot_element(r) for r in roots]
    rho_t = ctx.rho + sum(fj * h for fj, h in zip(f, ih))
    xi_t = sum(-gj * rep.root_element("x", r) for gj, r in zip(g, roots))  # g J(y) = -g x
    mu_k = rep.project(mu, ctx.k_phi)
    mu_p = rep.project_perp(mu, ctx.k_phi)
    target_bracket = 2 * sum((fj + fj * fj) * h for fj, h in zip(f, ih))
    bracket = rep.bracket(rep.J(xi_t), xi_t)
    A = compute_A(ctx, mu, ctx.k_phi)
    return {
        "rho_tilde": _rel(mu_k - rho_t, mu_k, rho_t),
        "xi_tilde": _rel(mu_p - xi_t, mu_p, xi_t),
        "A_resummation_bracket": _rel(bracket - target_bracket, bracket, target_bracket),
        "A_k_phi": _rel(A - 0.5 * target_bracket, A),
        "g_squared_identity": max(abs(gj * gj + fj + fj * fj) for fj, gj in zip(f, g)),
    }


def _slice_grid(rank: int, rng, n_random: int, grid: int = 5):
    vals = np.linspace(-math.pi / 2, math.pi / 2, grid)
    points = []
    for u in vals:
        for v in vals:
            points.append(tuple(float([u, v][j % 2] + 0.1 * (j // 2)) for j in range(rank)))
    for _ in range(n_random):
        points.append(tuple(float(t) for t in rng.uniform(-math.pi, math.pi, size=rank)))
    return points


def suite_slice(ctx: Context, n_random: int = 50, tol: float = 1e-9, seed: int = 0,
                threads: int = 1) -> SuiteReport:
    """Closed forms on a 5x5 grid plus random slice points."""
    rank = ctx.space.rank
    points = _slice_grid(rank, np.random.default_rng(seed), n_random)

    def trial(rng, k):
        return slice_closed_forms(ctx, points[k])

    merged = run_trials(trial, len(points), seed, threads)
    return _report("slice", ctx, len(points), seed, tol, merged, {"grid": "5x5", "random": n_random})


def kphi_invariants(ctx: Context, mu, x=None) -> dict:
    """``I10, I20, I01, I11`` at ``mu`` and, given a probe, their ``d`` and ``d_N``."""
    rep = ctx.rep
    sub = ctx.k_phi
    mu_k = rep.project(mu, sub)
    A = compute_A(ctx, mu, sub)
    rho = ctx.rho
    B = rep.inner
    vals = {"I10": B(mu_k, rho), "I20": B(mu_k, mu_k), "I01": B(rho, A), "I11": B(mu_k, A)}
    if x is None:
        return vals
    dmu = rep.bracket(x, mu)
    dmu_k = rep.project(dmu, sub)
    dA = compute_dA(ctx, mu, dmu, sub)
    dn = rep.project(dN_mu(ctx, mu, x), sub)
    vals.update({
        "dI10": B(dmu_k, rho), "dI20": 2 * B(mu_k, dmu_k), "dI11": B(dmu_k, A) + B(mu_k, dA),
        "dNI10": B(dn, rho), "dNI20": 2 * B(mu_k, dn),
        "dNI10_A": B(dmu_k, rho) + ctx.mother_sign * B(rho, dA),
        "dNI20_A": 2 * B(mu_k, dmu_k) + 2 * ctx.mother_sign * B(mu_k, dA),
    })
    return vals


def slice_constants(ctx: Context) -> tuple:
    system = ctx.space.root_system
    return tuple(-2 / system.norm2(r) for r in maximal_orthogonal_set(ctx.space).roots)


def suite_kphi(ctx: Context, trials: int = 100, tol: float = 1e-9, seed: int = 0,
               threads: int = 1) -> SuiteReport:
    """k_phi invariants: closed forms in the slice variables and the two
    ``d_N`` identities on random probes."""
    rho2 = float(ctx.space.rho_norm2)
    cs = [float(c) for c in slice_constants(ctx)]

    def trial(rng, k):
        mu, x = _generic_pair(ctx, rng)
        v = kphi_invariants(ctx, mu, x)
        out = {}
        lhs1, rhs1 = v["dNI10"], v["dI10"] - 0.5 * v["dI20"]
        lhs2 = v["dNI20"]
        rhs2 = v["dI20"] - 2 / 3 * v["dI10"] - 4 / 3 * v["dI11"]
        out["dN_I10"] = _rel(lhs1 - rhs1, lhs1, rhs1)
        out["dN_I20"] = _rel(lhs2 - rhs2, lhs2, rhs2)
        out["routes_agree"] = _rel([v["dNI10"] - v["dNI10_A"], v["dNI20"] - v["dNI20_A"]],
                                   v["dNI10"], v["dNI20"])
        out["I01_identity"] = _rel(v["I01"] - 0.5 * (v["I20"] - rho2), v["I01"], v["I20"])
        # symmetric form: p1 = I10 - (rho,rho), p2 = I20/2 - I10 + (rho,rho)/2,
        # p3 = (I11 - p1 - 3 p2)/2
        dp1 = v["dI10"]
        dp2 = 0.5 * v["dI20"] - v["dI10"]
        dp3 = 0.5 * (v["dI11"] - dp1 - 3 * dp2)
        dn_p1 = v["dNI10"]
        dn_p2 = 0.5 * v["dNI20"] - v["dNI10"]
        out["dN_p1"] = _rel(dn_p1 + dp2, dn_p1, dp2)
        out["dN_p2"] = _rel(dn_p2 + 4 / 3 * dp3, dn_p2, dp3)
        # closed forms at a slice point
        a = rng.uniform(-math.pi, math.pi, size=len(cs))
        s = random_orbit_point(ctx, mode="slice", a=a)
        w = kphi_invariants(ctx, s.mu)
        f = [0.5 * (math.cos(2 * aj) - 1) for aj in a]
        p = {n: sum(c * fj ** n for c, fj in zip(cs, f)) for n in (1, 2, 3)}
        out["slice_I10"] = _rel(w["I10"] - (rho2 + p[1]), w["I10"])
        out["slice_I20"] = _rel(w["I20"] - (rho2 + 2 * p[1] + 2 * p[2]), w["I20"])
        out["slice_I01"] = _rel(w["I01"] - (p[1] + p[2]), w["I01"])
        out["slice_I11"] = _rel(w["I11"] - (p[1] + 3 * p[2] + 2 * p[3]), w["I11"])
        return out

    return _report("kphi", ctx, trials, seed, tol, run_trials(trial, trials, seed, threads))


def nijenhuis_spectrum(ctx: Context, mu) -> np.ndarray:
    """``2i(lambda - Lambda_phi)`` for the eigenvalues of ``R_{V+}(mu_{k_phi})``."""
    m = ctx.restrict("V+", ctx.rep.project(mu, ctx.k_phi))
    vals = np.linalg.eigvals(m)
    return np.sort_complex(2j * (vals - ctx.lam))


def spectrum_match_residual(eigs: np.ndarray, f) -> float:
    targets = np.array([0.0] + [-2 * fj for fj in f], dtype=complex)
    miss_eigs = max(float(np.min(np.abs(targets - s))) for s in eigs)
    miss_target = max(float(np.min(np.abs(eigs - t))) for t in targets[1:]) if len(targets) > 1 else 0.0
    return max(miss_eigs, miss_target)


def suite_spectrum(ctx: Context, trials: int = 50, tol: float = 1e-9, seed: int = 0,
                   threads: int = 1) -> SuiteReport:
    """Spectrum via ``2i(lambda - Lambda)`` against ``{-2 f_j}`` at slice points,
    plus the same comparison after a random ``K_phi`` rotation."""
    rep = ctx.rep
    rank = ctx.space.rank

    def trial(rng, k):
        a = rng.uniform(-math.pi, math.pi, size=rank)
        s = random_orbit_point(ctx, mode="slice", a=a)
        f = [0.5 * (math.cos(2 * aj) - 1) for aj in a]
        eigs = nijenhuis_spectrum(ctx, s.mu)
        y = ctx.random_element(rng, scale=float(rng.uniform(0.5, 2.0)), sub=ctx.k_phi)
        rotated = adjoint(rep, unitary_exp(rep, y), s.mu)
        return {
            "spectrum_vs_slice": spectrum_match_residual(eigs, f),
            "spectrum_rotated": spectrum_match_residual(nijenhuis_spectrum(ctx, rotated), f),
        }

    return _report("spectrum", ctx, trials, seed, tol, run_trials(trial, trials, seed, threads))


SUITES = {
    "explicit-formula": suite_explicit_formula,
    "quadratic": suite_quadratic,
    "basic-forms": suite_basic_forms,
    "commutation": suite_commutation,
    "slice": suite_slice,
    "kphi": suite_kphi,
    "spectrum": suite_spectrum,
}


def make_context(space: SpaceDescriptor, rep: MatrixRep | None = None, mutate=None) -> Context:
    return Context(space, rep or default_rep(space), Mutations.parse(mutate))


def run_suite(name: str, ctx: Context, trials: int = 100, tol: float = 1e-9, seed: int = 0,
              threads: int = 1) -> SuiteReport:
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    fn = SUITES[name]
    if name == "slice":
        return fn(ctx, n_random=trials, tol=tol, seed=seed, threads=threads)
    return fn(ctx, trials=trials, tol=tol, seed=seed, threads=threads)

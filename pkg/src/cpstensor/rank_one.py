"""Best rank-one CPS approximation via the Hermitian matrix lift.

The largest C-eigenvalue problem max T(conj(x)^d x^d) over unit x lifts to a
rank-one-constrained Hermitian program through X = M_pi(conj(x)^{ox d} (x)
x^{ox d}) whenever pi satisfies the conjugate and rank conditions.  Two
convex relaxations are solved by ADMM:

* SDP: drop the rank constraint, keep X PSD with trace one.
* nuclear: drop PSD, penalize the nuclear norm (its prox is an eigenvalue
  soft threshold); on any feasible rank-one point the penalty is constant.

Solutions are certified rank-one through the modulus ratio of the two top
eigenvalues; certified iterates yield an eigenpair of the original tensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadPermutation,
    NotCps,
    NotInSubspace,
    NotRankOne,
    NotUnit,
    SizeMismatch,
    UnsupportedDimension,
    ZeroMatrix,
)
from . import reshaping as rs
from . import tensor as tz
from .linalg import eig_soft_threshold, project_psd, top_singular_ratio
from .tensor import DenseTensor, EigenPair

SOLVER_TOL = 1e-7
MAX_ITER = 10000
RANK1_TOL = 1e-6
EIG_TOL = 1e-6


@dataclass
class SolverOptions:
    tol: float = SOLVER_TOL
    max_iter: int = MAX_ITER
    beta: float | None = None  # initial ADMM penalty; defaults to ||C||_2
    over_relax: float = 1.7  # standard over-relaxation factor in (1, 2)
    adapt_every: int = 10
    adapt_ratio: float = 10.0
    rank1_tol: float = RANK1_TOL
    eig_tol: float = EIG_TOL


@dataclass
class MatrixModel:
    """Data of the lifted problem: C = conj(M_pi(T)) plus projector context."""

    tensor: DenseTensor
    pi: tuple[int, ...]
    n: int
    d: int
    C: np.ndarray
    _proj_identity: np.ndarray = field(default=None, repr=False)
    _proj_identity_trace: float = field(default=0.0, repr=False)

    @property
    def size(self) -> int:
        return self.n**self.d


@dataclass
class SolveReport:
    X: np.ndarray
    objective: float
    linear_objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    converged: bool
    rank_one_ratio: float = math.inf
    eigenpair: EigenPair | None = None
    eigen_res: float = math.inf
    certified: bool = False
    model: str = "sdp"
    rho: float = 0.0

    def to_dict(self) -> dict:
        pair = None
        if self.eigenpair is not None:
            pair = {
                "value": [self.eigenpair.value.real, self.eigenpair.value.imag],
                "vector": [[z.real, z.imag] for z in self.eigenpair.vector],
            }
        return {
            "model": self.model,
            "objective": self.objective,
            "linear_objective": self.linear_objective,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "rank_one_ratio": self.rank_one_ratio,
            "certified": self.certified,
            "eigen_residual": self.eigen_res,
            "eigenpair": pair,
            "rho": self.rho,
        }


def build_matrix_model(t: DenseTensor, pi=None) -> MatrixModel:
    """Lift a CPS tensor to its pi-matricized Hermitian data matrix."""
    if not tz.is_cps(t):
        raise NotCps("matrix lift needs a CPS tensor")
    d = t.half
    if pi is None:
        pi = rs.canonical_pi(d)
    pi = rs.validate_permutation(pi, 2 * d)
    if not rs.satisfies_conj_condition(pi, d):
        raise BadPermutation(f"{pi} violates the conjugate (Hermitian) condition")
    if not rs.satisfies_rank_condition(pi, d):
        raise BadPermutation(f"{pi} violates the rank-one equivalence condition")
    c = np.conj(rs.matricize_pi(t, pi))
    model = MatrixModel(tensor=t, pi=pi, n=t.n, d=d, C=c)
    pid = project_cps_subspace(np.eye(model.size, dtype=complex), model)
    model._proj_identity = pid
    model._proj_identity_trace = float(np.trace(pid).real)
    return model


def project_cps_subspace(x: np.ndarray, model: MatrixModel) -> np.ndarray:
    """Orthogonal projection onto M_pi(CPS), computed in tensor coordinates."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (model.size, model.size):
        raise SizeMismatch(f"expected shape {(model.size, model.size)}")
    w = rs.dematricize_pi(x, model.pi, model.n, model.d)
    sym = tz.symmetrize_ps(w)
    herm = 0.5 * (sym.entries + tz._block_swap_conj(sym.entries, model.d))
    return rs.matricize_pi(DenseTensor(model.n, 2 * model.d, herm), model.pi)


def _project_affine(x: np.ndarray, model: MatrixModel) -> np.ndarray:
    """Exact projection onto the affine set {X in M_pi(CPS): tr X = 1}."""
    w = project_cps_subspace(x, model)
    shift = (1.0 - np.trace(w).real) / model._proj_identity_trace
    return w + shift * model._proj_identity


def _admm(model: MatrixModel, prox, opts: SolverOptions) -> tuple[np.ndarray, ...]:
    """Two-block ADMM with over-relaxation: X affine-feasible, Y = prox
    iterate, X = Y at the optimum."""
    c = model.C
    beta = opts.beta
    if beta is None:
        beta = max(float(np.linalg.norm(c, 2)), 1e-12)
    alpha = opts.over_relax
    x = _project_affine(np.zeros_like(c), model)
    y = x.copy()
    u = np.zeros_like(c)
    primal = dual = math.inf
    it = 0
    for it in range(1, opts.max_iter + 1):
        x = _project_affine(y + (c - u) / beta, model)
        x_relaxed = alpha * x + (1.0 - alpha) * y
        y_new = prox(x_relaxed + u / beta, beta)
        dual = beta * float(np.linalg.norm(y_new - y))
        y = y_new
        u = u + beta * (x_relaxed - y)
        primal = float(np.linalg.norm(x - y))
        if max(primal, dual) <= opts.tol:
            break
        if it % opts.adapt_every == 0:
            if primal > opts.adapt_ratio * dual:
                beta *= 2.0
            elif dual > opts.adapt_ratio * primal:
                beta /= 2.0
    converged = max(primal, dual) <= opts.tol
    return x, primal, dual, it, converged


def solve_sdp(model: MatrixModel, opts: SolverOptions | None = None) -> SolveReport:
    """Maximize <C, X> over trace-one PSD matrices in the CPS subspace."""
    opts = opts or SolverOptions()
    x, primal, dual, it, ok = _admm(
        model, lambda w, beta: project_psd(w), opts
    )
    lin = float(np.vdot(model.C, x).real)
    report = SolveReport(
        X=x,
        objective=lin,
        linear_objective=lin,
        primal_residual=primal,
        dual_residual=dual,
        iterations=it,
        converged=ok,
        model="sdp",
    )
    return certify_and_recover(report, model, opts)


def solve_nuclear(
    model: MatrixModel, rho: float | None = None, opts: SolverOptions | None = None
) -> SolveReport:
    """Maximize <C, X> - rho ||X||_* over trace-one Hermitian CPS matrices.

    The penalty weight must be large enough to keep the model bounded:
    along a traceless feasible direction D the objective grows at rate
    <C, D> - rho ||D||_*, so any rho >= ||C||_2 (the spectral norm) is safe,
    while small weights can make the supremum infinite.  The default is
    rho = ||C||_2; on feasible rank-one points the penalty is the constant
    rho, so certification and the recovered eigenpair are unaffected.
    """
    opts = opts or SolverOptions()
    if rho is None:
        rho = float(np.linalg.norm(model.C, 2))
    if rho <= 0:
        raise ValueError("rho must be positive")
    x, primal, dual, it, ok = _admm(
        model, lambda w, beta: eig_soft_threshold(w, rho / beta), opts
    )
    lin = float(np.vdot(model.C, x).real)
    nuc = float(np.abs(np.linalg.eigvalsh(0.5 * (x + x.conj().T))).sum())
    report = SolveReport(
        X=x,
        objective=lin - rho * nuc,
        linear_objective=lin,
        primal_residual=primal,
        dual_residual=dual,
        iterations=it,
        converged=ok,
        model="nuclear",
        rho=rho,
    )
    return certify_and_recover(report, model, opts)


def certify_and_recover(
    report: SolveReport, model: MatrixModel, opts: SolverOptions | None = None
) -> SolveReport:
    """Attach the rank-one certificate and, when it holds, the eigenpair."""
    opts = opts or SolverOptions()
    t = model.tensor
    try:
        report.rank_one_ratio = top_singular_ratio(report.X)
    except ZeroMatrix:
        report.rank_one_ratio = math.inf
        return report
    if report.rank_one_ratio > opts.rank1_tol:
        return report
    try:
        vec, _ = rs.extract_rank_one_vector(
            report.X, model.pi, model.n, model.d, rank1_tol=opts.rank1_tol
        )
    except (NotRankOne, NotInSubspace):
        return report
    value = tz.conj_form_eval(t, vec)
    pair = EigenPair(value.real, vec)
    res = eigen_residual(t, pair)
    report.eigenpair = pair
    report.eigen_res = res
    report.certified = bool(res <= opts.eig_tol and abs(value.imag) <= opts.eig_tol)
    return report


def eigen_residual(t: DenseTensor, pair: EigenPair, tol: float = 1e-8) -> float:
    """|| T(. conj(x)^{d-1} x^d) - lambda x || for a unit eigenvector candidate."""
    x = np.asarray(pair.vector, dtype=complex)
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise NotUnit("eigenvector must have unit norm")
    return float(np.linalg.norm(tz.partial_map(t, x) - pair.value * x))


def best_rank_one_error(t: DenseTensor, pair: EigenPair) -> float:
    """|| T - lambda x^{ox d} (x) conj(x)^{ox d} || at the given pair.

    The approximant puts x in the first mode block, i.e. the rank-one CPS
    term has coefficient lambda on the vector conj(x); with that orientation
    the cross term is the conjugate form at x itself, so for an eigenpair
    the squared error collapses to ||T||^2 - lambda^2.
    """
    x = np.asarray(pair.vector, dtype=complex)
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise NotUnit("vector must have unit norm")
    approx = tz.rank_one_cps(complex(pair.value).real, np.conj(x), t.half)
    return float(np.linalg.norm(t.entries - approx.entries))


def brute_force_max_eig(
    t: DenseTensor, grid: int = 2000, polish_steps: int = 1
) -> EigenPair:
    """Grid-search oracle for max T(conj(x)^d x^d) at n = 2.

    Sweeps x = (cos th, sin th e^{i ph}) over a grid x grid lattice (global
    phase fixed by a real first coordinate), then applies projected gradient
    ascent steps using the partial map as the Wirtinger gradient direction.
    """
    if t.n != 2:
        raise UnsupportedDimension("the brute-force oracle only supports n = 2")
    d = t.half
    m = t.entries.reshape(2**d, 2**d)
    thetas = np.linspace(0.0, np.pi / 2, grid)
    phis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    best_val = -math.inf
    best_x = None
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)
    for ph in phis:
        xs = np.vstack([cos_t, sin_t * np.exp(1j * ph)])  # 2 x grid
        u = xs
        for _ in range(d - 1):
            u = np.einsum("ac,bc->abc", u, xs).reshape(-1, xs.shape[1])
        vals = np.real(np.sum(np.conj(u) * (m @ u), axis=0))
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val = float(vals[k])
            best_x = xs[:, k].copy()

    x = best_x
    val = best_val
    step = 0.5
    for _ in range(max(polish_steps, 0) * 25):
        g = tz.partial_map(t, x)  # ascent direction for the conjugate form
        cand = x + step * g
        nrm = np.linalg.norm(cand)
        if nrm == 0:
            break
        cand /= nrm
        cval = tz.conj_form_eval(t, cand).real
        if cval > val:
            x, val = cand, cval
        else:
            step *= 0.5
            if step < 1e-12:
                break
    return EigenPair(val, x)

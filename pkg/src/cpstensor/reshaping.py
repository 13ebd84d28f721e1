"""Mode permutations, vectorization and square matricizations.

The permutation conditions implemented here decide when the pi-matricization
of a CPS tensor is Hermitian (conjugate condition) and when rank-one
matricizations certify rank-one tensors (rank condition).
"""

from __future__ import annotations

import numpy as np

from .errors import (
    BadPermutation,
    NotInSubspace,
    NotRankOne,
    OrderMismatch,
    SizeMismatch,
)
from . import tensor as tz
from .tensor import DenseTensor

RANK1_TOL = 1e-6
EXTRACT_TOL = 1e-6


def validate_permutation(pi, order: int) -> tuple[int, ...]:
    """Check that pi is a bijection on 1..order and return it as a tuple."""
    pi = tuple(int(p) for p in pi)
    if len(pi) != order or sorted(pi) != list(range(1, order + 1)):
        raise BadPermutation(f"{pi} is not a permutation of 1..{order}")
    return pi


def parse_permutation(text: str) -> tuple[int, ...]:
    """Parse a comma-separated 1-based permutation, e.g. "1,3,4,2"."""
    try:
        pi = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise BadPermutation(f"cannot parse permutation {text!r}") from exc
    return validate_permutation(pi, len(pi))


def invert_permutation(pi) -> tuple[int, ...]:
    inv = [0] * len(pi)
    for pos, p in enumerate(pi):
        inv[p - 1] = pos + 1
    return tuple(inv)


def pi_transpose(t: DenseTensor, pi) -> DenseTensor:
    """Tensor transpose: mode k of the result originates from mode pi_k of t."""
    if len(tuple(pi)) != t.order:
        raise OrderMismatch(f"permutation length {len(tuple(pi))} != order {t.order}")
    pi = validate_permutation(pi, t.order)
    axes = [p - 1 for p in pi]
    return DenseTensor(t.n, t.order, np.transpose(t.entries, axes))


def vectorize(t: DenseTensor) -> np.ndarray:
    """v(T) in base-n index order (row-major layout makes this a flat view)."""
    return t.entries.reshape(-1).copy()


def devectorize(v: np.ndarray, n: int, order: int) -> DenseTensor:
    v = np.asarray(v, dtype=complex)
    if v.size != n**order:
        raise SizeMismatch(f"expected {n ** order} entries, got {v.size}")
    return DenseTensor(n, order, v.reshape((n,) * order))


def matricize(t: DenseTensor) -> np.ndarray:
    """Standard square matricization M(T) of an even-order tensor."""
    d = t.half  # raises OddOrder
    big = t.n**d
    return t.entries.reshape(big, big).copy()


def dematricize(m: np.ndarray, n: int, d: int) -> DenseTensor:
    m = np.asarray(m, dtype=complex)
    if m.shape != (n**d, n**d):
        raise SizeMismatch(f"expected shape {(n ** d, n ** d)}, got {m.shape}")
    return DenseTensor(n, 2 * d, m.reshape((n,) * (2 * d)))


def matricize_pi(t: DenseTensor, pi) -> np.ndarray:
    """pi-matricization M_pi(T) = M(T^pi)."""
    return matricize(pi_transpose(t, pi))


def dematricize_pi(m: np.ndarray, pi, n: int, d: int) -> DenseTensor:
    """Exact inverse of matricize_pi."""
    pi = validate_permutation(pi, 2 * d)
    tp = dematricize(m, n, d)
    return pi_transpose(tp, invert_permutation(pi))


def satisfies_conj_condition(pi, d: int) -> bool:
    """True iff for every k exactly one of {pi_k, pi_{d+k}} lies in 1..d."""
    pi = validate_permutation(pi, 2 * d)
    first = set(range(1, d + 1))
    return all(len({pi[k], pi[d + k]} & first) == 1 for k in range(d))


def satisfies_rank_condition(pi, d: int) -> bool:
    """floor(d/2) <= |{pi_1..pi_d} & {1..d}| <= ceil(d/2)."""
    pi = validate_permutation(pi, 2 * d)
    hits = len(set(pi[:d]) & set(range(1, d + 1)))
    return d // 2 <= hits <= (d + 1) // 2


def canonical_pi(d: int) -> tuple[int, ...]:
    """The straightforward permutation satisfying both conditions.

    (1,3,4,2) for d=2, (1,2,4,5,6,3) for d=3, (1,2,5,6,7,8,3,4) for d=4.
    """
    if d < 1:
        raise BadPermutation("d must be positive")
    ceil, floor = (d + 1) // 2, d // 2
    pi = (
        list(range(1, ceil + 1))
        + list(range(d + 1, d + floor + 1))
        + list(range(d + floor + 1, 2 * d + 1))
        + list(range(ceil + 1, d + 1))
    )
    return tuple(pi)


def cps_projection_residual(t: DenseTensor) -> float:
    """Distance from t to the CPS subspace, relative to ||t||."""
    sym = tz.symmetrize_ps(t)
    herm = 0.5 * (sym.entries + tz._block_swap_conj(sym.entries, t.half))
    res = float(np.linalg.norm(t.entries - herm))
    return res / max(t.norm(), 1e-300)


def extract_rank_one_vector(
    x: np.ndarray,
    pi,
    n: int,
    d: int,
    rank1_tol: float = RANK1_TOL,
    extract_tol: float = EXTRACT_TOL,
) -> tuple[np.ndarray, float]:
    """Recover (unit x, real lam) with X ~ lam * M_pi(conj(x)^{ox d} (x) x^{ox d}).

    For any valid pi such a matrix equals lam * u u^H where u vectorizes the
    tensor product of the first-block factors (each factor is conj(x) or x
    according to whether its source mode sits in the first half).  The top
    eigenvector therefore devectorizes to a rank-one order-d tensor, whose
    leading singular vector of the mode-1 unfolding recovers x up to phase;
    this stays accurate on solver iterates that are only approximately
    rank-one, unlike reading entry patterns directly.  The global phase is
    fixed by making the largest-modulus entry of x real positive (lowest
    index wins ties).
    """
    from .linalg import herm_eig, top_singular_ratio

    x = np.asarray(x, dtype=complex)
    pi = validate_permutation(pi, 2 * d)
    ratio = top_singular_ratio(x)
    if ratio > rank1_tol:
        raise NotRankOne(f"second/first eigenvalue ratio {ratio:.3e} too large")
    w = dematricize_pi(x, pi, n, d)
    if cps_projection_residual(w) > max(extract_tol, 1e-8):
        raise NotInSubspace("matrix does not lie in the matricized CPS subspace")

    eig = herm_eig(x)
    top_idx = int(np.argmax(np.abs(eig.eigenvalues)))
    u = eig.eigenvectors[:, top_idx]
    factor = u.reshape(n, -1)  # mode-1 unfolding of the order-d pattern tensor
    _, _, vh = np.linalg.svd(factor.conj().T, full_matrices=False)
    f1 = np.conj(vh[0])  # top left singular vector of the unfolding
    vec = np.conj(f1) if pi[0] <= d else f1
    vec = vec / np.linalg.norm(vec)
    mods = np.abs(vec)
    top = int(np.argmax(mods >= mods.max() - 1e-12))  # lowest near-max index
    vec = vec * np.conj(vec[top] / abs(vec[top]))

    pattern = matricize_pi(tz.rank_one_cps(1.0, vec, d), pi)
    lam = float(np.vdot(pattern, x).real)  # least-squares coefficient, ||pattern|| = 1
    res = np.linalg.norm(x - lam * pattern) / max(np.linalg.norm(x), 1e-300)
    if res > extract_tol:
        raise NotRankOne(f"rank-one reconstruction residual {res:.3e} too large")
    return vec, lam

"""Spectral analysis: stationarity, weighted singular values, Dirichlet forms.

A kernel K acting between weighted spaces l2(mu_in) -> l2(mu_out) has the
Euclidean avatar  B = D_out^{1/2} K D_in^{-1/2}, and the weighted singular
triples are read off the ordinary SVD of B.  When mu_out K = mu_in the top
triple is exactly (1, const, const); the power-iteration path for large
sparse kernels deflates that pair analytically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .core import DENSE_LIMIT, Distribution, MarkovKernel, StateSpace, make_kernel
from .errors import (
    NotIrreducible,
    NotSelfAdjoint,
    NotSymmetric,
    SpaceMismatch,
    StabilityNotCertified,
    TooLarge,
    ZeroWeight,
)

_DIRECT_SOLVE_LIMIT = 2000
_STATIONARY_TOL = 1e-12


def is_irreducible(kernel: MarkovKernel) -> bool:
    """True when the support graph is strongly connected."""
    graph = kernel.support_graph()
    n_components, _ = connected_components(graph, directed=True, connection="strong")
    return int(n_components) == 1


def period(kernel: MarkovKernel) -> int:
    """Period of an irreducible kernel: gcd of cycle lengths through state 0.

    Computed from breadth-first levels: every edge (u, v) closes a cycle of
    length level(u) + 1 - level(v) modulo the period.
    """
    if not is_irreducible(kernel):
        raise NotIrreducible("period is only defined per communicating class")
    graph = kernel.support_graph()
    n = kernel.size
    indptr, indices = graph.indptr, graph.indices
    level = np.full(n, -1, dtype=np.int64)
    level[0] = 0
    frontier = [0]
    g = 0
    while frontier:
        nxt = []
        for u in frontier:
            lu = level[u]
            for v in indices[indptr[u] : indptr[u + 1]]:
                if level[v] < 0:
                    level[v] = lu + 1
                    nxt.append(int(v))
                else:
                    g = math.gcd(g, int(lu + 1 - level[v]))
        frontier = nxt
    # remaining edges between already-leveled states
    for u in range(n):
        lu = level[u]
        for v in indices[indptr[u] : indptr[u + 1]]:
            g = math.gcd(g, int(lu + 1 - level[v]))
    return abs(g) if g else 1


def stationary_distribution(kernel: MarkovKernel) -> Distribution:
    """Invariant probability vector of an irreducible kernel.

    Direct linear solve up to 2000 states, damped power iteration beyond;
    either way the result is refined until the residual max_x |(pi K - pi)(x)|
    is at most 1e-12.
    """
    if not is_irreducible(kernel):
        raise NotIrreducible("stationary distribution needs an irreducible kernel")
    n = kernel.size
    if n <= _DIRECT_SOLVE_LIMIT:
        m = kernel.dense()
        a = m.T - np.eye(n)
        a[-1, :] = 1.0
        b = np.zeros(n)
        b[-1] = 1.0
        pi = np.linalg.solve(a, b)
    else:
        pi = np.full(n, 1.0 / n)
    pi = np.where(pi < 0.0, 0.0, pi)
    pi = pi / pi.sum()
    mat = kernel.matrix
    for _ in range(100_000):
        step = pi @ mat
        if sp.issparse(mat):
            step = np.asarray(step).ravel()
        if float(np.max(np.abs(step - pi))) <= _STATIONARY_TOL:
            break
        # lazy damping keeps the iteration convergent for periodic kernels
        pi = 0.5 * (pi + step)
        pi = pi / pi.sum()
    else:
        raise NotIrreducible("power iteration failed to reach the residual target")
    return Distribution(kernel.space, pi / pi.sum())


@dataclass(frozen=True)
class SpectralDecomposition:
    """Weighted singular triples of a kernel between two weighted spaces.

    Column j of `right_basis` (phi_j) and `left_basis` (psi_j) satisfy
    K phi_j = sigma_j psi_j; each basis is orthonormal in its own weighted
    inner product.  The bases may hold fewer columns than states when only
    the leading triples were computed.
    """

    singular_values: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    mu_in: Distribution
    mu_out: Distribution


def _check_positive(mu: Distribution, name: str) -> np.ndarray:
    w = mu.weights
    if np.any(w <= 0.0):
        raise ZeroWeight(f"{name} must be strictly positive everywhere")
    return w


def weighted_singular_values(
    kernel: MarkovKernel,
    mu_in: Distribution,
    mu_out: Distribution,
    top: Optional[int] = None,
) -> SpectralDecomposition:
    """Singular value decomposition of K: l2(mu_in) -> l2(mu_out).

    Dense spaces get the full decomposition.  Above DENSE_LIMIT (or when
    `top` is given on a sparse kernel) only the leading two triples are
    computed, by power iteration on the Euclidean avatar with the known
    (1, const, const) triple deflated analytically; that shortcut requires
    mu_out K = mu_in, which is checked.
    """
    win = _check_positive(mu_in, "mu_in")
    wout = _check_positive(mu_out, "mu_out")
    if mu_in.space != kernel.space or mu_out.space != kernel.space:
        raise SpaceMismatch("measures live on a different space than the kernel")
    n = kernel.size
    sin = np.sqrt(win)
    sout = np.sqrt(wout)
    if n <= DENSE_LIMIT and not (top == 2 and kernel.is_sparse):
        b = (sout[:, None] * kernel.dense()) / sin[None, :]
        u, s, vt = np.linalg.svd(b)
        v = vt.T
        # fix an overall sign per triple: make the heaviest entry of phi positive
        for j in range(n):
            col = v[:, j]
            k = int(np.argmax(np.abs(col)))
            if col[k] < 0:
                v[:, j] = -col
                u[:, j] = -u[:, j]
        left = u / sout[:, None]
        right = v / sin[:, None]
        return SpectralDecomposition(s, left, right, mu_in, mu_out)
    return _top_two_decomposition(kernel, mu_in, mu_out, sin, sout)


def _top_two_decomposition(kernel, mu_in, mu_out, sin, sout) -> SpectralDecomposition:
    flow = mu_out.weights @ kernel.matrix
    if sp.issparse(kernel.matrix):
        flow = np.asarray(flow).ravel()
    if float(np.max(np.abs(flow - mu_in.weights))) > 1e-10:
        raise TooLarge(
            "large-space singular values need mu_out K = mu_in for the analytic top triple"
        )
    mat = kernel.matrix
    v0 = sin  # unit top right singular vector of the avatar
    rng = np.random.default_rng(0x5EED)
    w = rng.standard_normal(kernel.size)
    w -= (v0 @ w) * v0
    w /= np.linalg.norm(w)
    sigma2 = 0.0
    for _ in range(100_000):
        # avatar B w, then B^T (B w), with the top triple projected out
        bw = sout * _matvec(mat, w / sin)
        btbw = _rmatvec(mat, bw * sout) / sin
        btbw -= (v0 @ btbw) * v0
        norm = float(np.linalg.norm(btbw))
        if norm == 0.0:
            w = btbw
            sigma2 = 0.0
            break
        new = btbw / norm
        if float(np.max(np.abs(new - w))) < 1e-13 or float(np.max(np.abs(new + w))) < 1e-13:
            w = new
            sigma2 = norm
            break
        w = new
        sigma2 = norm
    sigma1 = math.sqrt(max(sigma2, 0.0))
    bw = sout * _matvec(mat, w / sin)
    u1 = bw / sigma1 if sigma1 > 0 else np.zeros_like(bw)
    values = np.array([1.0, sigma1])
    left = np.column_stack([sout / sout, u1 / sout])  # first column is constant 1
    right = np.column_stack([sin / sin, w / sin])
    return SpectralDecomposition(values, left, right, mu_in, mu_out)


def _matvec(mat, x):
    y = mat @ x
    return np.asarray(y).ravel() if sp.issparse(mat) else y


def _rmatvec(mat, x):
    y = x @ mat
    return np.asarray(y).ravel() if sp.issparse(mat) else y


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues of a kernel with a diagonalizability verdict.

    `flag` is "diagonalizable", "defective" or "undetermined"; the verdict
    comes from the condition number of the eigenvector matrix with the
    undetermined band spanning a factor of ten around the 1e8 cutoff.
    """

    eigenvalues: np.ndarray
    flag: Literal["diagonalizable", "defective", "undetermined"]
    condition_number: float


def eigenvalues(kernel: MarkovKernel) -> EigenDecomposition:
    """Full eigenvalue list of a dense kernel, sorted by decreasing modulus."""
    if kernel.size > DENSE_LIMIT:
        raise TooLarge("eigenvalues are computed densely; too many states")
    vals, vecs = np.linalg.eig(kernel.dense())
    order = np.argsort(-np.abs(vals), kind="stable")
    vals = vals[order]
    if float(np.max(np.abs(vals))) > 1.0 + 1e-10:
        raise ValueError("stochastic matrix produced an eigenvalue above modulus 1")
    if float(np.min(np.abs(vals - 1.0))) > 1e-8:
        raise ValueError("stochastic matrix lost the eigenvalue 1")
    cond = float(np.linalg.cond(vecs))
    if cond < 1e7:
        flag = "diagonalizable"
    elif cond <= 1e9:
        flag = "undetermined"
    else:
        flag = "defective"
    return EigenDecomposition(vals, flag, cond)


def adjoint_kernel(kernel: MarkovKernel, mu_in: Distribution, mu_out: Distribution) -> np.ndarray:
    """Matrix of the adjoint K*(y, x) = mu_out(x) K(x, y) / mu_in(y)."""
    win = _check_positive(mu_in, "mu_in")
    wout = _check_positive(mu_out, "mu_out")
    m = kernel.dense()
    return (m * wout[:, None]).T / win[:, None]


@dataclass(frozen=True)
class DirichletForm:
    """A self-adjoint stochastic generator M with its base measure.

    The associated energy is E(f, f) = <(I - M) f, f>_mu.
    """

    kernel: MarkovKernel
    measure: Distribution


def composite_form(kernel: MarkovKernel, mu: Distribution) -> DirichletForm:
    """Dirichlet form of K*K on l2(mu); needs mu invariant for K."""
    adj = adjoint_kernel(kernel, mu, mu)
    m = adj @ kernel.dense()
    return DirichletForm(make_kernel(kernel.space, m), mu)


def dirichlet_energy(form: DirichletForm, f: np.ndarray) -> float:
    """Energy <(I - M) f, f>_mu of a function against a self-adjoint form."""
    f = np.asarray(f, dtype=np.float64)
    mu = form.measure.weights
    m = form.kernel.dense()
    balance = mu[:, None] * m
    gap = float(np.max(np.abs(balance - balance.T)))
    if gap > 1e-10:
        raise NotSelfAdjoint(f"kernel is not mu-self-adjoint (gap {gap:.3e})")
    return float(mu @ ((f - m @ f) * f))


def check_nash_inequality(
    q: MarkovKernel,
    t_horizon: float,
    c1: float,
    d_exponent: float,
    trial_count: int = 1000,
    seed: int = 0,
) -> float:
    """Largest observed ratio of the two sides of a Nash inequality.

    The inequality under test, with norms in l2 of the uniform measure, is

        ||f||_2^(2 + 1/D) <= C1 T (E_{Q*Q}(f, f) + ||f||_2^2 / T) ||f||_1^(1/D)

    over random heavy-tailed functions, all indicators and all eigenvectors
    of Q*Q.  A return value <= 1 means no violation was found.
    """
    m = q.dense()
    if float(np.max(np.abs(m - m.T))) > 1e-12:
        raise NotSymmetric("Nash check expects a symmetric base kernel")
    n = q.size
    u = np.full(n, 1.0 / n)
    m2 = m @ m  # Q*Q = Q^2 for symmetric Q on the uniform measure
    _, vecs = np.linalg.eigh(m2)
    rng = np.random.default_rng(seed)
    trials = [rng.standard_cauchy(n) for _ in range(trial_count // 2)]
    trials += [rng.standard_normal(n) for _ in range(trial_count - trial_count // 2)]
    trials += [e for e in np.eye(n)]
    trials += [vecs[:, j] for j in range(n)]
    worst = 0.0
    for f in trials:
        norm2sq = float(u @ f**2)
        if norm2sq == 0.0:
            continue
        norm1 = float(u @ np.abs(f))
        energy = float(u @ ((f - m2 @ f) * f))
        lhs = norm2sq ** (1.0 + 0.5 / d_exponent)
        rhs = c1 * t_horizon * (energy + norm2sq / t_horizon) * norm1 ** (1.0 / d_exponent)
        if rhs > 0:
            worst = max(worst, lhs / rhs)
    return worst


def second_singular_value_bound_gap(
    shifted: MarkovKernel,
    pi: Distribution,
    q: MarkovKernel,
    eps: float,
    c: float,
) -> tuple[float, float]:
    """Computed second singular value of the shifted kernel and its bound.

    The bound 1 - (1 - eps)^2 (1 - sigma1(Q)) / c^2 requires the stability
    hypothesis max pi <= c min pi, which is checked first.
    """
    w = _check_positive(pi, "pi")
    if float(np.max(w)) > c * float(np.min(w)) + 1e-10:
        raise StabilityNotCertified(
            f"max/min ratio {float(np.max(w) / np.min(w)):.6f} exceeds c={c}"
        )
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must lie in [0, 1)")
    computed = float(weighted_singular_values(shifted, pi, pi).singular_values[1])
    uniform = Distribution.uniform(q.space)
    sigma1 = float(weighted_singular_values(q, uniform, uniform).singular_values[1])
    bound = 1.0 - (1.0 - eps) ** 2 * (1.0 - sigma1) / c**2
    return computed, bound


def spectral_report_document(
    kernel: MarkovKernel,
    decomposition: SpectralDecomposition,
    eigen: Optional[EigenDecomposition],
    stationary: Optional[Distribution],
) -> dict:
    """Plain-JSON summary used by the command line reports."""
    doc = {
        "sigma": [float(s) for s in decomposition.singular_values],
        "eigenvalues": (
            [[float(v.real), float(v.imag)] for v in eigen.eigenvalues] if eigen else None
        ),
        "stationary": [float(x) for x in stationary.weights] if stationary else None,
        "flags": {
            "irreducible": is_irreducible(kernel),
            "diagonalizable": eigen.flag if eigen else None,
        },
    }
    if doc["flags"]["irreducible"]:
        doc["flags"]["period"] = period(kernel)
    return doc

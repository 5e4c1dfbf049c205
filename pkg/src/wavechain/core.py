"""State spaces, distributions, bijections, kernels and the wave calculus.

A time-inhomogeneous chain is driven here by a single base kernel K and a
bijection g of the state space: step i uses the transported kernel

    K_i(x, y) = K(g^{i-1} x, g^{i-1} y),

and the whole family collapses onto the homogeneous shifted kernel

    shifted(x, y) = K(x, g^{-1} y),

through the identity  K_{0,n}(x, y) = shifted^n(x, g^n y).  Everything in
this module is exact index bookkeeping on top of that identity; spectral and
merging analysis live in their own modules.

All value types are frozen dataclasses wrapping read-only numpy arrays; no
function mutates its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from .errors import (
    NegativeEntry,
    NotBijective,
    RowSumViolation,
    SpaceMismatch,
    TooLarge,
    WaveMeasureMissing,
    WindowInverted,
    ZeroWeight,
)

DENSE_LIMIT = 4096
ROW_SUM_TOL = 1e-12
Matrix = Union[np.ndarray, sp.csr_matrix]

_MISSING = object()


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateSpace:
    """A finite set {0, ..., size-1} with optional display labels."""

    size: int
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("state space must contain at least one state")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError("label count must equal size")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be distinct")

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)


@dataclass(frozen=True)
class Distribution:
    """A probability vector over a state space."""

    space: StateSpace
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (self.space.size,):
            raise SpaceMismatch(
                f"weight vector of length {w.shape} on a space of size {self.space.size}"
            )
        if np.any(w < 0.0):
            raise NegativeEntry(f"negative mass at state {int(np.argmin(w))}")
        total = float(w.sum())
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise RowSumViolation(0, total)
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def point_mass(cls, space: StateSpace, x: int) -> "Distribution":
        w = np.zeros(space.size)
        w[x] = 1.0
        return cls(space, w)

    @classmethod
    def uniform(cls, space: StateSpace) -> "Distribution":
        return cls(space, np.full(space.size, 1.0 / space.size))

    def entry(self, x: int) -> float:
        return float(self.weights[x])


@dataclass(frozen=True)
class Permutation:
    """A bijection of a state space, stored as forward and inverse index maps."""

    space: StateSpace
    forward: np.ndarray
    inverse: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        fwd = np.asarray(self.forward, dtype=np.int64)
        n = self.space.size
        if fwd.shape != (n,):
            raise SpaceMismatch("forward map length differs from space size")
        if np.any(fwd < 0) or np.any(fwd >= n) or len(np.unique(fwd)) != n:
            raise NotBijective("forward map is not a bijection of 0..size-1")
        inv = np.empty(n, dtype=np.int64)
        inv[fwd] = np.arange(n, dtype=np.int64)
        object.__setattr__(self, "forward", _frozen(fwd))
        object.__setattr__(self, "inverse", _frozen(inv))

    def apply(self, x):
        return self.forward[x]

    def apply_inverse(self, x):
        return self.inverse[x]

    def is_identity(self) -> bool:
        return bool(np.all(self.forward == np.arange(self.space.size)))

    def power_map(self, k: int) -> np.ndarray:
        """Forward index array of the k-th power (k may be negative)."""
        n = self.space.size
        base = self.forward if k >= 0 else self.inverse
        k = abs(k)
        result = np.arange(n, dtype=np.int64)
        while k:
            if k & 1:
                result = base[result]
            base = base[base]
            k >>= 1
        return result

    def power(self, k: int) -> "Permutation":
        return Permutation(self.space, self.power_map(k))


def make_permutation(space: StateSpace, forward) -> Permutation:
    """Validate a forward map as a bijection of the space."""
    return Permutation(space, np.asarray(forward))


def permutation_order(g: Permutation) -> int:
    """Least k >= 1 with g^k = identity: the lcm of the cycle lengths."""
    fwd = g.forward
    n = g.space.size
    seen = np.zeros(n, dtype=bool)
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = fwd[x]
            length += 1
        order = math.lcm(order, length)
    return order


@dataclass(frozen=True)
class MarkovKernel:
    """A row-stochastic matrix over a state space.

    Storage is dense up to DENSE_LIMIT states and row-compressed sparse
    beyond; operations accept either form.
    """

    space: StateSpace
    matrix: Matrix

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        if self.is_sparse:
            if self.size > DENSE_LIMIT:
                raise TooLarge(
                    f"refusing to densify a {self.size}-state sparse kernel"
                )
            return self.matrix.toarray()
        return self.matrix

    def entry(self, x: int, y: int) -> float:
        return float(self.matrix[x, y])

    def row(self, x: int) -> np.ndarray:
        if self.is_sparse:
            return self.matrix.getrow(x).toarray().ravel()
        return np.asarray(self.matrix[x])

    def support_graph(self) -> sp.csr_matrix:
        """Boolean adjacency of the positive entries, as CSR."""
        if self.is_sparse:
            g = self.matrix.copy()
            g.data = (g.data > 0).astype(np.int8)
            g.eliminate_zeros()
            return g.tocsr()
        return sp.csr_matrix((self.matrix > 0).astype(np.int8))


def _validate_matrix(space: StateSpace, m: Matrix) -> Matrix:
    n = space.size
    if m.shape != (n, n):
        raise SpaceMismatch(f"matrix shape {m.shape} on a space of size {n}")
    if sp.issparse(m):
        m = m.tocsr()
        if m.nnz and float(m.data.min()) < 0.0:
            raise NegativeEntry("negative entry in sparse kernel")
        sums = np.asarray(m.sum(axis=1)).ravel()
    else:
        m = np.asarray(m, dtype=np.float64)
        if np.any(m < 0.0):
            r, _ = np.unravel_index(int(np.argmin(m)), m.shape)
            raise NegativeEntry(f"negative entry in row {int(r)}")
        sums = m.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
    if bad.size:
        raise RowSumViolation(int(bad[0]), float(sums[bad[0]]))
    return m


def make_kernel(space: StateSpace, entries, dense_limit: int = DENSE_LIMIT) -> MarkovKernel:
    """Validate entries as a row-stochastic kernel over the space.

    Dense input is kept dense up to `dense_limit` states and converted to
    CSR above it; sparse input stays sparse.
    """
    if sp.issparse(entries):
        m = _validate_matrix(space, entries)
    else:
        m = _validate_matrix(space, np.asarray(entries, dtype=np.float64))
        if space.size > dense_limit:
            m = sp.csr_matrix(m)
    if isinstance(m, np.ndarray):
        m = _frozen(m)
    return MarkovKernel(space, m)


def _wrap(space: StateSpace, m: Matrix) -> MarkovKernel:
    # internal constructor for matrices obtained from a validated kernel by
    # permuting rows/columns, which preserves row-stochasticity exactly
    if isinstance(m, np.ndarray):
        m = _frozen(m)
    return MarkovKernel(space, m)


def _same_space(a: StateSpace, b: StateSpace) -> None:
    if a != b:
        raise SpaceMismatch("objects live on different state spaces")


def transport_kernel(base: MarkovKernel, g: Permutation, i: int) -> MarkovKernel:
    """Step-i kernel K_i(x, y) = base(g^{i-1} x, g^{i-1} y); needs i >= 1."""
    _same_space(base.space, g.space)
    if i < 1:
        raise ValueError("transport index starts at 1")
    gp = g.power_map(i - 1)
    return _transport_by_map(base, gp)


def _transport_by_map(base: MarkovKernel, gp: np.ndarray) -> MarkovKernel:
    if base.is_sparse:
        m = base.matrix[gp][:, gp]
    else:
        m = base.matrix[np.ix_(gp, gp)]
    return _wrap(base.space, m)


def shift_kernel(base: MarkovKernel, g: Permutation) -> MarkovKernel:
    """Homogeneous reduction shifted(x, y) = base(x, g^{-1} y)."""
    _same_space(base.space, g.space)
    if base.is_sparse:
        m = base.matrix[:, g.inverse]
    else:
        m = base.matrix[:, g.inverse]
    return _wrap(base.space, m)


@dataclass(frozen=True)
class WaveSystem:
    """A base kernel, a driving bijection, and derived wave data.

    `order` is the least k with g^k = id, `shifted` the homogeneous
    reduction.  The invariant measure of `shifted` is computed on first use
    and cached; the cache write is idempotent, so concurrent readers at
    worst duplicate the solve.
    """

    base: MarkovKernel
    map: Permutation
    order: int
    shifted: MarkovKernel

    @property
    def space(self) -> StateSpace:
        return self.base.space

    def wave_measure_or_none(self) -> Optional[Distribution]:
        cached = self.__dict__.get("_wave_measure", _MISSING)
        if cached is _MISSING:
            from .spectral import is_irreducible, stationary_distribution

            if is_irreducible(self.shifted):
                cached = stationary_distribution(self.shifted)
            else:
                cached = None
            object.__setattr__(self, "_wave_measure", cached)
        return cached

    @property
    def wave_measure(self) -> Distribution:
        pi = self.wave_measure_or_none()
        if pi is None:
            raise WaveMeasureMissing(
                "shifted kernel is reducible; no unique invariant measure"
            )
        return pi


def make_wave_system(base: MarkovKernel, g: Permutation) -> WaveSystem:
    _same_space(base.space, g.space)
    return WaveSystem(
        base=base,
        map=g,
        order=permutation_order(g),
        shifted=shift_kernel(base, g),
    )


def kernel_at(system: WaveSystem, i: int) -> MarkovKernel:
    """The kernel used for step i of the chain."""
    return transport_kernel(system.base, system.map, i)


def compose_window(system: WaveSystem, n: int, m: int) -> MarkovKernel:
    """The window product K_{n,m} = K_{n+1} K_{n+2} ... K_m.

    K_{n,n} is the identity.  Refuses spaces above DENSE_LIMIT, where the
    dense product would not fit; use `evolve` to push distributions instead.
    """
    if n > m:
        raise WindowInverted(f"window ({n}, {m}) has n > m")
    size = system.space.size
    if size > DENSE_LIMIT:
        raise TooLarge("window products are dense; use evolve on large spaces")
    out = np.eye(size)
    if n == m:
        return _wrap(system.space, out)
    gp = system.map.power_map(n)  # g^{i-1} for i = n+1
    base = system.base.dense()
    fwd = system.map.forward
    for _ in range(n + 1, m + 1):
        out = out @ base[np.ix_(gp, gp)]
        gp = fwd[gp]
    return _wrap(system.space, out)


def evolve(mu0: Distribution, system: WaveSystem, n: int) -> Distribution:
    """Distribution after n steps from mu0, i.e. mu0 K_{0,n}.

    Works one step at a time through the transport identity
    (mu K_i)(y) = (w K)(g^{i-1} y) with w(u) = mu(g^{-(i-1)} u), so the
    window product is never materialized.
    """
    _same_space(mu0.space, system.space)
    if n < 0:
        raise ValueError("step count must be nonnegative")
    mu = np.array(mu0.weights)
    gp = np.arange(system.space.size, dtype=np.int64)  # g^{i-1} for i = 1
    fwd = system.map.forward
    mat = system.base.matrix
    for _ in range(n):
        w = np.empty_like(mu)
        w[gp] = mu
        z = w @ mat
        if sp.issparse(mat):
            z = np.asarray(z).ravel()
        mu = z[gp]
        gp = fwd[gp]
    return Distribution(system.space, _renormalize(mu))


def _renormalize(w: np.ndarray) -> np.ndarray:
    # guard against accumulated rounding of order machine epsilon per step
    w = np.where(w < 0.0, 0.0, w)
    return w / w.sum()


def wave_measures(system: WaveSystem, i: int) -> Distribution:
    """The i-th wave measure mu_i(x) = pi(g^i x), pi invariant for `shifted`.

    With mu_0 = pi these satisfy mu_{i-1} K_i = mu_i for every i >= 1.
    """
    pi = system.wave_measure_or_none()
    if pi is None:
        raise WaveMeasureMissing(
            "shifted kernel is reducible; wave measures are not defined"
        )
    gi = system.map.power_map(i % system.order if i >= 0 else i)
    return Distribution(system.space, pi.weights[gi])


@dataclass(frozen=True)
class WaveIdentityReport:
    """Worst deviation between window products and shifted-kernel powers."""

    max_discrepancy: float
    n: int
    x: int
    y: int


def verify_wave_identity(system: WaveSystem, n_max: int) -> WaveIdentityReport:
    """Check K_{0,n}(x, y) = shifted^n(x, g^n y) for all n <= n_max.

    Both sides are built incrementally; returns the largest absolute
    discrepancy and where it occurs.
    """
    size = system.space.size
    if size > DENSE_LIMIT:
        raise TooLarge("identity check is dense; too many states")
    base = system.base.dense()
    tilde = system.shifted.dense()
    fwd = system.map.forward
    window = np.eye(size)
    power = np.eye(size)
    gp = np.arange(size, dtype=np.int64)  # g^{i-1}
    gn = np.arange(size, dtype=np.int64)  # g^n
    worst = (0.0, 0, 0, 0)
    for n in range(1, n_max + 1):
        window = window @ base[np.ix_(gp, gp)]
        gp = fwd[gp]
        power = power @ tilde
        gn = fwd[gn]
        diff = np.abs(window - power[:, gn])
        k = int(np.argmax(diff))
        x, y = np.unravel_index(k, diff.shape)
        if diff[x, y] > worst[0]:
            worst = (float(diff[x, y]), n, int(x), int(y))
    return WaveIdentityReport(*worst)

"""Model zoo: every concrete kernel and wave system used by the test suites.

Circle kernels are assembled in exact rational arithmetic and converted to
floats at the very end, so detailed balance and row sums hold to the last
bit.  Symmetric-group walks use the shared lexicographic enumeration from
`groups`; all of them stay below 7! states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from .core import (
    DENSE_LIMIT,
    Distribution,
    MarkovKernel,
    Permutation,
    StateSpace,
    WaveSystem,
    make_kernel,
    make_permutation,
    make_wave_system,
)
from .errors import (
    ConditionViolated,
    DegreeInfeasible,
    DeltaOutOfRange,
    EvenN,
    NotSymmetric,
    TooLarge,
)
from .groups import (
    Perm,
    conjugate,
    identity_perm,
    multiply,
    one_line_label,
    sn_elements,
    sn_index,
    transposition,
)
from .merging import NashParams

_DEFAULT_GROUP_CAP = 5040


# ---------------------------------------------------------------------------
# circle kernels


def _odd_size(n) -> int:
    n = int(n)
    if n < 3:
        raise ValueError("circle needs at least 3 points")
    if n % 2 == 0:
        raise EvenN(f"point count {n} is even; the unperturbed walk would be periodic")
    return n


def _circle_entries(n: int, eps: Fraction) -> list[list[Fraction]]:
    half = Fraction(1, 2)
    heavy = (1 + eps) / (2 + eps)
    light = 1 / (2 + eps)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for x in range(n):
        rows[x][(x + 1) % n] = half
        rows[x][(x - 1) % n] = half
    rows[0][1] = heavy
    rows[0][n - 1] = light
    rows[1][0] = heavy
    rows[1][2 % n] = light
    return rows


def _to_float_kernel(rows: list[list[Fraction]], labels=None) -> MarkovKernel:
    n = len(rows)
    space = StateSpace(n, labels)
    mat = np.array([[float(v) for v in row] for row in rows])
    return make_kernel(space, mat)


def circle_kernel(n_points, eps: float) -> tuple[MarkovKernel, Distribution]:
    """Nearest-neighbour circle walk with one heavy edge between 0 and 1.

    The edge (0, 1) carries weight 1 + eps, every other edge weight 1; the
    returned reversible measure gives the two heavy endpoints mass
    (1 + eps/2)/(n + eps) and everyone else 1/(n + eps).
    """
    n = _odd_size(n_points)
    if not eps > 0:
        raise ValueError("eps must be positive")
    e = Fraction(eps)
    kernel = _to_float_kernel(_circle_entries(n, e))
    heavy = (1 + e / 2) / (n + e)
    light = 1 / (n + e)
    weights = np.full(n, float(light))
    weights[0] = weights[1] = float(heavy)
    pi = Distribution(kernel.space, weights / weights.sum())
    return kernel, pi


def lazy_circle_kernel(n_points, eps: float) -> MarkovKernel:
    """Half-lazy version of the heavy-edge circle walk: P = I/2 + K/2."""
    n = _odd_size(n_points)
    if not eps > 0:
        raise ValueError("eps must be positive")
    rows = _circle_entries(n, Fraction(eps))
    half = Fraction(1, 2)
    for x in range(n):
        rows[x] = [half * v for v in rows[x]]
        rows[x][x] += half
    return _to_float_kernel(rows)


def circle_shift(n_points: int, s: int) -> Permutation:
    """The rotation x -> x + s mod n_points."""
    n = int(n_points)
    if n < 1:
        raise ValueError("empty circle")
    space = StateSpace(n)
    fwd = (np.arange(n, dtype=np.int64) + s) % n
    return make_permutation(space, fwd)


def tilde_pi_closed_form_shift_minus1(n_points, eps: float) -> Distribution:
    """Invariant measure of the shifted kernel for the rotation x -> x - 1.

    Closed form: with d = eps^2 + 2 n eps + 2 n, mass (1+eps)(2+eps)/d at
    0, (2+eps)/d at 1 and 2(1+eps)/d elsewhere.
    """
    n = _odd_size(n_points)
    e = Fraction(eps)
    d = e * e + 2 * n * e + 2 * n
    weights = np.full(n, float(2 * (1 + e) / d))
    weights[0] = float((e + 1) * (e + 2) / d)
    weights[1] = float((e + 2) / d)
    return Distribution(StateSpace(n), weights / weights.sum())


def circle_perturbation_spec(n_points, eps: float) -> "PerturbationSpec":
    """The heavy-edge circle kernel written as unperturbed walk plus edits.

    The support is {0, 1}; mass eps/(4 + 2 eps) moves from the light
    neighbour to the heavy one in each of the two rows, which makes the
    minimal strength eps/(2 + eps).
    """
    n = _odd_size(n_points)
    e = Fraction(eps)
    space = StateSpace(n)
    base = np.zeros((n, n))
    for x in range(n):
        base[x][(x + 1) % n] = 0.5
        base[x][(x - 1) % n] = 0.5
    q = make_kernel(space, base)
    shift = float(e / (4 + 2 * e))
    delta = np.zeros((n, n))
    delta[0, 1] = shift
    delta[0, n - 1] = -shift
    delta[1, 0] = shift
    delta[1, 2 % n] = -shift
    return PerturbationSpec(
        base=q, support=(0, 1), delta_matrix=delta, epsilon=float(e / (2 + e))
    )


def circle_nash_params(n_points, eps: float) -> NashParams:
    """Nash-bound constants for the heavy-edge circle at the given strength.

    T = 4(n+1)^2 is the square-diameter scale, D = 1/4 the dimension
    exponent, C1 matches the walk's Nash inequality, c1 = T(1 - cos(pi/n))
    realizes the singular-value hypothesis with equality, c = 1 + eps is
    the stability constant, and the perturbation strength is eps/(2+eps).
    """
    n = _odd_size(n_points)
    t = 4.0 * (n + 1) ** 2
    return NashParams(
        C1=(2.0**7) * n * n / t,
        D=0.25,
        c=1.0 + eps,
        c1=t * (1.0 - math.cos(math.pi / n)),
        T=t,
        eps=eps / (2.0 + eps),
    )


# ---------------------------------------------------------------------------
# perturbation framework


@dataclass(frozen=True)
class PerturbationSpec:
    """A kernel written as symmetric base Q plus a signed edit matrix.

    The edits must keep rows balanced (each row of delta_matrix sums to
    zero), stay above -epsilon * Q entrywise, and vanish outside the
    support rows.  `delta` is only set for single-point edits validated
    against the stricter one-row shape.
    """

    base: MarkovKernel
    support: tuple[int, ...]
    delta_matrix: np.ndarray
    epsilon: float
    delta: Optional[float] = None

    def __post_init__(self):
        q = self.base.dense()
        d = np.asarray(self.delta_matrix, dtype=float)
        if d.shape != q.shape:
            raise ConditionViolated("a", "edit matrix shape differs from the base")
        if float(np.max(np.abs(q - q.T))) > 1e-12:
            raise NotSymmetric("perturbation base must be symmetric")
        if not 0.0 <= self.epsilon < 1.0:
            raise ConditionViolated("b", f"strength {self.epsilon} outside [0, 1)")
        rowsums = np.abs(d.sum(axis=1))
        if float(rowsums.max(initial=0.0)) > 1e-12:
            raise ConditionViolated("a", "edit rows must sum to zero")
        if np.any(d < -self.epsilon * q - 1e-12):
            raise ConditionViolated("b", "edit removes more than epsilon of the base")
        outside = np.setdiff1d(np.arange(q.shape[0]), np.asarray(self.support, dtype=int))
        if outside.size and float(np.max(np.abs(d[outside]))) > 0.0:
            raise ConditionViolated("c", "edits outside the declared support")
        object.__setattr__(self, "delta_matrix", d)

    def kernel(self) -> MarkovKernel:
        return make_kernel(self.base.space, self.base.dense() + self.delta_matrix)


def single_point_perturbation(
    q: MarkovKernel,
    o: int,
    delta_row: np.ndarray,
    strict_shape: bool = False,
) -> PerturbationSpec:
    """Validated one-row perturbation of a symmetric kernel.

    The returned spec carries the minimal strength epsilon.  With
    strict_shape the row must add holding mass at (o, o) and remove mass
    everywhere the base row is positive, within the floor
    -delta q(o, y)/(1 - q(o, o)); epsilon is then delta/(1 - q(o, o)).
    """
    m = q.dense()
    if float(np.max(np.abs(m - m.T))) > 1e-12:
        raise NotSymmetric("single-point perturbation needs a symmetric base")
    o = int(o)
    row = np.asarray(delta_row, dtype=float)
    if row.shape != (q.size,):
        raise ConditionViolated("a", "edit row has the wrong length")
    if abs(float(row.sum())) > 1e-12:
        raise ConditionViolated("a", "edit row must sum to zero")
    base_row = m[o]
    negative = row < 0.0
    if np.any(negative & (base_row <= 0.0)):
        raise ConditionViolated("b", "edit removes mass where the base row has none")
    eps = 0.0
    if negative.any():
        eps = float(np.max(-row[negative] / base_row[negative]))
    if eps >= 1.0:
        raise ConditionViolated("b", f"minimal strength {eps} reaches 1")
    delta_val: Optional[float] = None
    if strict_shape:
        hold = float(row[o])
        if not hold > 0.0:
            raise ConditionViolated("vertex-prime", "no holding surplus at the point")
        q_oo = float(base_row[o])
        if not hold < 1.0 - q_oo:
            raise ConditionViolated("vertex-prime", "surplus swallows the whole row")
        others = np.delete(np.arange(q.size), o)
        r = row[others]
        b = base_row[others]
        if np.any((b > 0.0) & (r >= 0.0)):
            raise ConditionViolated(
                "vertex-prime", "row must lose mass wherever the base is positive"
            )
        if np.any((b <= 0.0) & (np.abs(r) > 0.0)):
            raise ConditionViolated(
                "vertex-prime", "row edits a move the base cannot make"
            )
        floor = -hold * b / (1.0 - q_oo)
        if np.any(r < floor - 1e-12):
            raise ConditionViolated("vertex-prime", "removal dips below the floor")
        delta_val = hold
        eps = hold / (1.0 - q_oo)
    dmat = np.zeros_like(m)
    dmat[o] = row
    return PerturbationSpec(
        base=q, support=(o,), delta_matrix=dmat, epsilon=eps, delta=delta_val
    )


# ---------------------------------------------------------------------------
# symmetric-group walks


@dataclass(frozen=True)
class GroupWalkSpec:
    """Right-multiplication random walk on the symmetric group.

    generator_weights maps one-line permutation tuples to step
    probabilities; the state enumeration is the shared lexicographic one.
    """

    n: int
    generator_weights: dict
    max_states: int = _DEFAULT_GROUP_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("deck size must be positive")
        if math.factorial(self.n) > self.max_states:
            raise TooLarge(f"{self.n}! exceeds the configured cap {self.max_states}")
        total = 0.0
        for g, w in self.generator_weights.items():
            if len(g) != self.n or sorted(g) != list(range(self.n)):
                raise ValueError(f"{g!r} is not a permutation of 0..{self.n - 1}")
            if w < 0:
                raise ValueError("negative generator weight")
            total += w
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"generator weights sum to {total!r}, not 1")


def sn_space(n: int) -> StateSpace:
    elements = sn_elements(n)
    return StateSpace(len(elements), tuple(one_line_label(p) for p in elements))


def group_walk_kernel(spec: GroupWalkSpec) -> MarkovKernel:
    """Kernel K(x, y) = sum of weights w(s) over generators with y = x s."""
    elements = sn_elements(spec.n)
    index = sn_index(spec.n)
    space = sn_space(spec.n)
    size = len(elements)
    pairs = sorted(spec.generator_weights.items())
    if size <= DENSE_LIMIT:
        mat = np.zeros((size, size))
        for i, x in enumerate(elements):
            for s, w in pairs:
                mat[i, index[multiply(x, s)]] += w
        return make_kernel(space, mat)
    rows = []
    cols = []
    vals = []
    for i, x in enumerate(elements):
        for s, w in pairs:
            rows.append(i)
            cols.append(index[multiply(x, s)])
            vals.append(w)
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
    mat.sum_duplicates()
    return MarkovKernel(space, mat)


def conjugation_map(n: int, a: Perm) -> Permutation:
    """The bijection x -> a^{-1} o x o a of the lexicographic enumeration."""
    elements = sn_elements(n)
    index = sn_index(n)
    space = sn_space(n)
    fwd = np.fromiter(
        (index[conjugate(x, a)] for x in elements), dtype=np.int64, count=len(elements)
    )
    return make_permutation(space, fwd)


def _rotation_perm(n: int) -> Perm:
    # the full cycle sending position i to i + 1 mod n
    return tuple((i + 1) % n for i in range(n))


def _check_group_size(n: int, lo: int = 3, hi: int = 7) -> int:
    n = int(n)
    if n < lo:
        raise ValueError(f"deck size must be at least {lo}")
    if n > hi:
        raise TooLarge(f"deck size {n} puts {math.factorial(n)} states out of range")
    return n


def deck_reversal_system(n: int) -> WaveSystem:
    """Walk stepping by top-to-bottom or top-to-second-to-last, with a
    deck-reversal relabeling as the driving bijection."""
    n = _check_group_size(n)
    to_bottom = tuple([n - 1] + [i - 1 for i in range(1, n)])
    to_second_last = tuple([n - 2] + [i - 1 for i in range(1, n - 1)] + [n - 1])
    spec = GroupWalkSpec(n, {to_bottom: 0.5, to_second_last: 0.5})
    kernel = group_walk_kernel(spec)
    reversal = tuple(n - 1 - i for i in range(n))
    return make_wave_system(kernel, conjugation_map(n, reversal))


def cyclic_to_random_system(n: int) -> WaveSystem:
    """Transpose-top-with-random walk conjugated along the full rotation,
    so step i transposes position i with a uniform position."""
    n = _check_group_size(n)
    weights = {identity_perm(n): 1.0 / n}
    for j in range(1, n):
        weights[transposition(n, 0, j)] = 1.0 / n
    kernel = group_walk_kernel(GroupWalkSpec(n, weights))
    return make_wave_system(kernel, conjugation_map(n, _rotation_perm(n)))


def _normalize_group_element(n: int, rho: Union[Perm, int]) -> Perm:
    if isinstance(rho, (int, np.integer)):
        return sn_elements(n)[int(rho)]
    rho = tuple(int(v) for v in rho)
    if sorted(rho) != list(range(n)):
        raise ValueError(f"{rho!r} is not a permutation of 0..{n - 1}")
    return rho


def sticky_permutation_system(n: int, rho, delta: float) -> WaveSystem:
    """Lazy transpose-top walk with extra holding probability at rho.

    The base kernel holds with probability (n+1)/(2n) and transposes the
    top with a random other position with probability 1/(2n) each; the
    sticky row gains delta of holding and loses delta/(n-1) along each
    transposition move.  The driving bijection matches the
    cyclic-to-random one, so the sticky spot moves backwards along the
    rotation as the steps advance.
    """
    n = _check_group_size(n)
    if not 0.0 < delta < (n - 1) / (2.0 * n):
        raise DeltaOutOfRange(
            f"delta {delta} outside (0, {(n - 1) / (2.0 * n)}) for n={n}"
        )
    rho = _normalize_group_element(n, rho)
    hold = (n + 1) / (2.0 * n)
    move = 1.0 / (2.0 * n)
    trans = [transposition(n, 0, j) for j in range(1, n)]
    elements = sn_elements(n)
    index = sn_index(n)
    space = sn_space(n)
    size = len(elements)
    r = index[rho]
    rows, cols, vals = [], [], []
    for i, x in enumerate(elements):
        extra = delta if i == r else 0.0
        rows.append(i)
        cols.append(i)
        vals.append(hold + extra)
        for s in trans:
            rows.append(i)
            cols.append(index[multiply(x, s)])
            vals.append(move - extra / (n - 1))
    csr = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
    sticky = MarkovKernel(space, csr.toarray() if size <= DENSE_LIMIT else csr)
    return make_wave_system(sticky, conjugation_map(n, _rotation_perm(n)))


# ---------------------------------------------------------------------------
# other wave systems


def four_point_example() -> WaveSystem:
    """Path-like four-state kernel whose shifted version absorbs at 4."""
    space = StateSpace(4, ("1", "2", "3", "4"))
    mat = np.array(
        [
            [0.5, 0.5, 0.0, 0.0],
            [0.5, 0.0, 0.5, 0.0],
            [0.0, 0.5, 0.0, 0.5],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )
    kernel = make_kernel(space, mat)
    swap_last_two = make_permutation(space, np.array([0, 1, 3, 2]))
    return make_wave_system(kernel, swap_last_two)


def binary_cycling_system(n_bits: int) -> WaveSystem:
    """Randomize the first bit while the bijection rotates bits left.

    States are integers whose i-th coordinate is bit i (labels print
    coordinate 1 first); step kernel i then randomizes coordinate i, and
    the window of length n_bits lands exactly on the uniform measure.
    """
    n = int(n_bits)
    if n < 2:
        raise ValueError("need at least 2 bits")
    if n > 16:
        raise TooLarge(f"2^{n} states exceed the supported range")
    size = 1 << n
    labels = tuple(
        "".join(str((x >> i) & 1) for i in range(n)) for x in range(size)
    )
    space = StateSpace(size, labels)
    xs = np.arange(size, dtype=np.int64)
    lo = xs & ~1
    hi = xs | 1
    indices = np.empty(2 * size, dtype=np.int64)
    indices[0::2] = lo
    indices[1::2] = hi
    data = np.full(2 * size, 0.5)
    indptr = 2 * np.arange(size + 1, dtype=np.int64)
    csr = sp.csr_matrix((data, indices, indptr), shape=(size, size))
    kernel = MarkovKernel(space, csr.toarray() if size <= DENSE_LIMIT else csr)
    # rotating coordinates left means bit i of g(x) is bit i+1 of x
    fwd = (xs >> 1) | ((xs & 1) << (n - 1))
    return make_wave_system(kernel, make_permutation(space, fwd))


def periodic_class_example(k: int, class_size: int) -> WaveSystem:
    """Blocks C_0..C_{k-1}; the kernel spreads uniformly over the next
    block while the bijection rotates blocks one step back."""
    k = int(k)
    cs = int(class_size)
    if k < 2:
        raise ValueError("need at least two classes")
    if cs < 1:
        raise ValueError("classes must be nonempty")
    size = k * cs
    labels = tuple(f"c{j}s{i}" for j in range(k) for i in range(cs))
    space = StateSpace(size, labels)
    mat = np.zeros((size, size))
    for j in range(k):
        rows = slice(j * cs, (j + 1) * cs)
        nxt = ((j + 1) % k) * cs
        mat[rows, nxt : nxt + cs] = 1.0 / cs
    kernel = make_kernel(space, mat)
    fwd = (np.arange(size, dtype=np.int64) - cs) % size
    return make_wave_system(kernel, make_permutation(space, fwd))


def random_regular_graph_walk(n_vertices: int, degree: int, seed: int) -> MarkovKernel:
    """Walk on a random regular graph with a self-loop at every vertex.

    `degree` counts the loop, so the simple part is (degree-1)-regular,
    drawn from the pairing model with rejection of loops and multi-edges.
    degree == n_vertices forces the complete graph.
    """
    n = int(n_vertices)
    r = int(degree)
    if r < 3:
        raise DegreeInfeasible("degree must be at least 3")
    if r > n:
        raise DegreeInfeasible(f"degree {r} exceeds {n} vertices")
    d = r - 1  # simple-neighbour count
    if (n * d) % 2 != 0:
        raise DegreeInfeasible(f"{d}-regular graph on {n} vertices has odd degree sum")
    if n == r:
        mat = np.full((n, n), 1.0 / r)
        return make_kernel(StateSpace(n), mat)
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(10_000):
        rng.shuffle(stubs)
        a = stubs[0::2]
        b = stubs[1::2]
        if np.any(a == b):
            continue
        seen = set()
        ok = True
        for u, v in zip(a, b):
            key = (min(int(u), int(v)), max(int(u), int(v)))
            if key in seen:
                ok = False
                break
            seen.add(key)
        if ok:
            mat = np.zeros((n, n))
            for u, v in zip(a, b):
                mat[u, v] = mat[v, u] = 1.0 / r
            np.fill_diagonal(mat, 1.0 / r)
            return make_kernel(StateSpace(n), mat)
    raise DegreeInfeasible(
        f"no simple {d}-regular pairing found for n={n} after many attempts"
    )

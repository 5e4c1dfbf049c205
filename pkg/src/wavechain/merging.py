"""Merging distances, merging times, stability certificates and bounds.

Merging compares the rows of the window product K_{0,n} to each other; the
chain forgets its starting point when every pairwise distance goes to zero.
The relative-sup distance

    d(mu, nu) = max_x |mu(x) / nu(x) - 1|

is the strictest of the three metrics here and is infinite whenever nu has a
zero where mu does not; infinity is a legitimate value, reported as
math.inf, never an overflow.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Union

import numpy as np

from .core import (
    Distribution,
    MarkovKernel,
    WaveSystem,
    compose_window,
    evolve,
    kernel_at,
    wave_measures,
)
from .errors import (
    BoundViolated,
    HorizonTooShort,
    InvalidPivot,
    NotIrreducible,
    NotMerging,
    PerturbationShapeViolated,
    SpaceMismatch,
    TooLarge,
    UniformMeasure,
    ZeroWeight,
)
from .spectral import is_irreducible, period, weighted_singular_values

Metric = Literal["total_variation", "relative_sup", "chi_square"]
_METRICS = ("total_variation", "relative_sup", "chi_square")


def _paired(mu: Distribution, nu: Distribution) -> tuple[np.ndarray, np.ndarray]:
    if mu.space != nu.space:
        raise SpaceMismatch("distances need distributions on one space")
    return mu.weights, nu.weights


def tv_distance(mu: Distribution, nu: Distribution) -> float:
    a, b = _paired(mu, nu)
    return 0.5 * float(np.abs(a - b).sum())


def relative_sup_distance(mu: Distribution, nu: Distribution) -> float:
    """max_x |mu(x)/nu(x) - 1|, infinite when nu(x) = 0 < mu(x)."""
    a, b = _paired(mu, nu)
    if np.any((b == 0.0) & (a > 0.0)):
        return math.inf
    mask = b > 0.0
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(a[mask] / b[mask] - 1.0)))


def chi_square_distance(mu: Distribution, nu: Distribution) -> float:
    """sum_x (mu(x) - nu(x))^2 / nu(x), infinite when nu vanishes off mu."""
    a, b = _paired(mu, nu)
    if np.any((b == 0.0) & (a > 0.0)):
        return math.inf
    mask = b > 0.0
    return float(np.sum((a[mask] - b[mask]) ** 2 / b[mask]))


def _pairwise_measure_matrix(m: np.ndarray, metric: Metric) -> float:
    """Worst distance between ordered pairs of rows of a stochastic matrix."""
    if metric == "relative_sup":
        # max over ordered row pairs equals max over columns of colmax/colmin - 1
        top = m.max(axis=0)
        bot = m.min(axis=0)
        live = top > 0.0
        if np.any((bot == 0.0) & live):
            return math.inf
        if not live.any():
            return 0.0
        return float(np.max(top[live] / bot[live] - 1.0))
    if metric == "total_variation":
        diff = np.abs(m[:, None, :] - m[None, :, :]).sum(axis=2)
        return 0.5 * float(diff.max())
    if metric == "chi_square":
        worst = 0.0
        n = m.shape[0]
        for y in range(n):
            b = m[y]
            zero = b == 0.0
            for x in range(n):
                a = m[x]
                if np.any(zero & (a > 0.0)):
                    return math.inf
                mask = ~zero
                worst = max(worst, float(np.sum((a[mask] - b[mask]) ** 2 / b[mask])))
        return worst
    raise ValueError(f"unknown metric {metric!r}")


def pairwise_merging_measure(system: WaveSystem, n: int, metric: Metric) -> float:
    """Worst pairwise distance between rows of K_{0,n}."""
    if metric not in _METRICS:
        raise ValueError(f"metric must be one of {_METRICS}")
    window = compose_window(system, 0, n)
    return _pairwise_measure_matrix(window.dense(), metric)


@dataclass(frozen=True)
class MergingReport:
    """Distance trace and first-passage time below a threshold.

    merging_time is None when the threshold was not reached within
    max_steps; `reason` explains structural obstructions when one is known.
    """

    metric: Metric
    epsilon: float
    values: tuple[tuple[int, float], ...]
    merging_time: Optional[int]
    max_steps: int
    reason: Optional[str] = None

    @property
    def unbounded_within_horizon(self) -> bool:
        return self.merging_time is None

    def to_document(self) -> dict:
        doc = {
            "metric": self.metric,
            "epsilon": self.epsilon,
            "trace": [[n, v if math.isfinite(v) else "inf"] for n, v in self.values],
            "merging_time": self.merging_time if self.merging_time is not None else "unbounded",
        }
        if self.reason is not None:
            doc["reason"] = self.reason
        return doc

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "distance"])
        for n, v in self.values:
            writer.writerow([n, "inf" if not math.isfinite(v) else repr(v)])
        return buf.getvalue()


def merging_time(
    system: WaveSystem,
    epsilon: float,
    max_steps: int,
    metric: Metric = "relative_sup",
) -> MergingReport:
    """First n with the pairwise merging measure below epsilon.

    The trace is produced with powers of the shifted kernel: the rows of
    K_{0,n} are the rows of shifted^n up to one common column relabeling,
    which none of the three metrics can see.
    """
    if metric not in _METRICS:
        raise ValueError(f"metric must be one of {_METRICS}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    if system.space.size > 4096:
        raise TooLarge("merging traces are dense; too many states")
    tilde = system.shifted.dense()
    power = np.eye(system.space.size)
    values = []
    hit: Optional[int] = None
    for n in range(max_steps + 1):
        if n > 0:
            power = power @ tilde
        d = _pairwise_measure_matrix(power, metric)
        values.append((n, d))
        if d < epsilon:
            hit = n
            break
    reason = None
    if hit is None:
        if not is_irreducible(system.shifted):
            reason = "shifted kernel reducible; pairwise merging cannot occur"
        elif period(system.shifted) != 1:
            reason = "shifted kernel periodic; pairwise merging cannot occur"
    return MergingReport(
        metric=metric,
        epsilon=epsilon,
        values=tuple(values),
        merging_time=hit,
        max_steps=max_steps,
        reason=reason,
    )


@dataclass(frozen=True)
class StabilityCertificate:
    """A constant c with c^{-1} mu_0(x) <= mu_n(x) <= c mu_0(x) for all n, x.

    `periodic` marks certificates derived from the wave structure, which
    cover every n at once; scanned certificates only cover n <= horizon.
    The witness is a pair (state, step) where the ratio c is attained.
    """

    c: float
    mu0: Distribution
    horizon: int
    periodic: bool
    witness: tuple[int, int]


def certify_stability(
    system: WaveSystem,
    mu0: Distribution,
    horizon: Optional[int] = None,
) -> StabilityCertificate:
    """Exact stability constant for the chain started at mu0.

    When mu0 is the invariant measure of the shifted kernel, the law at
    time n is that measure composed with g^n, so the constant is the worst
    ratio along the orbits of g and certifies every n.  Any other start
    requires an explicit horizon and is certified by direct evolution.
    """
    if mu0.space != system.space:
        raise SpaceMismatch("mu0 lives on a different space")
    pi = system.wave_measure_or_none()
    if pi is not None and float(np.max(np.abs(mu0.weights - pi.weights))) <= 1e-10:
        if np.any(mu0.weights <= 0.0):
            raise ZeroWeight("stability ratios need a positive start")
        w = pi.weights
        fwd = system.map.forward
        best = (1.0, 0, 0)
        seen = np.zeros(system.space.size, dtype=bool)
        for start in range(system.space.size):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            x = int(fwd[start])
            while x != start:
                seen[x] = True
                orbit.append(x)
                x = int(fwd[x])
            values = w[orbit]
            hi = int(np.argmax(values))
            lo = int(np.argmin(values))
            ratio = float(values[hi] / values[lo])
            if ratio > best[0]:
                # walking lo -> hi along the orbit realizes the worst ratio
                steps = (hi - lo) % len(orbit)
                best = (ratio, orbit[lo], steps)
        return StabilityCertificate(
            c=best[0], mu0=mu0, horizon=system.order, periodic=True, witness=(best[1], best[2])
        )
    if horizon is None:
        raise ValueError("a horizon is required when mu0 is not the wave measure")
    if np.any(mu0.weights <= 0.0):
        raise ZeroWeight("stability ratios need a positive start")
    worst = (1.0, 0, 0)
    for n in range(1, horizon + 1):
        mu = evolve(mu0, system, n)
        ratios = mu.weights / mu0.weights
        hi = int(np.argmax(ratios))
        lo = int(np.argmin(ratios))
        for idx in (hi, lo):
            r = float(ratios[idx])
            r = max(r, 1.0 / r) if r > 0 else math.inf
            if r > worst[0]:
                worst = (r, idx, n)
    return StabilityCertificate(
        c=worst[0], mu0=mu0, horizon=horizon, periodic=False, witness=(worst[1], worst[2])
    )


def _sigma_tilde(system: WaveSystem) -> tuple[Distribution, float]:
    pi = system.wave_measure
    dec = weighted_singular_values(system.shifted, pi, pi)
    return pi, float(dec.singular_values[1])


def _require_merging(system: WaveSystem) -> None:
    if not is_irreducible(system.shifted):
        raise NotMerging("shifted kernel reducible; the wave bound does not apply")
    if period(system.shifted) != 1:
        raise NotMerging("shifted kernel periodic; the wave bound does not apply")


def wave_bound(system: WaveSystem, x: int, z: int, n: int) -> float:
    """Wave-measure bound on |K_{0,n}(x, z) / mu_n(z) - 1|.

    Equals (1/pi(x) - 1)^(1/2) (1/pi(g^n z) - 1)^(1/2) sigma1_tilde^n where
    pi is the wave measure; requires the shifted kernel irreducible and
    aperiodic.
    """
    _require_merging(system)
    pi, sigma = _sigma_tilde(system)
    w = pi.weights
    if np.any(w <= 0.0):
        raise ZeroWeight("wave bound needs a positive wave measure")
    gnz = int(system.map.power_map(n)[z])
    return float(
        math.sqrt(1.0 / w[x] - 1.0) * math.sqrt(1.0 / w[gnz] - 1.0) * sigma**n
    )


def wave_bound_grid(system: WaveSystem, n_max: int) -> np.ndarray:
    """Array b[n, x, z] of wave bounds for all 0 <= n <= n_max."""
    _require_merging(system)
    pi, sigma = _sigma_tilde(system)
    w = pi.weights
    if np.any(w <= 0.0):
        raise ZeroWeight("wave bound needs a positive wave measure")
    size = system.space.size
    if (n_max + 1) * size * size > 50_000_000:
        raise TooLarge("bound grid would not fit; query wave_bound pointwise")
    front = np.sqrt(1.0 / w - 1.0)
    out = np.empty((n_max + 1, size, size))
    gn = np.arange(size, dtype=np.int64)
    for n in range(n_max + 1):
        back = front[gn]
        out[n] = sigma**n * front[:, None] * back[None, :]
        gn = system.map.forward[gn]
    return out


def sv_product_bound(
    system: WaveSystem,
    mu0: Distribution,
    x: int,
    z: int,
    n: int,
) -> float:
    """Bound via the product of per-step second singular values.

    (1/mu_0(x) - 1)^(1/2) (1/mu_n(z) - 1)^(1/2) prod_i sigma_1(K_i), with
    K_i read as an operator from l2(mu_i) to l2(mu_{i-1}).  All the mu_i
    must be strictly positive.
    """
    if mu0.space != system.space:
        raise SpaceMismatch("mu0 lives on a different space")
    pi = system.wave_measure_or_none()
    if pi is not None and float(np.max(np.abs(mu0.weights - pi.weights))) <= 1e-12:
        mus = [wave_measures(system, i) for i in range(n + 1)]
    else:
        mus = [mu0] + [evolve(mu0, system, i) for i in range(1, n + 1)]
    product = 1.0
    for i in range(1, n + 1):
        if np.any(mus[i].weights <= 0.0) or np.any(mus[i - 1].weights <= 0.0):
            raise ZeroWeight("singular value product needs positive step measures")
        dec = weighted_singular_values(kernel_at(system, i), mus[i], mus[i - 1])
        product *= float(dec.singular_values[1])
    w0 = mus[0].weights
    wn = mus[n].weights
    if w0[x] <= 0.0 or wn[z] <= 0.0:
        raise ZeroWeight("bound endpoints need positive mass")
    return float(
        math.sqrt(1.0 / w0[x] - 1.0) * math.sqrt(1.0 / wn[z] - 1.0) * product
    )


@dataclass(frozen=True)
class NashParams:
    """Constants entering the Nash-based merging bound."""

    C1: float
    D: float
    c: float
    c1: float
    T: float
    eps: float


def nash_bound(params: NashParams, n: int) -> float:
    """Nash-based bound on the worst relative error at time n > 2T."""
    if n <= 2 * params.T:
        raise HorizonTooShort(f"bound needs n > 2T = {2 * params.T}")
    d = params.D
    pref = (
        16.0
        * (1.0 + 4.0 * d)
        * params.C1
        * params.c ** (2.0 + 3.0 / (2.0 * d))
        / (1.0 - params.eps) ** 2
    ) ** (2.0 * d)
    rate = 2.0 * params.c1 * (1.0 - params.eps) ** 2 / (params.c**2 * params.T)
    return pref * math.exp(-rate * (n - 2.0 * params.T))


_COLSUM_TOL = 1e-12


@dataclass(frozen=True)
class BoundaryAnalysis:
    """Where column sums of the shifted kernel exceed or fall short of one.

    a_plus collects the states with column sum above one, a_minus below;
    `boundary` is the set reachable in one shifted step from the
    perturbation support.  The extreme values of the invariant measure
    are always attained inside a_plus / a_minus; argmax and argmin are
    the lowest-indexed attainers within those sets (ties elsewhere in
    the state space are allowed and common under symmetry).
    """

    a_plus: tuple[int, ...]
    a_minus: tuple[int, ...]
    boundary: tuple[int, ...]
    argmax: int
    argmin: int

    def __post_init__(self):
        if not (set(self.a_plus) | set(self.a_minus)) <= set(self.boundary):
            raise BoundViolated("imbalanced columns outside the support boundary")


def _column_imbalance(m: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    colsums = m.sum(axis=0)
    a_plus = tuple(int(i) for i in np.flatnonzero(colsums > 1.0 + _COLSUM_TOL))
    a_minus = tuple(int(i) for i in np.flatnonzero(colsums < 1.0 - _COLSUM_TOL))
    return a_plus, a_minus


def boundary_analysis(
    shifted: MarkovKernel,
    pi: Distribution,
    support,
) -> BoundaryAnalysis:
    """Locate the extremes of the invariant measure on the column boundary.

    `support` is the set of rows where the underlying kernel was perturbed;
    everything reachable from it in one shifted step is the boundary, and
    the imbalanced columns never leave it.
    """
    if not is_irreducible(shifted):
        raise NotIrreducible("boundary analysis needs an irreducible shifted kernel")
    w = pi.weights
    if float(np.max(w) - np.min(w)) <= _COLSUM_TOL:
        raise UniformMeasure("invariant measure is uniform; no extremes to locate")
    m = shifted.dense()
    a_plus, a_minus = _column_imbalance(m)
    reach = np.zeros(shifted.size, dtype=bool)
    for s in sorted(int(s) for s in support):
        reach |= m[s] > 0.0
    boundary = tuple(int(i) for i in np.flatnonzero(reach))
    # the extreme values must be attained inside the imbalanced sets, but
    # other states may tie them exactly (e.g. under a symmetry of pi), so
    # the arg-picks go to the lowest-indexed attainer within each set
    top, bot = float(np.max(w)), float(np.min(w))
    tol = 1e-10 * top
    plus_hits = [i for i in a_plus if w[i] >= top - tol]
    minus_hits = [i for i in a_minus if w[i] <= bot + tol]
    if not plus_hits:
        raise BoundViolated("maximum of the invariant measure escaped a_plus")
    if not minus_hits:
        raise BoundViolated("minimum of the invariant measure escaped a_minus")
    return BoundaryAnalysis(a_plus, a_minus, boundary, plus_hits[0], minus_hits[0])


PivotChoice = Union[Callable[[int, int], int], dict]


def minmax_ratio_bound(
    shifted: MarkovKernel,
    pi: Distribution,
    support,
    pivot: Optional[PivotChoice] = None,
) -> float:
    """Ratio bound max pi <= C min pi from one-step column comparisons.

    For a surplus column x, a deficit column y and a pivot state b with
    shifted(b, x) > 0, shifted(b, y) > 0 and positive leftovers
    1 - sum_{z != b} shifted(z, .), the invariant measure satisfies
    pi(x) <= ratio(x, y; b) pi(y).  C is the worst ratio over all such
    pairs; passing no pivot selects the best valid pivot for each pair.
    Uniform pi is vacuous and certifies C = 1.
    """
    w = pi.weights
    if float(np.max(w) - np.min(w)) <= _COLSUM_TOL:
        return 1.0
    m = shifted.dense()
    a_plus, a_minus = _column_imbalance(m)
    reach = np.zeros(shifted.size, dtype=bool)
    for s in sorted(int(s) for s in support):
        reach |= m[s] > 0.0
    if not all(reach[i] for i in (*a_plus, *a_minus)):
        raise ValueError("support does not cover the imbalanced columns")
    colsums = m.sum(axis=0)
    worst = 1.0
    for x in a_plus:
        for y in a_minus:
            if pivot is None:
                best = math.inf
                for b in range(shifted.size):
                    r = _pivot_ratio(m, colsums, b, x, y)
                    if r is not None:
                        best = min(best, r)
                if math.isinf(best):
                    raise InvalidPivot(f"no valid pivot for the pair ({x}, {y})")
                ratio = best
            else:
                b = pivot[(x, y)] if isinstance(pivot, dict) else pivot(x, y)
                r = _pivot_ratio(m, colsums, int(b), x, y)
                if r is None:
                    raise InvalidPivot(
                        f"pivot {b} fails the positivity conditions for ({x}, {y})"
                    )
                ratio = r
            worst = max(worst, ratio)
    if float(np.max(w)) > worst * float(np.min(w)) + 1e-10:
        raise BoundViolated("measured max/min ratio exceeds the pivot bound")
    return worst


def _pivot_ratio(m, colsums, b, x, y) -> Optional[float]:
    kbx = m[b, x]
    kby = m[b, y]
    leftover_x = 1.0 - (colsums[x] - kbx)
    leftover_y = 1.0 - (colsums[y] - kby)
    if kbx <= 0.0 or kby <= 0.0 or leftover_x <= 0.0 or leftover_y <= 0.0:
        return None
    return float((kbx * leftover_y) / (kby * leftover_x))


def _single_row_asymmetry(k: np.ndarray):
    """Index of the one row whose edits explain all asymmetry of k, if any."""
    asym = np.abs(k - k.T)
    rows = [int(r) for r in np.flatnonzero(asym.max(axis=1) > 1e-14)]
    if not rows:
        return None
    n = k.shape[0]
    for cand in rows:
        others = [r for r in rows if r != cand]
        cols = [c for c in range(n) if c != cand]
        if all(np.all(asym[r, cols] <= 1e-14) for r in others):
            return cand
    raise PerturbationShapeViolated("kernel is not symmetric off a single row")


def sticky_stability_check(system: WaveSystem, delta: float) -> tuple[float, float]:
    """Measured max/min ratio of the wave measure against the sticky bound.

    The base kernel must be a symmetric kernel perturbed on a single row o:
    extra holding weight at (o, o), at most delta, compensated by reduced
    mass on the rest of the row.  Returns (measured ratio, 1/(1 - eps))
    with eps = delta / (1 - Q(o, o)) and checks measured <= bound; also
    checks that the wave measure peaks at the image of o one map step
    ahead, where the surplus column of the shifted kernel sits.
    """
    k = system.base.dense()
    o = _single_row_asymmetry(k)
    if o is None:
        return 1.0, 1.0
    # rows other than o are untouched, so column o of k is row o of the
    # symmetric base; its diagonal entry follows from stochasticity
    q_row = k[:, o].copy()
    q_oo = 1.0 - (q_row.sum() - q_row[o])
    q_row[o] = q_oo
    d_row = k[o] - q_row
    if not 0.0 < d_row[o] <= delta + 1e-12:
        raise PerturbationShapeViolated(
            f"holding surplus {d_row[o]!r} outside (0, delta={delta}]"
        )
    if not 0.0 < delta < 1.0 - q_oo:
        raise PerturbationShapeViolated("delta must lie in (0, 1 - Q(o, o))")
    off = np.delete(np.arange(k.shape[0]), o)
    floor = -delta * q_row[off] / (1.0 - q_oo)
    if np.any(d_row[off] > 1e-14) or np.any(d_row[off] < floor - 1e-12):
        raise PerturbationShapeViolated(
            "off-diagonal perturbation outside the single-point shape"
        )
    if np.any((q_row[off] > 0.0) & (d_row[off] > -1e-15)):
        raise PerturbationShapeViolated(
            "perturbation must remove mass everywhere the base row has some"
        )
    eps = delta / (1.0 - q_oo)
    pi = system.wave_measure
    measured = float(np.max(pi.weights) / np.min(pi.weights))
    bound = 1.0 / (1.0 - eps)
    peak = int(np.argmax(pi.weights))
    expected = int(system.map.forward[o])
    if peak != expected:
        raise BoundViolated(
            f"wave measure peaks at {peak}, not at the image {expected} of the sticky row"
        )
    if measured > bound + 1e-10:
        raise BoundViolated(
            f"sticky ratio {measured} exceeds the certified bound {bound}"
        )
    return measured, bound

"""Seeded Monte Carlo for inhomogeneous chains.

Sampling never touches the step kernels directly: if X follows the
inhomogeneous chain then Z_n = g^n X_n is a homogeneous chain driven by the
shifted kernel, so every simulation below steps Z with one padded
row-support table and maps back through the inverse bijection at the end.
Randomness is a pure function of (seed, replica, step), which keeps every
replica reproducible when the trial count changes.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .core import Distribution, WaveSystem
from .errors import NotMerging
from .rng import uniforms
from .spectral import is_irreducible, period

_MAX_LANES = 4096


@dataclass(frozen=True)
class PathSample:
    """One trajectory; steps[0] is the start and steps[i] the state at time i."""

    start: int
    steps: tuple[int, ...]
    seed: int


class _RowTable:
    """Padded sparse rows of a kernel, ready for vectorized inverse transform.

    indices[r] holds the support of row r in increasing column order, padded
    by repeating the last support point; cums[r] holds the running sums,
    padded with 2.0 so a uniform draw never selects padding except when
    rounding pushes it past the final real cumulative, in which case the
    repeated last index gives the correct tail behaviour.
    """

    def __init__(self, kernel):
        size = kernel.size
        if kernel.is_sparse:
            csr = kernel.matrix.tocsr()
            csr.sort_indices()
            starts = csr.indptr
            all_idx = csr.indices
            all_val = csr.data
        else:
            m = kernel.matrix
            rows = [np.flatnonzero(m[r]) for r in range(size)]
            starts = np.concatenate([[0], np.cumsum([len(r) for r in rows])])
            all_idx = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
            all_val = np.concatenate([m[r][rows[r]] for r in range(size)])
        width = int(np.max(np.diff(starts)))
        self.indices = np.empty((size, width), dtype=np.int64)
        self.cums = np.full((size, width), 2.0)
        for r in range(size):
            lo, hi = starts[r], starts[r + 1]
            k = hi - lo
            self.indices[r, :k] = all_idx[lo:hi]
            self.indices[r, k:] = all_idx[hi - 1]
            self.cums[r, :k] = np.cumsum(all_val[lo:hi])

    def step(self, states: np.ndarray, u: np.ndarray) -> np.ndarray:
        # first support point whose cumulative exceeds the draw
        pick = (u[:, None] < self.cums[states]).argmax(axis=1)
        return self.indices[states, pick]


def sample_path(system: WaveSystem, start: int, n: int, seed: int) -> PathSample:
    """One inhomogeneous trajectory of length n from the given start."""
    if n < 0:
        raise ValueError("path length must be nonnegative")
    start = int(start)
    table = _RowTable(system.shifted)
    ginv = system.map.inverse
    back = np.arange(system.space.size, dtype=np.int64)
    z = np.array([start], dtype=np.int64)
    steps = [start]
    for i in range(1, n + 1):
        u = uniforms(seed, 0, i - 1)
        z = table.step(z, u)
        back = back[ginv]  # now maps through g^{-i}
        steps.append(int(back[z[0]]))
    return PathSample(start=start, steps=tuple(steps), seed=int(seed))


def _endpoint_states(
    system: WaveSystem, start: int, n: int, trials: int, seed: int
) -> np.ndarray:
    """Endpoint of every replica; replica r is unchanged by growing trials."""
    table = _RowTable(system.shifted)
    z = np.full(trials, int(start), dtype=np.int64)
    replicas = np.arange(trials, dtype=np.uint64)
    for i in range(1, n + 1):
        u = uniforms(seed, replicas, i - 1)
        z = table.step(z, u)
    return system.map.power_map(-n)[z]


def empirical_distribution(
    system: WaveSystem, start: int, n: int, trials: int, seed: int
) -> Distribution:
    """Endpoint histogram over independent replicas of the length-n chain."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if n < 0:
        raise ValueError("path length must be nonnegative")
    ends = _endpoint_states(system, int(start), n, int(trials), seed)
    counts = np.bincount(ends, minlength=system.space.size).astype(float)
    return Distribution(system.space, counts / counts.sum())


def empirical_wave_profile(
    system: WaveSystem,
    burn_in: int,
    stride: int,
    samples: int,
    seed: int,
) -> Distribution:
    """Occupation histogram of g^n X_n after burn-in, an estimate of the
    invariant measure of the shifted kernel.

    Recording happens every `stride` steps (the natural choice is the order
    of the bijection).  Work is spread over parallel replicas, all started
    at state 0; the lane count depends only on `samples`, so results are
    reproducible for fixed arguments.
    """
    if burn_in < 0 or stride < 1 or samples < 1:
        raise ValueError("burn_in >= 0, stride >= 1, samples >= 1 required")
    if not is_irreducible(system.shifted) or period(system.shifted) != 1:
        raise NotMerging("profile needs an irreducible aperiodic shifted kernel")
    lanes = min(_MAX_LANES, samples)
    per_lane = -(-samples // lanes)  # recordings per replica, ceil
    table = _RowTable(system.shifted)
    z = np.zeros(lanes, dtype=np.int64)
    replicas = np.arange(lanes, dtype=np.uint64)
    counts = np.zeros(system.space.size, dtype=np.int64)
    recorded = 0
    step = 0
    for _ in range(burn_in):
        z = table.step(z, uniforms(seed, replicas, step))
        step += 1
    for _ in range(per_lane):
        take = min(lanes, samples - recorded)
        counts += np.bincount(z[:take], minlength=system.space.size)
        recorded += take
        if recorded >= samples:
            break
        for _ in range(stride):
            z = table.step(z, uniforms(seed, replicas, step))
            step += 1
    weights = counts.astype(float)
    return Distribution(system.space, weights / weights.sum())


def profile_to_csv(dist: Distribution) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["state", "frequency"])
    for i in range(dist.space.size):
        writer.writerow([dist.space.label(i), repr(float(dist.weights[i]))])
    return buf.getvalue()

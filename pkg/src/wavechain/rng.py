"""Counter-based random number generation.

Every simulation draw is a pure function of (seed, replica, step), so replica
r of a run is unchanged when the total number of replicas grows, and any
sub-range of a path can be regenerated without replaying the rest.  The
generator is the splitmix64 finalizer applied to a chained key; it is cheap,
stateless and vectorizes over numpy arrays.
"""
from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_SHIFT53 = np.uint64(11)
_INV53 = float(2.0**-53)


def _mix(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 arithmetic wraps mod 2^64 by construction
    z = (z + _GAMMA).astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def _key(seed: int, replica) -> np.ndarray:
    s = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
    r = np.asarray(replica, dtype=np.uint64)
    return _mix(_mix(np.atleast_1d(s)) + r)


def uniforms(seed: int, replica, step) -> np.ndarray:
    """Uniform [0, 1) variates indexed by (seed, replica, step).

    `replica` and `step` broadcast against each other, so a single call can
    produce one value, a vector over replicas, or a replica-by-step table.
    """
    k = _key(seed, replica)
    t = np.asarray(step, dtype=np.uint64)
    z = _mix(np.add(np.multiply(k, _GAMMA, dtype=np.uint64), t, dtype=np.uint64))
    return ((z >> _SHIFT53) * _INV53).astype(np.float64)


def replica_uniform_table(seed: int, n_replicas: int, n_steps: int) -> np.ndarray:
    """(n_replicas, n_steps) table; row r is the path stream of replica r."""
    reps = np.arange(n_replicas, dtype=np.uint64)[:, None]
    steps = np.arange(n_steps, dtype=np.uint64)[None, :]
    return uniforms(seed, reps, steps)

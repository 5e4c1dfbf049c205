"""Finite symmetric group utilities.

Group elements are one-line tuples p of length n with entries 0..n-1, read as
functions i -> p[i].  The group product is fixed once and for all as

    (x * y)[i] = y[x[i]]        # apply x first, then y

so that right multiplication by a generator acts after the current element.
All constructions in the model zoo rely on this convention; changing it
silently changes every walk on a symmetric group.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def multiply(x: Perm, y: Perm) -> Perm:
    """Group product: apply x, then y."""
    return tuple(y[i] for i in x)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def conjugate(x: Perm, a: Perm) -> Perm:
    """a * x * a^{-1} in the fixed product convention."""
    return multiply(multiply(a, x), inverse(a))


def perm_power(p: Perm, k: int) -> Perm:
    n = len(p)
    if k < 0:
        return perm_power(inverse(p), -k)
    result = identity_perm(n)
    base = p
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def from_cycles(n: int, cycles) -> Perm:
    """Permutation sending a -> b for consecutive entries a, b of each cycle.

    Cycles use 0-based points; points not mentioned are fixed.
    """
    arr = list(range(n))
    for cyc in cycles:
        m = len(cyc)
        for j, a in enumerate(cyc):
            arr[a] = cyc[(j + 1) % m]
    if sorted(arr) != list(range(n)):
        raise ValueError("cycles overlap or repeat a point")
    return tuple(arr)


def transposition(n: int, a: int, b: int) -> Perm:
    if a == b:
        return identity_perm(n)
    return from_cycles(n, [(a, b)])


@lru_cache(maxsize=8)
def sn_elements(n: int) -> tuple[Perm, ...]:
    """All of S_n in lexicographic one-line order."""
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=8)
def sn_index(n: int) -> dict:
    return {p: i for i, p in enumerate(sn_elements(n))}


def one_line_label(p: Perm) -> str:
    """Human-readable one-line notation, 1-based to match common usage."""
    if len(p) <= 9:
        return "".join(str(v + 1) for v in p)
    return "(" + ",".join(str(v + 1) for v in p) + ")"

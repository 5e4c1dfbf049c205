"""Kernel and permutation interchange documents.

Kernels travel as JSON objects {size, labels?, triplets} where triplets is a
list of [row, col, value] for the nonzero entries, sorted by (row, col) so a
document is byte-stable for a given kernel.  Loading validates
row-stochasticity like any other construction path.
"""
from __future__ import annotations

import json

import numpy as np
import scipy.sparse as sp

from .core import DENSE_LIMIT, MarkovKernel, Permutation, StateSpace, make_kernel, make_permutation
from .errors import ConfigInvalid


def kernel_document(kernel: MarkovKernel) -> dict:
    if kernel.is_sparse:
        coo = kernel.matrix.tocoo()
        triplets = sorted(
            (int(r), int(c), float(v)) for r, c, v in zip(coo.row, coo.col, coo.data) if v != 0.0
        )
    else:
        rows, cols = np.nonzero(kernel.matrix)
        triplets = [(int(r), int(c), float(kernel.matrix[r, c])) for r, c in zip(rows, cols)]
    doc = {"size": kernel.size, "triplets": [list(t) for t in triplets]}
    if kernel.space.labels is not None:
        doc["labels"] = list(kernel.space.labels)
    return doc


def kernel_from_document(doc: dict, dense_limit: int = DENSE_LIMIT) -> MarkovKernel:
    try:
        size = int(doc["size"])
        triplets = doc["triplets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"kernel document missing size/triplets: {exc}") from exc
    labels = doc.get("labels")
    space = StateSpace(size, tuple(labels) if labels is not None else None)
    rows, cols, vals = [], [], []
    for t in triplets:
        if len(t) != 3:
            raise ConfigInvalid(f"triplet {t!r} is not [row, col, value]")
        r, c, v = int(t[0]), int(t[1]), float(t[2])
        if not (0 <= r < size and 0 <= c < size):
            raise ConfigInvalid(f"triplet {t!r} indexes outside the space")
        rows.append(r)
        cols.append(c)
        vals.append(v)
    m = sp.coo_matrix((vals, (rows, cols)), shape=(size, size))
    if size <= dense_limit:
        return make_kernel(space, m.toarray(), dense_limit=dense_limit)
    return make_kernel(space, m.tocsr(), dense_limit=dense_limit)


def save_kernel(kernel: MarkovKernel, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(kernel_document(kernel), fh, sort_keys=True)
        fh.write("\n")


def load_kernel(path: str, dense_limit: int = DENSE_LIMIT) -> MarkovKernel:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"not a JSON kernel document: {exc}") from exc
    return kernel_from_document(doc)


def permutation_document(g: Permutation) -> dict:
    return {"size": g.space.size, "forward": [int(v) for v in g.forward]}


def permutation_from_document(doc: dict, space: StateSpace | None = None) -> Permutation:
    try:
        size = int(doc["size"])
        forward = [int(v) for v in doc["forward"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"permutation document missing size/forward: {exc}") from exc
    if space is None:
        space = StateSpace(size)
    elif space.size != size:
        raise ConfigInvalid("permutation document size differs from the target space")
    return make_permutation(space, forward)

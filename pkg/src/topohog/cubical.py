"""Sublevel persistence of single-channel images on the cubical complex.

Pixels are the top-dimensional cells (T-construction), so two active pixels
that share only a corner belong to the same component. Holes are the bounded
components of the inactive region, which are connected through shared edges
only.

Diagrams are ``(n, 2)`` float arrays of ``(birth, death)`` intensity levels;
essential classes have ``death == INFINITY``. Pairs with zero persistence are
not reported.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

INFINITY = math.inf

_NEIGHBORS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_NEIGHBORS_4 = ((-1, 0), (0, -1), (0, 1), (1, 0))


def _check_channel(img) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError(f"expected a single-channel (H, W) image, got shape {img.shape}")
    if img.size == 0:
        raise ValueError("empty image")
    return img


def binarize(img, t) -> np.ndarray:
    """Boolean mask of the pixels active at threshold ``t`` (value <= t)."""
    return _check_channel(img) <= t


@lru_cache(maxsize=8)
def _neighbor_table(h: int, w: int, offsets) -> list[list[int]]:
    # cached per shape: callers must not mutate the returned lists
    table = []
    for i in range(h):
        for j in range(w):
            table.append([
                (i + di) * w + (j + dj)
                for di, dj in offsets
                if 0 <= i + di < h and 0 <= j + dj < w
            ])
    return table


def _find(parent: list[int], x: int) -> int:
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _elder_merges(keys: list, order, neighbors, outside=None, border=()):
    """Elder-rule union-find over cells visited in ``order``.

    A smaller key is older. Every merge of two components kills the younger
    one; this returns ``(dying key, key of the cell that caused the merge)``
    for each merge with nonzero persistence, plus the parent array. With
    ``outside`` set, that cell is active from the start and adjacent to every
    cell listed in ``border``.
    """
    n = len(keys)
    parent = list(range(n))
    oldest = list(keys)
    seen = [False] * n
    on_border = [False] * n
    for p in border:
        on_border[p] = True
    if outside is not None:
        seen[outside] = True
    merges = []
    for p in order:
        seen[p] = True
        v = keys[p]
        rp = p
        adjacent = neighbors[p]
        if on_border[p]:
            adjacent = adjacent + [outside]
        for q in adjacent:
            if not seen[q]:
                continue
            rq = _find(parent, q)
            if rq == rp:
                continue
            if oldest[rq] < oldest[rp]:
                rp, rq = rq, rp
            # rq is the younger root and dies at v
            if oldest[rq] != v:
                merges.append((oldest[rq], v))
            parent[rq] = rp
    return merges, parent, oldest


def _persistence_dim0(img: np.ndarray) -> np.ndarray:
    h, w = img.shape
    keys = img.ravel().tolist()
    order = np.argsort(img.ravel(), kind="stable").tolist()
    merges, parent, oldest = _elder_merges(keys, order, _neighbor_table(h, w, _NEIGHBORS_8))
    roots = {_find(parent, p) for p in range(len(keys))}
    merges.extend((oldest[r], INFINITY) for r in roots)
    return np.array(merges, dtype=float).reshape(-1, 2)


def _persistence_dim1(img: np.ndarray) -> np.ndarray:
    """Holes via the inactive region, swept from the brightest pixel down.

    At threshold t the inactive pixels are those with value > t. Sweeping t
    downwards, a bounded inactive component appears at its maximum value (the
    hole's death) and merges into an older one at the value of the pixel that
    sealed it off (the hole's birth). A virtual outside cell adjacent to the
    image border never dies, so anything reaching the border stops being a hole.
    """
    h, w = img.shape
    n = h * w
    flat = img.ravel().astype(np.int64)
    # negated values: the brightest pixel is the oldest
    keys = (-flat).tolist() + [-INFINITY]
    border = [i * w + j for i in range(h) for j in range(w)
              if i == 0 or j == 0 or i == h - 1 or j == w - 1]
    neighbors = _neighbor_table(h, w, _NEIGHBORS_4) + [border]
    order = np.argsort(-flat, kind="stable").tolist()
    merges, _, _ = _elder_merges(keys, order, neighbors, outside=n, border=border)
    return np.array([(-b, -d) for d, b in merges], dtype=float).reshape(-1, 2)


def compute_persistence(img) -> tuple[np.ndarray, np.ndarray]:
    """Persistence diagrams ``(dim0, dim1)`` of the sublevel filtration of ``img``."""
    img = _check_channel(img)
    if not np.issubdtype(img.dtype, np.integer):
        raise ValueError("intensities must be integers")
    return _persistence_dim0(img), _persistence_dim1(img)

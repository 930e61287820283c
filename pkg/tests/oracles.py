"""Brute-force reference computations used by the test-suite.

Nothing here shares code with the package under test.
"""

import itertools
import math

import numpy as np
from scipy import ndimage

EIGHT = np.ones((3, 3), dtype=int)
FOUR = ndimage.generate_binary_structure(2, 1)


def components_at(img, t):
    """Pixel sets of the 8-connected components of ``img <= t``."""
    labels, n = ndimage.label(img <= t, structure=EIGHT)
    return [frozenset(zip(*np.nonzero(labels == k))) for k in range(1, n + 1)]


def holes_at(img, t):
    """Pixel sets of the bounded 4-connected components of ``img > t``."""
    padded = np.pad(img > t, 1, constant_values=True)
    labels, n = ndimage.label(padded, structure=FOUR)
    outer = labels[0, 0]
    holes = []
    for k in range(1, n + 1):
        if k == outer:
            continue
        ii, jj = np.nonzero(labels == k)
        holes.append(frozenset(zip(ii - 1, jj - 1)))
    return holes


def oracle_diagrams(img):
    """Diagrams by per-threshold flood fill with elder-rule bookkeeping."""
    img = np.asarray(img, dtype=np.int64)
    lo, hi = int(img.min()), int(img.max())
    pd0, pd1 = [], []
    alive0 = []  # (birth, pixel set)
    alive1 = []  # (birth, pixel set)
    for t in range(lo, hi + 1):
        comps = components_at(img, t)
        new_alive0 = []
        for comp in comps:
            parents = [(b, s) for b, s in alive0 if s <= comp]
            if not parents:
                new_alive0.append((t, comp))
                continue
            births = sorted(b for b, _ in parents)
            new_alive0.append((births[0], comp))
            pd0.extend((b, t) for b in births[1:])
        alive0 = new_alive0

        holes = holes_at(img, t)
        new_alive1 = []
        claimed = set()
        for idx, (b, s) in enumerate(alive1):
            children = [hole for hole in holes if hole <= s]
            if not children:
                pd1.append((b, t))
                continue
            # the piece that survives longest keeps the old birth
            keep = max(children, key=lambda c: max(img[p] for p in c))
            for c in children:
                claimed.add(c)
                new_alive1.append((b if c is keep else t, c))
        for hole in holes:
            if hole not in claimed:
                new_alive1.append((t, hole))
        alive1 = new_alive1
    pd0.extend((b, math.inf) for b, _ in alive0)
    assert not alive1
    return sorted(pd0), sorted(pd1)


def as_multiset(diagram):
    return sorted((float(b), float(d)) for b, d in np.asarray(diagram).reshape(-1, 2))


def euler_characteristic(mask):
    """V - E + F of the closed cubical complex spanned by the active pixels."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    faces = int(mask.sum())
    p = np.pad(mask, 1)
    # vertex (i, j) touches pixels (i-1..i, j-1..j) of the original grid
    verts = p[:-1, :-1] | p[:-1, 1:] | p[1:, :-1] | p[1:, 1:]
    # horizontal edges between vertex rows: touch pixel above or below
    h_edges = p[:-1, 1:-1] | p[1:, 1:-1]
    v_edges = p[1:-1, :-1] | p[1:-1, 1:]
    return int(verts.sum()) - int(h_edges.sum()) - int(v_edges.sum()) + faces


def alive_count(diagram, t):
    d = np.asarray(diagram).reshape(-1, 2)
    return int(np.sum((d[:, 0] <= t) & (t < d[:, 1])))


def all_images(h, w, alphabet):
    for vals in itertools.product(alphabet, repeat=h * w):
        yield np.array(vals, dtype=np.int64).reshape(h, w)


def bilinear_reference(img, out_w, out_h):
    """Per-pixel bilinear resample, half-pixel centres, edge clamped."""
    img = np.asarray(img, dtype=float)
    h, w = img.shape[:2]
    out = np.zeros((out_h, out_w) + img.shape[2:])
    for i in range(out_h):
        for j in range(out_w):
            y = min(max((i + 0.5) * h / out_h - 0.5, 0), h - 1)
            x = min(max((j + 0.5) * w / out_w - 0.5, 0), w - 1)
            y0, x0 = int(math.floor(y)), int(math.floor(x))
            y1, x1 = min(y0 + 1, h - 1), min(x0 + 1, w - 1)
            dy, dx = y - y0, x - x0
            out[i, j] = (
                img[y0, x0] * (1 - dy) * (1 - dx)
                + img[y0, x1] * (1 - dy) * dx
                + img[y1, x0] * dy * (1 - dx)
                + img[y1, x1] * dy * dx
            )
    return out


def auc_pairs(scores, labels):
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            total += 1.0 if p > q else 0.5 if p == q else 0.0
    return total / (len(pos) * len(neg))

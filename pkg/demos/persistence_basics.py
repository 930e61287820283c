"""
Persistence diagrams and Betti curves of a tiny image
=====================================================

Threshold a grayscale image at increasing levels and watch components
appear and merge, and holes open and fill in.
"""

import numpy as np

from topohog import betti_curve, binarize, compute_persistence

img = np.array(
    [
        [1, 5, 4, 3, 1],
        [2, 2, 4, 5, 4],
        [2, 5, 3, 3, 1],
        [1, 3, 1, 5, 3],
        [5, 4, 3, 1, 1],
    ],
    dtype=np.uint8,
)

# the sublevel filtration: pixel p is "on" at level t when img[p] <= t
for t in range(1, 6):
    print(f"t={t}")
    print(binarize(img, t).astype(int))

# dimension 0 tracks components (diagonal neighbours count as touching),
# dimension 1 tracks holes; inf marks the component that never dies
pd0, pd1 = compute_persistence(img)
print("PD0:", [tuple(p) for p in pd0.tolist()])
print("PD1:", [tuple(p) for p in pd1.tolist()])

grid = [1, 2, 3, 4, 5]
print("beta0 on", grid, "->", betti_curve(pd0, grid))
print("beta1 on", grid, "->", betti_curve(pd1, grid))

# flipping or rotating the image leaves the diagrams unchanged
pd0_r, pd1_r = compute_persistence(np.ascontiguousarray(np.rot90(img)))
print("rotation invariant:",
      sorted(map(tuple, pd1.tolist())) == sorted(map(tuple, pd1_r.tolist())))

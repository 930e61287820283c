"""
A HOG descriptor by hand
========================

Gradients, per-cell orientation histograms and block normalisation, step by
step, on a synthetic image with one bright disc.
"""

import numpy as np

from topohog.hog import (
    HogParams,
    block_normalize,
    cell_histograms,
    descriptor_length,
    gradients,
    hog_features,
)

yy, xx = np.mgrid[:64, :64]
img = np.where((yy - 32) ** 2 + (xx - 32) ** 2 < 20**2, 180, 40).astype(np.uint8)

gx, gy = gradients(img)
print("strongest horizontal gradient:", gx.max(), "vertical:", gy.max())

params = HogParams()  # 9 bins, 8x8 cells, 2x2 blocks, L2-Hys with clip 0.2
cells = cell_histograms(gx, gy, params)
print("cell grid:", cells.shape)

# the cell on the left rim of the disc sees mostly horizontal gradients,
# which fall between the first and last orientation bins
print("left-rim cell histogram:", np.round(cells[4, 1], 1))

features = block_normalize(cells, params)
print("descriptor length:", features.size, "=", descriptor_length(64, 64, params))
print("224x224 default length:", descriptor_length(224, 224))

# block normalisation removes a uniform change of contrast
brighter = hog_features((img.astype(int) * 4 // 3).astype(np.uint8))
print("max change after brightening:", np.abs(brighter - features).max())

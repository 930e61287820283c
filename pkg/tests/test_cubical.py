import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import ndimage

from oracles import EIGHT, alive_count, as_multiset, euler_characteristic, oracle_diagrams
from topohog.cubical import INFINITY, binarize, compute_persistence

small_images = arrays(
    np.int64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=st.integers(0, 7)
)


def test_binarize_threshold_edges():
    img = np.full((3, 4), 100, np.uint8)
    assert not binarize(img, 99).any()
    assert binarize(img, 100).all()


def test_binarize_nested(rng):
    img = rng.integers(0, 256, (40, 40))
    masks = [binarize(img, t) for t in (70, 90, 110)]
    counts = [m.sum() for m in masks]
    assert counts == sorted(counts)
    assert np.all(masks[0] <= masks[1]) and np.all(masks[1] <= masks[2])


def test_binarize_rejects_rgb():
    with pytest.raises(ValueError):
        binarize(np.zeros((2, 2, 3)), 1)


def test_worked_example_diagrams(worked_image):
    pd0, pd1 = compute_persistence(worked_image)
    assert as_multiset(pd1) == [(3, 5), (3, 5), (4, 5)]
    # a reference PD0 with an extra (2,3) pair would contradict beta0(2) = 4,
    # so only the five pairs consistent with the curve are expected
    assert as_multiset(pd0) == [(1, 2), (1, 3), (1, 3), (1, 4), (1, INFINITY)]


def test_single_pixel():
    pd0, pd1 = compute_persistence(np.array([[42]]))
    assert as_multiset(pd0) == [(42, INFINITY)]
    assert len(pd1) == 0


def test_ring_has_one_hole():
    img = np.array([[0, 0, 0], [0, 9, 0], [0, 0, 0]])
    pd0, pd1 = compute_persistence(img)
    assert as_multiset(pd0) == [(0, INFINITY)]
    assert as_multiset(pd1) == [(0, 9)]


def test_diagonal_pixels_connect():
    # corner-sharing pixels are one component; the 4-connected bright cells
    # on the anti-diagonal touch the border, so there is no hole
    img = np.array([[0, 5], [5, 0]])
    pd0, pd1 = compute_persistence(img)
    assert as_multiset(pd0) == [(0, INFINITY)]
    assert len(pd1) == 0


def test_rejects_multichannel_and_float():
    with pytest.raises(ValueError):
        compute_persistence(np.zeros((2, 2, 3), np.uint8))
    with pytest.raises(ValueError):
        compute_persistence(np.zeros((2, 2)))


def test_matches_oracle_random(rng):
    for _ in range(300):
        h, w = rng.integers(1, 8, 2)
        img = rng.integers(0, 6, (h, w))
        pd0, pd1 = compute_persistence(img)
        o0, o1 = oracle_diagrams(img)
        assert as_multiset(pd0) == o0
        assert as_multiset(pd1) == o1


@given(small_images)
@settings(max_examples=150, deadline=None)
def test_essential_classes_match_components(img):
    pd0, _ = compute_persistence(img)
    essential = np.isinf(pd0[:, 1]).sum()
    _, n = ndimage.label(np.ones_like(img, bool), structure=EIGHT)
    assert essential == n == 1


@given(small_images)
@settings(max_examples=150, deadline=None)
def test_birth_before_death(img):
    for pd in compute_persistence(img):
        assert np.all(pd[:, 0] < pd[:, 1])
    _, pd1 = compute_persistence(img)
    assert np.all(np.isfinite(pd1))


@given(small_images)
@settings(max_examples=150, deadline=None)
def test_euler_consistency(img):
    pd0, pd1 = compute_persistence(img)
    for t in range(int(img.min()), int(img.max()) + 1):
        assert alive_count(pd0, t) - alive_count(pd1, t) == euler_characteristic(img <= t)


@given(small_images, st.sampled_from(["rot90", "rot180", "rot270", "fliplr", "flipud", "T"]))
@settings(max_examples=150, deadline=None)
def test_symmetry_invariance(img, op):
    moved = {
        "rot90": np.rot90(img), "rot180": np.rot90(img, 2), "rot270": np.rot90(img, 3),
        "fliplr": np.fliplr(img), "flipud": np.flipud(img), "T": img.T,
    }[op]
    a, b = compute_persistence(img), compute_persistence(np.ascontiguousarray(moved))
    assert as_multiset(a[0]) == as_multiset(b[0])
    assert as_multiset(a[1]) == as_multiset(b[1])


@given(small_images, st.integers(-300, 300))
@settings(max_examples=100, deadline=None)
def test_shift_equivariance(img, c):
    base = compute_persistence(img)
    shifted = compute_persistence(img + c)
    for d_base, d_shift in zip(base, shifted):
        assert as_multiset(d_base + c) == as_multiset(d_shift)


def test_uint8_and_int64_agree(rng):
    img = rng.integers(0, 256, (12, 9))
    for a, b in zip(compute_persistence(img), compute_persistence(img.astype(np.uint8))):
        assert as_multiset(a) == as_multiset(b)

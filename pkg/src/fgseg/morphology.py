"""Binary morphology with disk structuring elements, and the threshold +
close + open baseline segmenter.

Dilation pads outside the image with background, erosion with foreground,
so erosion and dilation are exact duals on the finite grid and the image
border never erodes a region on its own.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StructuringElement:
    radius: int
    offsets: tuple  # ((di, dj), ...) sorted

    def __len__(self):
        return len(self.offsets)


def disk_element(r):
    """All integer offsets within Euclidean distance ``r`` of the origin."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    span = range(-r, r + 1)
    offsets = tuple((di, dj) for di in span for dj in span if di * di + dj * dj <= r * r)
    return StructuringElement(r, offsets)


def _shifted(mask, di, dj, fill):
    """out[i, j] = mask[i + di, j + dj], ``fill`` outside the grid."""
    h, w = mask.shape
    out = np.full_like(mask, fill)
    if abs(di) >= h or abs(dj) >= w:
        return out
    src_i = slice(max(di, 0), h + min(di, 0))
    dst_i = slice(max(-di, 0), h + min(-di, 0))
    src_j = slice(max(dj, 0), w + min(dj, 0))
    dst_j = slice(max(-dj, 0), w + min(-dj, 0))
    out[dst_i, dst_j] = mask[src_i, src_j]
    return out


def dilate(mask, se):
    mask = np.asarray(mask, dtype=bool)
    out = np.zeros_like(mask)
    for di, dj in se.offsets:
        out |= _shifted(mask, -di, -dj, False)
    return out


def erode(mask, se):
    mask = np.asarray(mask, dtype=bool)
    out = np.ones_like(mask)
    for di, dj in se.offsets:
        out &= _shifted(mask, di, dj, True)
    return out


def close(mask, se):
    return erode(dilate(mask, se), se)


def open(mask, se):  # noqa: A001 - morphological opening
    return dilate(erode(mask, se), se)


def segment_morph(diff, tau, r):
    """Threshold at ``tau``, then close and open with a radius-``r`` disk."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    se = disk_element(r)
    return open(close(np.asarray(diff) > tau, se), se)

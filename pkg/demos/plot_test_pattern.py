"""
Segmenting a noisy stripe pattern
=================================

Thresholding, threshold plus morphology, and graph cuts on the same
noisy bar pattern.
"""

import numpy as np

from fgseg import SegParams, segment_graph, segment_morph, whole_frame_error
from fgseg.synth import NoiseConfig, add_noise, make_test_pattern

# The pattern: bars 16, 8, 4, 2 and 1 pixels wide, half foreground.
gt = make_test_pattern()
print("pattern", gt.shape, "foreground fraction", gt.mean())

# Foreground is 1, background 0, so the noise sigma is 1/SNR. The noisy
# image is already a difference map and thresholds apply to it directly.
noisy = add_noise(gt, NoiseConfig(snr=1.0, seed=0))

plain = noisy > 0.5
print("threshold        %.1f%%" % (100 * whole_frame_error(plain, gt)))

cleaned = segment_morph(noisy, 0.7, 1)
print("close+open r=1   %.1f%%" % (100 * whole_frame_error(cleaned, gt)))

# Raising alpha strengthens the neighbour links, which fills speckle
# but eventually erases the thin bars.
for alpha in (0.5, 1.0, 2.0, 4.0):
    mask = segment_graph(noisy, SegParams(tau=0.5, alpha=alpha))
    print("graph alpha=%-4g %.1f%%" % (alpha, 100 * whole_frame_error(mask, gt)))

# Per-section error shows the trade: strong links clean the wide bars
# and merge the 1-pixel bars into solid foreground or background.
edges = np.cumsum([0] + [16 * w for w in (16, 8, 4, 2, 1)])
for alpha in (1.0, 4.0):
    mask = segment_graph(noisy, SegParams(0.5, alpha))
    errs = [whole_frame_error(mask[:, a:b], gt[:, a:b]) for a, b in zip(edges[:-1], edges[1:])]
    print("alpha=%g by bar width 16..1: %s" % (alpha, " ".join("%.1f%%" % (100 * e) for e in errs)))

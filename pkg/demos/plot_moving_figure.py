"""
Background subtraction on a synthetic clip
==========================================

Build a robust background model, then compare morphology and graph cuts
on a figure with thin limbs walking across a textured scene.
"""

import numpy as np

from fgseg import (ModelConfig, SegParams, build_background, cc_error, difference, paired_t_test,
                   segment_graph, segment_morph)
from fgseg.synth import make_moving_sequence

frames, truths = make_moving_sequence(n_frames=40, seed=0)

# The figure covers each pixel in under a quarter of the frames, so the
# quartile-trimmed model never sees it.
model = build_background(frames, ModelConfig(sample_stride=1))
print("model", model.shape, "median std %.4f" % np.median(model.std))

graph_err, morph_err = [], []
for frame, gt in zip(frames, truths):
    d = difference(frame, model)
    graph_err.append(cc_error(segment_graph(d, SegParams(1.5, 0.5)), gt).error)
    morph_err.append(cc_error(segment_morph(d, 1.5, 1), gt).error)

print("mean connected-components error")
print("  graph %.1f%%" % (100 * np.mean(graph_err)))
print("  morph %.1f%%" % (100 * np.mean(morph_err)))

t, p = paired_t_test(graph_err, morph_err)
print("paired t = %.2f, p = %.2g" % (t, p))

# Most of the morphology error is false positives: closing glues nearby
# speckle onto the figure, and the glued pixels then count against it.
for name, seg in (("graph", lambda d: segment_graph(d, SegParams(1.5, 0.5))),
                  ("morph", lambda d: segment_morph(d, 1.5, 1))):
    scores = [cc_error(seg(difference(f, model)), gt) for f, gt in zip(frames, truths)]
    print("%s: %.1f false pos, %.1f false neg per frame" % (
        name, np.mean([s.false_pos for s in scores]), np.mean([s.false_neg for s in scores])))

"""Foreground segmentation against a static background: graph cuts versus
thresholding with morphological cleanup."""

from fgseg.bgmodel import BackgroundModel, ModelConfig, build_background
from fgseg.diffmap import ShadowConfig, difference
from fgseg.graphcut import (CutProblem, SegParams, build_cut_problem, build_multiframe_problem,
                            cut_energy, min_cut, segment_graph, segment_graph_multiframe,
                            solve_min_cut)
from fgseg.imagecore import load_image, load_mask, rgb_to_hsv, save_image, save_mask
from fgseg.metrics import FrameScore, cc_error, connected_components, paired_t_test, whole_frame_error
from fgseg.morphology import close, dilate, disk_element, erode, open, segment_morph

__version__ = "0.1.0"

__all__ = [
    "BackgroundModel", "ModelConfig", "build_background",
    "ShadowConfig", "difference",
    "CutProblem", "SegParams", "build_cut_problem", "build_multiframe_problem", "cut_energy",
    "min_cut", "segment_graph", "segment_graph_multiframe", "solve_min_cut",
    "load_image", "load_mask", "rgb_to_hsv", "save_image", "save_mask",
    "FrameScore", "cc_error", "connected_components", "paired_t_test", "whole_frame_error",
    "close", "dilate", "disk_element", "erode", "open", "segment_morph",
]

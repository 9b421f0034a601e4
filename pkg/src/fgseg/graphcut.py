"""Foreground segmentation by an exact minimum s/t cut on the pixel grid.

Every pixel is a node linked to the source with weight ``delta`` and to the
sink with weight ``2*tau - delta``; 4-connected neighbours (plus co-located
pixels in adjacent frames for stacks) share links of weight ``alpha*tau``.
Nodes left on the source side of the minimum cut are foreground.
"""

from dataclasses import dataclass

import numpy as np

from fgseg._maxflow import bk_maxflow, grid_neighbors


@dataclass(frozen=True)
class SegParams:
    tau: float
    alpha: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")


@dataclass(frozen=True)
class CutProblem:
    """Grid flow network after the canonical terminal shift.

    ``src_cap`` and ``sink_cap`` have shape ``(frames, height, width)``; at
    most one of the two is positive at any node.
    """

    src_cap: np.ndarray
    sink_cap: np.ndarray
    neighbor_cap: float
    offset: float = 0.0  # sum of the per-node shifts; min energy = max flow + offset
    multiframe: bool = False

    @property
    def frames(self):
        return self.src_cap.shape[0]

    @property
    def height(self):
        return self.src_cap.shape[1]

    @property
    def width(self):
        return self.src_cap.shape[2]

    @property
    def n_nodes(self):
        return self.src_cap.size


def _terminal_caps(delta, p):
    w_s = delta
    w_t = 2.0 * p.tau - delta
    shift = np.minimum(w_s, w_t)
    src = np.maximum(w_s - shift, 0.0)
    sink = np.maximum(w_t - shift, 0.0)
    return src, sink, float(shift.sum())


def build_cut_problem(diff, p):
    """Single-frame network for difference map ``diff`` (H, W)."""
    delta = np.asarray(diff, dtype=np.float64)
    if delta.ndim != 2:
        raise ValueError(f"difference map must be 2-D, got shape {delta.shape}")
    src, sink, offset = _terminal_caps(delta, p)
    return CutProblem(src[None], sink[None], p.alpha * p.tau, offset, multiframe=False)


def build_multiframe_problem(diffs, p):
    """Network over a stack of difference maps with temporal links."""
    maps = [np.asarray(d, dtype=np.float64) for d in diffs]
    if len(maps) < 2:
        raise ValueError("multiframe problem needs at least 2 frames")
    shape = maps[0].shape
    for k, m in enumerate(maps):
        if m.ndim != 2 or m.shape != shape:
            raise ValueError(f"frame {k} has shape {m.shape}, expected {shape}")
    src, sink, offset = _terminal_caps(np.stack(maps), p)
    return CutProblem(src, sink, p.alpha * p.tau, offset, multiframe=True)


def min_cut(problem):
    """Solve ``problem``; returns ``(max_flow_value, mask)``.

    ``mask`` has shape (frames, H, W) and marks nodes reachable from the
    source in the final residual graph, i.e. the smallest optimal foreground.
    """
    f, h, w = problem.src_cap.shape
    nbr = grid_neighbors(f, h, w)
    res = np.where(nbr >= 0, problem.neighbor_cap, 0.0)
    tcap = (problem.src_cap - problem.sink_cap).ravel().astype(np.float64)
    flow, tree = bk_maxflow(tcap, res, nbr)
    # each node first pushes min(src, sink) straight through; the solver only sees the excess
    flow += float(np.minimum(problem.src_cap, problem.sink_cap).sum())
    return float(flow), (tree == 1).reshape(f, h, w)


def solve_min_cut(problem):
    """Foreground labeling: (H, W) for single-frame problems, else (F, H, W)."""
    _, mask = min_cut(problem)
    return mask if problem.multiframe else mask[0]


def segment_graph(diff, p):
    return solve_min_cut(build_cut_problem(diff, p))


def segment_graph_multiframe(diffs, p):
    return solve_min_cut(build_multiframe_problem(diffs, p))


def cut_energy(mask, diff, p):
    """Cost of labeling ``mask`` under the unshifted weights.

    Works on single frames (H, W) or stacks (F, H, W); for stacks, axis 0 is
    time and temporal neighbour pairs are charged like spatial ones.
    """
    mask = np.asarray(mask, dtype=bool)
    delta = np.asarray(diff, dtype=np.float64)
    if mask.shape != delta.shape:
        raise ValueError(f"mask shape {mask.shape} does not match difference map {delta.shape}")
    unary = np.where(mask, 2.0 * p.tau - delta, delta).sum()
    cuts = 0
    for axis in range(mask.ndim):
        cuts += np.count_nonzero(np.diff(mask, axis=axis))
    return float(unary + p.alpha * p.tau * cuts)


def shifted_cut_value(mask, problem):
    """Capacity of the s/t cut that ``mask`` induces on the shifted network."""
    mask = np.asarray(mask, dtype=bool).reshape(problem.src_cap.shape)
    value = problem.src_cap[~mask].sum() + problem.sink_cap[mask].sum()
    cuts = 0
    for axis in range(3):
        cuts += np.count_nonzero(np.diff(mask, axis=axis))
    return float(value + problem.neighbor_cap * cuts)

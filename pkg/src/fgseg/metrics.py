"""Segmentation error criteria and the paired t-test used to compare methods."""

import csv
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.special import betainc


class ZeroVarianceError(ValueError):
    """Paired differences have zero variance, so t is undefined."""


@dataclass(frozen=True)
class FrameScore:
    false_pos: int
    false_neg: int
    gt_size: int

    @property
    def error(self):
        return (self.false_pos + self.false_neg) / self.gt_size


def _check_pair(mask, gt):
    mask = np.asarray(mask, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if mask.shape != gt.shape:
        raise ValueError(f"mask shape {mask.shape} does not match ground truth {gt.shape}")
    return mask, gt


def whole_frame_error(mask, gt):
    """Fraction of all pixels where ``mask`` and ``gt`` disagree."""
    mask, gt = _check_pair(mask, gt)
    return np.count_nonzero(mask != gt) / mask.size


_STRUCTURES = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


def connected_components(mask, connectivity=8):
    """Label foreground regions 1..n in raster order of their first pixel.

    Returns ``(labels, n)``; background is 0.
    """
    if connectivity not in _STRUCTURES:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    labels, n = ndimage.label(np.asarray(mask, dtype=bool), structure=_STRUCTURES[connectivity])
    return labels, int(n)


def cc_error(mask, gt, connectivity=8):
    """Connected-components error of ``mask`` against ``gt``.

    Only foreground components touching the ground truth can add false
    positives; every ground-truth pixel the mask misses is a false negative.
    """
    mask, gt = _check_pair(mask, gt)
    gt_size = int(np.count_nonzero(gt))
    if gt_size == 0:
        raise ValueError("connected-components error needs non-empty ground truth")
    labels, _ = connected_components(mask, connectivity)
    hit = np.unique(labels[gt & mask])
    selected = np.isin(labels, hit[hit > 0])
    return FrameScore(
        false_pos=int(np.count_nonzero(selected & ~gt)),
        false_neg=int(np.count_nonzero(gt & ~mask)),
        gt_size=gt_size,
    )


def t_sf_two_sided(t, df):
    """Two-sided tail probability of Student's t with ``df`` degrees of freedom."""
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def paired_t_test(errors_a, errors_b):
    """Paired-sample t statistic on ``a - b`` and its two-sided p-value."""
    a = np.asarray(errors_a, dtype=np.float64)
    b = np.asarray(errors_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"need two equal-length 1-D samples, got {a.shape} and {b.shape}")
    n = a.size
    if n < 2:
        raise ValueError(f"need at least 2 pairs, got {n}")
    d = a - b
    sd = d.std(ddof=1)
    if sd == 0.0:
        raise ZeroVarianceError("paired differences have zero variance")
    t = d.mean() / (sd / np.sqrt(n))
    return float(t), t_sf_two_sided(t, n - 1)


SCORE_COLUMNS = ("frame_index", "method", "false_pos", "false_neg", "gt_size", "error")


def write_scores_csv(fh, rows):
    """Write ``(frame_index, method, FrameScore)`` rows plus per-method means
    and pairwise t-tests.
    """
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SCORE_COLUMNS)
    per_method = {}
    for idx, method, score in rows:
        writer.writerow([idx, method, score.false_pos, score.false_neg, score.gt_size,
                         f"{score.error:.6f}"])
        per_method.setdefault(method, []).append(score.error)
    for method, errs in per_method.items():
        writer.writerow(["mean", method, "", "", "", f"{np.mean(errs):.6f}"])
    names = list(per_method)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            try:
                t, p = paired_t_test(per_method[a], per_method[b])
                writer.writerow(["ttest", f"{a}-{b}", "", "", "", f"t={t:.6f} p={p:.6g}"])
            except ZeroVarianceError:
                writer.writerow(["ttest", f"{a}-{b}", "", "", "", "identical methods"])
            except ValueError as exc:
                writer.writerow(["ttest", f"{a}-{b}", "", "", "", f"n/a ({exc})"])

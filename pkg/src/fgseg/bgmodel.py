"""Static per-pixel background model from percentile-trimmed frame samples."""

import struct
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

_MAGIC = b"FGBG"
_HEADER = struct.Struct("<4sIII")
MIN_SAMPLES = 8


@dataclass(frozen=True)
class ModelConfig:
    sample_stride: int = 4
    lower_pct: float = 0.25
    upper_pct: float = 0.75
    std_floor: float = 1.0 / 255.0

    def __post_init__(self):
        if self.sample_stride < 1:
            raise ValueError(f"sample_stride must be >= 1, got {self.sample_stride}")
        if not 0.0 <= self.lower_pct < self.upper_pct <= 1.0:
            raise ValueError(f"need 0 <= lower_pct < upper_pct <= 1, got "
                             f"{self.lower_pct}, {self.upper_pct}")
        if not self.std_floor > 0:
            raise ValueError(f"std_floor must be positive, got {self.std_floor}")


@dataclass(frozen=True)
class BackgroundModel:
    """Per pixel-channel mean and standard deviation, arrays of shape (H, W, C)."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        if self.mean.shape != self.std.shape or self.mean.ndim != 3:
            raise ValueError(f"mean {self.mean.shape} and std {self.std.shape} must be equal (H, W, C)")

    @property
    def shape(self):
        return self.mean.shape

    def save(self, path):
        h, w, c = self.mean.shape
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, h, w, c))
            fh.write(np.ascontiguousarray(self.mean, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(self.std, dtype="<f8").tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            raw = fh.read()
        if len(raw) < _HEADER.size:
            raise ValueError(f"{path}: truncated background model header")
        magic, h, w, c = _HEADER.unpack_from(raw)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a background model file")
        n = h * w * c
        if len(raw) != _HEADER.size + 16 * n:
            raise ValueError(f"{path}: expected {n} mean and std values")
        values = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).astype(np.float64)
        return cls(values[:n].reshape(h, w, c), values[n:].reshape(h, w, c))


def z_span(lower, upper):
    """Width of the [lower, upper] quantile band of a standard normal."""
    if lower <= 0.0 or upper >= 1.0:
        return np.inf
    unit = NormalDist()
    return unit.inv_cdf(upper) - unit.inv_cdf(lower)


def build_background(frames, cfg=ModelConfig()):
    """Estimate the background from every ``cfg.sample_stride``-th frame.

    Samples per pixel-channel are sorted and only those whose rank fraction
    ``k / (n - 1)`` lies in ``[lower_pct, upper_pct]`` are averaged. The
    spread is the interquantile range rescaled to a normal standard
    deviation, floored at ``cfg.std_floor``.
    """
    frames = list(frames)
    sampled = frames[::cfg.sample_stride]
    if len(sampled) < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} sampled frames, got {len(sampled)} "
                         f"({len(frames)} frames at stride {cfg.sample_stride})")
    arrays = []
    for k, f in enumerate(sampled):
        a = np.asarray(f, dtype=np.float64)
        if a.ndim == 2:
            a = a[:, :, None]
        if arrays and a.shape != arrays[0].shape:
            raise ValueError(f"frame {k * cfg.sample_stride} has shape {a.shape}, "
                             f"expected {arrays[0].shape}")
        arrays.append(a)
    stack = np.sort(np.stack(arrays), axis=0)
    n = stack.shape[0]

    # tolerance absorbs rounding in pct*(n-1) when it is meant to be integral
    lo = int(np.ceil(cfg.lower_pct * (n - 1) - 1e-9))
    hi = int(np.floor(cfg.upper_pct * (n - 1) + 1e-9))
    kept = stack[lo:hi + 1]
    base = kept[0]
    mean = base + (kept - base).mean(axis=0)

    span = z_span(cfg.lower_pct, cfg.upper_pct)
    if np.isfinite(span):
        q = np.quantile(stack, [cfg.lower_pct, cfg.upper_pct], axis=0)
        spread = (q[1] - q[0]) / span
    else:
        spread = kept.std(axis=0, ddof=1) if len(kept) > 1 else np.zeros_like(mean)
    std = np.maximum(spread, cfg.std_floor)
    return BackgroundModel(mean, std)

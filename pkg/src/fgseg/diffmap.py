"""Normalised frame-vs-background difference, with optional shadow tolerance."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ShadowConfig:
    """When enabled, 3-channel frames and models are read as H, S, V."""

    enabled: bool = False
    v_discount: float = 0.05

    def __post_init__(self):
        if not 0.0 <= self.v_discount <= 1.0:
            raise ValueError(f"v_discount must lie in [0, 1], got {self.v_discount}")


def difference(frame, model, shadow=ShadowConfig()):
    """Per-pixel sum over channels of |frame - mean| / std, shape (H, W).

    With ``shadow.enabled`` on 3-channel input the hue term uses circular
    distance weighted by the smaller saturation, and a darkening of V by at
    most ``v_discount`` contributes nothing.
    """
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim == 2:
        frame = frame[:, :, None]
    if frame.shape != model.mean.shape:
        raise ValueError(f"frame shape {frame.shape} does not match model shape {model.mean.shape}")
    absdiff = np.abs(frame - model.mean)
    if shadow.enabled and frame.shape[2] == 3:
        dh = absdiff[..., 0]
        dh = np.minimum(dh, 1.0 - dh) * np.minimum(frame[..., 1], model.mean[..., 1])
        darkening = model.mean[..., 2] - frame[..., 2]
        dv = np.where((darkening > 0.0) & (darkening <= shadow.v_discount), 0.0, absdiff[..., 2])
        absdiff = np.stack([dh, absdiff[..., 1], dv], axis=2)
    return (absdiff / model.std).sum(axis=2)


def threshold(diff, tau):
    return np.asarray(diff) > tau


def difference_to_gray(diff, tau):
    """Scale ``diff`` from [0, 4*tau] onto [0, 1] for viewing."""
    return np.clip(np.asarray(diff, dtype=np.float64) / (4.0 * tau), 0.0, 1.0)


def save_difference(diff, path, tau):
    """Dump a difference map as an 8-bit P5 PGM clipped at 4*tau."""
    gray = np.rint(difference_to_gray(diff, tau) * 255.0).astype(np.uint8)
    h, w = gray.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(gray.tobytes())


"""Raster containers, colour conversion and lossless image IO.

Images are float64 arrays of shape (H, W, C), C in {1, 3}, samples in
[0, 1]. Masks are boolean arrays of shape (H, W), True = foreground.
"""

import os
import re

import numpy as np
from PIL import Image as PILImage


class ImageFormatError(ValueError):
    """Unreadable or unsupported image file."""


def as_image(data):
    """Validate and normalise ``data`` into an (H, W, C) float image."""
    img = np.asarray(data, dtype=np.float64)
    if img.ndim == 2:
        img = img[:, :, None]
    if img.ndim != 3 or img.shape[2] not in (1, 3):
        raise ValueError(f"image must be HxW, HxWx1 or HxWx3, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image must be non-empty, got shape {img.shape}")
    if not np.all((img >= 0.0) & (img <= 1.0)):
        raise ValueError("image samples must lie in [0, 1]")
    return img


def as_mask(data):
    mask = np.asarray(data)
    if mask.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {mask.shape}")
    return mask.astype(bool, copy=False)


_PNM_HEADER = re.compile(rb"(P[56])(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)"
                         rb"(?:\s+|#[^\n]*\n)+(\d+)\s")


def _read_pnm(path, raw):
    m = _PNM_HEADER.match(raw)
    if m is None:
        raise ImageFormatError(f"{path}: malformed PGM/PPM header")
    magic, width, height, maxval = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
    if not 0 < maxval < 256:
        raise ImageFormatError(f"{path}: unsupported maxval {maxval} (only 8-bit is supported)")
    channels = 1 if magic == b"P5" else 3
    count = width * height * channels
    body = raw[m.end():m.end() + count]
    if width < 1 or height < 1 or len(body) != count:
        raise ImageFormatError(f"{path}: truncated pixel data")
    pixels = np.frombuffer(body, dtype=np.uint8).reshape(height, width, channels)
    if pixels.max(initial=0) > maxval:
        raise ImageFormatError(f"{path}: sample exceeds maxval {maxval}")
    return pixels.astype(np.float64) / maxval


def _read_png(path):
    try:
        with PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGB")
                mode = "RGB"
            if mode not in ("L", "RGB"):
                raise ImageFormatError(f"{path}: unsupported PNG mode {mode!r} (need 8-bit gray or RGB)")
            pixels = np.asarray(im, dtype=np.uint8)
    except (PILImage.UnidentifiedImageError, SyntaxError, OSError) as exc:
        if isinstance(exc, FileNotFoundError):
            raise
        raise ImageFormatError(f"{path}: unreadable PNG ({exc})") from exc
    if pixels.ndim == 2:
        pixels = pixels[:, :, None]
    return pixels.astype(np.float64) / 255.0


def load_image(path):
    """Read a P5/P6 PNM or 8-bit PNG file into an (H, W, C) float image."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:2] in (b"P5", b"P6"):
        return _read_pnm(path, raw)
    if raw[:8] == b"\x89PNG\r\n\x1a\n":
        return _read_png(path)
    raise ImageFormatError(f"{path}: unsupported image format")


def save_image(img, path):
    """Write an image losslessly; ``.png`` gives PNG, anything else PGM/PPM."""
    img = as_image(img)
    pixels = np.rint(img * 255.0).astype(np.uint8)
    h, w, c = pixels.shape
    if os.fspath(path).lower().endswith(".png"):
        PILImage.fromarray(pixels[:, :, 0] if c == 1 else pixels, mode="L" if c == 1 else "RGB").save(path)
        return
    magic = b"P5" if c == 1 else b"P6"
    with open(path, "wb") as fh:
        fh.write(b"%s\n%d %d\n255\n" % (magic, w, h))
        fh.write(pixels.tobytes())


def save_mask(mask, path):
    """Write ``mask`` as a P5 PGM with foreground 255 and background 0."""
    mask = as_mask(mask)
    h, w = mask.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(np.where(mask, 255, 0).astype(np.uint8).tobytes())


def load_mask(path):
    """Read a mask file; any nonzero sample in any channel is foreground."""
    return load_image(path).max(axis=2) > 0.0


def rgb_to_hsv(img):
    """Hexcone RGB to HSV, every channel in [0, 1]; hue of greys is 0."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"rgb_to_hsv needs a 3-channel image, got shape {img.shape}")
    r, g, b = img[..., 0], img[..., 1], img[..., 2]
    v = img.max(axis=2)
    c = v - img.min(axis=2)
    chroma = c > 0
    safe_c = np.where(chroma, c, 1.0)
    h = np.where(v == r, ((g - b) / safe_c) % 6.0,
                 np.where(v == g, (b - r) / safe_c + 2.0, (r - g) / safe_c + 4.0))
    h = np.where(chroma, h / 6.0, 0.0)
    h = np.where(h >= 1.0, h - 1.0, h)
    s = np.where(v > 0, c / np.where(v > 0, v, 1.0), 0.0)
    return np.stack([h, s, v], axis=2)

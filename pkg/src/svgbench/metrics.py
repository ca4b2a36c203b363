"""Rasterization entry points and pixel metrics.

The penalty protocol lives here: any failure to render a document (or a
single animation frame) yields the all-black image instead of an error, so
invalid outputs are scored, never skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .core.model import SvgDocument
from .core.parser import MalformedXml, NotSvg, parse_svg
from .render.animate import document_at_time, resolve_duration
from .render.scene import RenderError, SceneRenderer, render_document

PSNR_CAP = 100.0

# SSIM parameters: 11x11 Gaussian window, sigma 1.5, the usual stabilizers
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2


class DimensionMismatch(ValueError):
    pass


class TooSmall(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass
class RasterImage:
    """Fixed-size 8-bit RGB buffer, white-composited."""

    data: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        if self.data.dtype != np.uint8 or self.data.ndim != 3 or self.data.shape[2] != 3:
            raise ValueError("RasterImage wants uint8 HxWx3 data")

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @staticmethod
    def black(size: int) -> "RasterImage":
        return RasterImage(np.zeros((size, size, 3), dtype=np.uint8))

    @staticmethod
    def white(size: int) -> "RasterImage":
        return RasterImage(np.full((size, size, 3), 255, dtype=np.uint8))


@dataclass
class RenderOutcome:
    """Either a successful render or the all-black penalty image."""

    image: RasterImage
    penalized: bool

    @staticmethod
    def ok(image: RasterImage) -> "RenderOutcome":
        return RenderOutcome(image, penalized=False)

    @staticmethod
    def penalty(size: int) -> "RenderOutcome":
        return RenderOutcome(RasterImage.black(size), penalized=True)


def rasterize(doc: SvgDocument, size: int = 512) -> RenderOutcome:
    """Draw the document at size x size over white; failures penalize."""
    if size < 16:
        raise ValueError("render size must be at least 16")
    try:
        pixels = render_document(doc, size)
    except (RenderError, ValueError, OverflowError):
        return RenderOutcome.penalty(size)
    return RenderOutcome.ok(RasterImage(pixels))


def rasterize_text(text: str, size: int = 512) -> RenderOutcome:
    """Parse + rasterize, penalizing parse failures too."""
    try:
        doc = parse_svg(text)
    except (MalformedXml, NotSvg):
        return RenderOutcome.penalty(size)
    return rasterize(doc, size)


def validate_renderable(doc: SvgDocument) -> bool:
    """True iff the rasterizer accepts the document without error."""
    try:
        SceneRenderer(doc, 512).validate()
    except (RenderError, ValueError, OverflowError):
        return False
    return True


def rasterize_animation(
    doc: SvgDocument,
    size: int = 512,
    n_frames: int = 8,
    duration: Optional[float] = None,
) -> list[RenderOutcome]:
    """Frames at k * duration / (n_frames - 1); static documents repeat."""
    if n_frames < 1:
        raise ValueError("need at least one frame")
    if duration is None:
        duration = resolve_duration(doc)
    if duration is None or duration <= 0:
        # static document: sample once, replicate
        frame = rasterize(doc, size)
        return [frame] * n_frames
    timestamps = (
        [0.0]
        if n_frames == 1
        else [duration * k / (n_frames - 1) for k in range(n_frames)]
    )
    frames = []
    for t in timestamps:
        try:
            snapshot = document_at_time(doc, t)
        except Exception:
            frames.append(RenderOutcome.penalty(size))
            continue
        frames.append(rasterize(snapshot, size))
    return frames


def rasterize_animation_text(
    text: str, size: int = 512, n_frames: int = 8, duration: Optional[float] = None
) -> list[RenderOutcome]:
    try:
        doc = parse_svg(text)
    except (MalformedXml, NotSvg):
        return [RenderOutcome.penalty(size) for _ in range(n_frames)]
    return rasterize_animation(doc, size, n_frames, duration)


# ---------------------------------------------------------------------------
# pixel metrics
# ---------------------------------------------------------------------------

def _check_dims(a: RasterImage, b: RasterImage) -> None:
    if a.data.shape != b.data.shape:
        raise DimensionMismatch(f"{a.data.shape} vs {b.data.shape}")


def mse(a: RasterImage, b: RasterImage) -> float:
    _check_dims(a, b)
    diff = a.data.astype(np.float64) - b.data.astype(np.float64)
    return float(np.mean(diff * diff))


def psnr(a: RasterImage, b: RasterImage) -> float:
    """10*log10(255^2 / MSE) in dB, capped to [0, 100]; identical -> 100."""
    err = mse(a, b)
    if err == 0.0:
        return PSNR_CAP
    value = 10.0 * math.log10(255.0 * 255.0 / err)
    return float(min(max(value, 0.0), PSNR_CAP))


def _gaussian_kernel1d(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    x = np.arange(size, dtype=np.float64) - half
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _luma(img: RasterImage) -> np.ndarray:
    rgb = img.data.astype(np.float64)
    # ITU-R BT.601
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def _window_mean(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable valid-mode correlation."""
    from scipy.ndimage import correlate1d

    half = len(kernel) // 2
    out = correlate1d(x, kernel, axis=0, mode="constant")
    out = correlate1d(out, kernel, axis=1, mode="constant")
    return out[half:-half, half:-half]


def ssim(a: RasterImage, b: RasterImage) -> float:
    """Mean local SSIM on BT.601 luma, 11x11 Gaussian window, sigma 1.5."""
    _check_dims(a, b)
    if min(a.height, a.width) < SSIM_WINDOW:
        raise TooSmall(f"images must be at least {SSIM_WINDOW} px per side")
    x = _luma(a)
    y = _luma(b)
    kernel = _gaussian_kernel1d(SSIM_WINDOW, SSIM_SIGMA)
    mu_x = _window_mean(x, kernel)
    mu_y = _window_mean(y, kernel)
    xx = _window_mean(x * x, kernel)
    yy = _window_mean(y * y, kernel)
    xy = _window_mean(x * y, kernel)
    var_x = xx - mu_x * mu_x
    var_y = yy - mu_y * mu_y
    cov = xy - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)
    den = (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    return float(np.mean(num / den))


_METRICS = {"ssim": ssim, "psnr": psnr, "mse": mse}


def video_metric(
    frames_a: Iterable[RenderOutcome],
    frames_b: Iterable[RenderOutcome],
    metric: str,
) -> float:
    """Arithmetic mean of a per-frame metric; penalized frames score as the
    black image they carry."""
    fa, fb = list(frames_a), list(frames_b)
    if len(fa) != len(fb):
        raise LengthMismatch(f"{len(fa)} vs {len(fb)} frames")
    if not fa:
        raise LengthMismatch("empty frame lists")
    fn = _METRICS[metric]
    return float(np.mean([fn(x.image, y.image) for x, y in zip(fa, fb)]))

"""Label activation maps: weighted sums of penultimate feature-map channels,
min-max normalized, upsampled, and rendered as heatmap overlays.

The weighted sum accumulates channels in index order so results are
bit-reproducible against a naive per-pixel loop. Per-label bias terms are
deliberately absent: a constant shift is absorbed by min-max normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LabelSet


@dataclass(frozen=True)
class FeatureMapDump:
    """A C x H x W activation tensor dumped for one source image."""

    data: np.ndarray
    source_image_id: str = ""
    source_image_size: tuple[int, int] | None = None  # (height, width) in pixels

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(f"feature maps must be C x H x W, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("feature maps must be finite")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True)
class HeadWeights:
    """K x C classification-head weight matrix, one row per label."""

    weights: np.ndarray
    label_names: tuple[str, ...]

    def __post_init__(self) -> None:
        arr = np.asarray(self.weights, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"head weights must be K x C, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("head weights must be finite")
        names = tuple(self.label_names)
        if len(names) != arr.shape[0]:
            raise ValueError(
                f"{len(names)} label names for {arr.shape[0]} weight rows"
            )
        LabelSet(names)  # validates uniqueness/non-emptiness
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "weights", arr)
        object.__setattr__(self, "label_names", names)

    @property
    def k(self) -> int:
        return self.weights.shape[0]

    @property
    def channels(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class ActivationMap:
    """Raw weighted-sum map plus its min-max normalization into [0, 1]."""

    raw: np.ndarray
    normalized: np.ndarray
    label_index: int


def _normalize(raw: np.ndarray) -> np.ndarray:
    lo = raw.min()
    hi = raw.max()
    if hi > lo:
        return (raw - lo) / (hi - lo)
    # constant map: midpoint rather than a 0/0
    return np.full_like(raw, 0.5)


def compute_lam(features: FeatureMapDump, weights: HeadWeights, label: int) -> ActivationMap:
    """Per-pixel weighted sum of channels for one label's weight vector."""
    c, h, w = features.shape
    if weights.channels != c:
        raise ValueError(
            f"head weights have {weights.channels} channels, features have {c}"
        )
    if not (0 <= label < weights.k):
        raise ValueError(f"label index {label} outside 0..{weights.k - 1}")
    row = weights.weights[label]
    raw = np.zeros((h, w), dtype=np.float64)
    for k in range(c):  # channel-ordered accumulation, matches the loop oracle bit for bit
        raw += row[k] * features.data[k]
    return ActivationMap(raw=raw, normalized=_normalize(raw), label_index=label)


def upsample(amap: ActivationMap, target: tuple[int, int]) -> ActivationMap:
    """Bilinear, corner-aligned resize of the raw map; renormalizes afterward.

    Output values stay within [min, max] of the input, and corner pixels are
    reproduced exactly.
    """
    th, tw = int(target[0]), int(target[1])
    if th <= 0 or tw <= 0:
        raise ValueError(f"target size {target} must be positive")
    sh, sw = amap.raw.shape
    if th < sh or tw < sw:
        raise ValueError(f"target {target} smaller than source {(sh, sw)}")
    raw = _bilinear(amap.raw, th, tw)
    return ActivationMap(raw=raw, normalized=_normalize(raw), label_index=amap.label_index)


def _bilinear(src: np.ndarray, th: int, tw: int) -> np.ndarray:
    sh, sw = src.shape
    ys = np.arange(th) * ((sh - 1) / (th - 1)) if th > 1 else np.zeros(th)
    xs = np.arange(tw) * ((sw - 1) / (tw - 1)) if tw > 1 else np.zeros(tw)
    y0 = np.clip(np.floor(ys).astype(int), 0, sh - 1)
    x0 = np.clip(np.floor(xs).astype(int), 0, sw - 1)
    y1 = np.minimum(y0 + 1, sh - 1)
    x1 = np.minimum(x0 + 1, sw - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    a = src[np.ix_(y0, x0)]
    b = src[np.ix_(y0, x1)]
    c = src[np.ix_(y1, x0)]
    d = src[np.ix_(y1, x1)]
    top = a * (1 - wx) + b * wx
    bottom = c * (1 - wx) + d * wx
    return top * (1 - wy) + bottom * wy


def _build_colormap() -> np.ndarray:
    """256-entry blue -> cyan -> yellow -> red lookup table, bit-exact."""
    lut = np.zeros((256, 3), dtype=np.uint8)
    for i in range(256):
        if i <= 85:
            ramp = int(i * 255 / 85 + 0.5)
            lut[i] = (0, ramp, 255)
        elif i <= 170:
            ramp = int((i - 85) * 255 / 85 + 0.5)
            lut[i] = (ramp, 255, 255 - ramp)
        else:
            ramp = int((i - 170) * 255 / 85 + 0.5)
            lut[i] = (255, 255 - ramp, 0)
    lut.setflags(write=False)
    return lut


COLORMAP = _build_colormap()


def render_overlay(amap: ActivationMap, base_image: np.ndarray, opacity: float = 0.5) -> np.ndarray:
    """Alpha-blend the colormapped activation over a grayscale base image.

    ``base_image`` is an H x W uint8 raster matching the (upsampled) map size.
    Returns an H x W x 3 uint8 color raster.
    """
    base = np.asarray(base_image)
    if base.ndim != 2:
        raise ValueError(f"base image must be grayscale H x W, got shape {base.shape}")
    if base.shape != amap.normalized.shape:
        raise ValueError(
            f"activation map {amap.normalized.shape} does not match base image {base.shape}"
        )
    if not (0.0 <= opacity <= 1.0):
        raise ValueError(f"opacity {opacity} outside [0, 1]")
    idx = np.clip(np.floor(amap.normalized * 255.0 + 0.5).astype(np.int32), 0, 255)
    heat = COLORMAP[idx].astype(np.float64)
    gray = base.astype(np.float64)[:, :, None]
    blended = (1.0 - opacity) * gray + opacity * heat
    return np.rint(blended).clip(0, 255).astype(np.uint8)

"""Full-reference image quality metrics: PSNR and windowed SSIM."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .exceptions import ImageTooSmallError
from .validation import as_image, check_same_shape


@dataclass(frozen=True)
class MetricConfig:
    peak: float = 255.0
    ssim_window: int = 11
    ssim_sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03

    def __post_init__(self):
        if not self.peak > 0:
            raise ValueError("peak must be positive")
        if self.ssim_window < 1 or self.ssim_window % 2 == 0:
            raise ValueError("ssim_window must be a positive odd integer")
        if not self.ssim_sigma > 0:
            raise ValueError("ssim_sigma must be positive")
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("k1 and k2 must be positive")


def psnr(ref, test, config: MetricConfig | None = None) -> float:
    """Peak signal-to-noise ratio in dB; identical images give +inf."""
    cfg = config or MetricConfig()
    a = as_image(ref, "ref")
    b = as_image(test, "test")
    check_same_shape(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(cfg.peak**2 / mse)


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    offset = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-(offset**2) / (2.0 * sigma**2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(ref, test, config: MetricConfig | None = None) -> float:
    """Mean structural similarity over Gaussian-weighted local windows.

    Local means, variances and covariance come from a valid-mode convolution
    with a normalized Gaussian window, so border pixels without a full window
    do not contribute. Symmetric in its arguments and exactly 1.0 for
    identical inputs.
    """
    cfg = config or MetricConfig()
    a = as_image(ref, "ref")
    b = as_image(test, "test")
    check_same_shape(a, b)
    if min(a.shape) < cfg.ssim_window:
        raise ImageTooSmallError(
            f"image {a.shape} is smaller than the {cfg.ssim_window}-pixel window"
        )

    w = _gaussian_window(cfg.ssim_window, cfg.ssim_sigma)
    mu1 = convolve2d(a, w, mode="valid")
    mu2 = convolve2d(b, w, mode="valid")
    s1 = convolve2d(a * a, w, mode="valid") - mu1 * mu1
    s2 = convolve2d(b * b, w, mode="valid") - mu2 * mu2
    s12 = convolve2d(a * b, w, mode="valid") - mu1 * mu2

    c1 = (cfg.k1 * cfg.peak) ** 2
    c2 = (cfg.k2 * cfg.peak) ** 2
    num = (2.0 * mu1 * mu2 + c1) * (2.0 * s12 + c2)
    den = (mu1 * mu1 + mu2 * mu2 + c1) * (s1 + s2 + c2)
    return float(np.mean(num / den))

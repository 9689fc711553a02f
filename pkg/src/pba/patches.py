"""Image <-> patch-matrix conversion and overlap-weighted reassembly.

Patches are addressed in row-major grid order; pixels inside a patch are read
in column-major order. Only fully interior patches are taken (no padding), so
pixels that no patch covers keep the reference image value on reassembly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import GeometryMismatchError
from .validation import as_image, as_matrix


@dataclass(frozen=True)
class PatchGeometry:
    """Square patch grid over a fixed image size."""

    patch_side: int
    stride: int
    image_width: int
    image_height: int

    def __post_init__(self):
        for name in ("patch_side", "stride", "image_width", "image_height"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.patch_side > min(self.image_width, self.image_height):
            raise GeometryMismatchError(
                f"patch_side {self.patch_side} exceeds image "
                f"{self.image_width}x{self.image_height}"
            )

    @property
    def grid_rows(self) -> int:
        return (self.image_height - self.patch_side) // self.stride + 1

    @property
    def grid_cols(self) -> int:
        return (self.image_width - self.patch_side) // self.stride + 1

    @property
    def n_patches(self) -> int:
        return self.grid_rows * self.grid_cols

    @property
    def patch_dim(self) -> int:
        return self.patch_side * self.patch_side

    def origins(self):
        """Yield (row, col) of each patch's top-left pixel in row-major grid order."""
        for r in range(self.grid_rows):
            for c in range(self.grid_cols):
                yield r * self.stride, c * self.stride


def _check_image_geometry(img: np.ndarray, geom: PatchGeometry) -> None:
    if img.shape != (geom.image_height, geom.image_width):
        raise GeometryMismatchError(
            f"image shape {img.shape} does not match geometry "
            f"{geom.image_height}x{geom.image_width}"
        )


def extract_patches(img, geom: PatchGeometry) -> np.ndarray:
    """Collect all patches of ``img`` into a (patch_dim, n_patches) matrix."""
    image = as_image(img)
    _check_image_geometry(image, geom)
    p = geom.patch_side
    out = np.empty((geom.patch_dim, geom.n_patches))
    for m, (r, c) in enumerate(geom.origins()):
        out[:, m] = image[r : r + p, c : c + p].ravel(order="F")
    return out


def cover_counts(geom: PatchGeometry) -> np.ndarray:
    """Per-pixel count of patches covering each pixel."""
    count = np.zeros((geom.image_height, geom.image_width))
    p = geom.patch_side
    for r, c in geom.origins():
        count[r : r + p, c : c + p] += 1.0
    return count


def reassemble(patches, reference, geom: PatchGeometry, gamma: float) -> np.ndarray:
    """Merge patch estimates back into an image.

    Every pixel becomes ``(gamma * reference + sum of covering patch values)
    / (gamma + cover_count)``, the closed-form minimizer of the quadratic
    fidelity-plus-averaging objective. Pixels covered by no patch keep the
    reference value.
    """
    mat = as_matrix(patches, "patches")
    ref = as_image(reference, "reference")
    _check_image_geometry(ref, geom)
    if mat.shape != (geom.patch_dim, geom.n_patches):
        raise GeometryMismatchError(
            f"patch matrix shape {mat.shape} does not match geometry "
            f"({geom.patch_dim}, {geom.n_patches})"
        )
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")

    p = geom.patch_side
    num = gamma * ref
    count = np.zeros_like(ref)
    for m, (r, c) in enumerate(geom.origins()):
        num[r : r + p, c : c + p] += mat[:, m].reshape((p, p), order="F")
        count[r : r + p, c : c + p] += 1.0
    den = gamma + count
    safe = np.where(den > 0.0, den, 1.0)
    return np.where(den > 0.0, num / safe, ref)

"""8-bit portable graymap I/O, plain (P2) and binary (P5).

Images are read into float64 arrays; writing quantizes with
round-half-to-even and clips to [0, 255].
"""

from __future__ import annotations

import numpy as np

from .exceptions import PgmError
from .validation import as_image

_WHITESPACE = frozenset(b" \t\r\n\v\f")
_COMMENT = ord("#")


def quantize(img) -> np.ndarray:
    """Round-half-to-even, clip to [0, 255], return uint8."""
    arr = as_image(img)
    return np.clip(np.rint(arr), 0.0, 255.0).astype(np.uint8)


def _read_tokens(data: bytes, count: int):
    """First ``count`` header tokens and the offset just past the last one.

    Comments (# to end of line) may appear anywhere between tokens.
    """
    tokens = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and (data[i] in _WHITESPACE or data[i] == _COMMENT):
            if data[i] == _COMMENT:
                while i < n and data[i] != 0x0A:
                    i += 1
            else:
                i += 1
        if i >= n:
            raise PgmError("truncated PGM header")
        start = i
        while i < n and data[i] not in _WHITESPACE and data[i] != _COMMENT:
            i += 1
        tokens.append(data[start:i])
    return tokens, i


def read_pgm(path) -> np.ndarray:
    """Read a P2 or P5 graymap as a float64 array of shape (height, width)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 2 or data[:1] != b"P" or data[1:2] not in (b"2", b"5"):
        raise PgmError(f"{path}: not a P2/P5 PGM file")

    (magic, w_tok, h_tok, max_tok), offset = _read_tokens(data, 4)
    try:
        width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    except ValueError as exc:
        raise PgmError(f"{path}: malformed PGM header") from exc
    if width < 1 or height < 1:
        raise PgmError(f"{path}: bad dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise PgmError(f"{path}: only 8-bit graymaps are supported (maxval {maxval})")

    if magic == b"P5":
        raster = data[offset + 1 : offset + 1 + width * height]
        if len(raster) != width * height:
            raise PgmError(f"{path}: truncated raster")
        pixels = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    else:
        values = data[offset:].split()
        if len(values) != width * height:
            raise PgmError(
                f"{path}: expected {width * height} samples, found {len(values)}"
            )
        try:
            pixels = np.array([int(v) for v in values], dtype=np.float64)
        except ValueError as exc:
            raise PgmError(f"{path}: non-numeric sample data") from exc
    if pixels.max(initial=0.0) > maxval:
        raise PgmError(f"{path}: sample exceeds declared maxval {maxval}")
    return pixels.reshape((height, width))


def write_pgm(path, img, binary: bool = True) -> None:
    """Write an image as 8-bit PGM, binary P5 by default or plain P2."""
    arr = quantize(img)
    height, width = arr.shape
    if binary:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
            fh.write(arr.tobytes())
        return
    lines = [f"P2\n{width} {height}\n255"]
    flat = arr.ravel()
    for start in range(0, flat.size, 17):
        lines.append(" ".join(str(int(v)) for v in flat[start : start + 17]))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")

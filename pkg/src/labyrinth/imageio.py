"""Gray image I/O.

Binary PGM (P5, maxval 255) is the reference format and is encoded/decoded
here byte for byte. PNG goes through Pillow. Colour inputs are reduced to gray
with BT.601 luma, ``round(0.299 R + 0.587 G + 0.114 B)``.

Images are numpy ``uint8`` arrays of shape ``(height, width)``; pixel (x, y)
is ``img[y, x]``.
"""

import os

import numpy as np
from PIL import Image

from .errors import (
    InputFormatError,
    MalformedHeaderError,
    TruncatedPayloadError,
    UnsupportedMaxvalError,
    UsageError,
)

PGM_EXTENSIONS = (".pgm", ".pnm")
PNG_EXTENSIONS = (".png",)

_WHITESPACE = b" \t\n\r\x0b\x0c"


class _HeaderReader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos : self.pos + 1]
            if c in _WHITESPACE:
                self.pos += 1
            elif c == b"#":
                while self.pos < len(data) and data[self.pos] not in (0x0A, 0x0D):
                    self.pos += 1
            else:
                break

    def integer(self, name):
        self.skip_space()
        start = self.pos
        data = self.data
        while self.pos < len(data) and 0x30 <= data[self.pos] <= 0x39:
            self.pos += 1
        if self.pos == start:
            if start >= len(data):
                raise MalformedHeaderError(f"header ends before {name}", start)
            raise MalformedHeaderError(f"expected decimal {name}", start)
        return int(data[start : self.pos]), start


def read_pgm(data):
    """Decode a binary PGM byte string into a ``(height, width)`` uint8 array.

    Header comments and any whitespace between fields are accepted. Bytes after
    the declared payload are ignored.
    """
    data = bytes(data)
    if data[:2] != b"P5":
        raise MalformedHeaderError("missing P5 magic number", 0)
    reader = _HeaderReader(data)
    reader.pos = 2
    if reader.pos < len(data) and data[reader.pos : reader.pos + 1] not in _WHITESPACE + b"#":
        raise MalformedHeaderError("magic number must be followed by whitespace", reader.pos)
    width, at = reader.integer("width")
    if width == 0:
        raise MalformedHeaderError("width must be positive", at)
    height, at = reader.integer("height")
    if height == 0:
        raise MalformedHeaderError("height must be positive", at)
    maxval, at = reader.integer("maxval")
    if maxval != 255:
        raise UnsupportedMaxvalError(f"maxval {maxval} not supported (only 255)", at)
    if reader.pos >= len(data):
        raise TruncatedPayloadError("no whitespace after maxval", reader.pos)
    if data[reader.pos : reader.pos + 1] not in _WHITESPACE:
        raise MalformedHeaderError("maxval must be followed by a single whitespace byte", reader.pos)
    start = reader.pos + 1
    size = width * height
    if len(data) - start < size:
        raise TruncatedPayloadError(
            f"payload has {len(data) - start} of {size} bytes", len(data)
        )
    return np.frombuffer(data, dtype=np.uint8, count=size, offset=start).reshape(height, width).copy()


def write_pgm(image):
    """Canonical P5 encoding: ``P5\\n<w> <h>\\n255\\n`` then raw row-major bytes."""
    img = as_gray(image)
    height, width = img.shape
    return b"P5\n%d %d\n255\n" % (width, height) + np.ascontiguousarray(img).tobytes()


def as_gray(image):
    img = np.asarray(image)
    if img.ndim != 2 or img.size == 0:
        raise UsageError(f"expected a non-empty 2-D gray image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise UsageError("gray tones must lie in [0, 255]")
        img = img.astype(np.uint8)
    return img


def to_grayscale(rgb):
    """BT.601 luma of an 8-bit ``(..., 3)`` RGB array, rounded half up."""
    rgb = np.asarray(rgb)
    if rgb.shape[-1:] != (3,):
        raise UsageError(f"expected RGB pixels in the last axis, got shape {rgb.shape}")
    c = rgb.astype(np.float64)
    luma = 0.299 * c[..., 0] + 0.587 * c[..., 1] + 0.114 * c[..., 2]
    return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)


def _codec(path):
    ext = os.path.splitext(os.fspath(path))[1].lower()
    if ext in PGM_EXTENSIONS:
        return "pgm"
    if ext in PNG_EXTENSIONS:
        return "png"
    raise UsageError(f"unsupported image extension {ext!r} (use .pgm or .png)")


def read_image(path):
    """Read a PGM or PNG file as a gray image; colour PNGs are converted with BT.601."""
    if _codec(path) == "pgm":
        with open(path, "rb") as fh:
            return read_pgm(fh.read())
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode == "L":
                return np.array(im, dtype=np.uint8)
            if im.mode in ("I;16", "I;16B", "I", "F"):
                raise InputFormatError(f"{path}: {im.mode} images are not supported (8-bit only)")
            return to_grayscale(np.array(im.convert("RGB"), dtype=np.uint8))
    except (OSError, Image.DecompressionBombError) as exc:
        raise InputFormatError(f"{path}: cannot decode PNG: {exc}") from None


def write_image(path, image):
    codec = _codec(path)
    img = as_gray(image)
    if codec == "pgm":
        with open(path, "wb") as fh:
            fh.write(write_pgm(img))
    else:
        Image.fromarray(np.ascontiguousarray(img)).save(path, format="PNG")

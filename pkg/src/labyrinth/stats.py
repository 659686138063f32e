"""Local neighbourhood statistics and the two decision ratios.

Statistics are taken over the 8-neighbourhood of a pixel *excluding the pixel
itself*. Neighbours that fall outside the image are skipped and the count is
reduced accordingly, so corners see 3 neighbours and edge pixels see 5.
The variance is the population variance (divide by the count).

Both ratios divide by the local mean, which is zero on black regions; the
divisor is clamped below by ``eps_mean`` (1 tone unit unless overridden).
"""

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import UnsupportedImageError, UsageError

DEFAULT_EPS_MEAN = 1.0


@dataclass(frozen=True)
class NeighborhoodStats:
    mean: float
    variance: float
    count: int


@numba.njit(cache=True)
def neighborhood(img, x, y):
    """Return ``(mean, variance, count)`` of the in-bounds 8-neighbours of (x, y).

    Neighbours are visited in row-major order; the renderer relies on this
    function so that the statistics it acts on are exactly the ones
    :func:`local_stats` reports.
    """
    height, width = img.shape
    total = 0.0
    count = 0
    for dy in range(-1, 2):
        yy = y + dy
        if yy < 0 or yy >= height:
            continue
        for dx in range(-1, 2):
            xx = x + dx
            if (dx == 0 and dy == 0) or xx < 0 or xx >= width:
                continue
            total += img[yy, xx]
            count += 1
    mean = total / count
    acc = 0.0
    for dy in range(-1, 2):
        yy = y + dy
        if yy < 0 or yy >= height:
            continue
        for dx in range(-1, 2):
            xx = x + dx
            if (dx == 0 and dy == 0) or xx < 0 or xx >= width:
                continue
            d = img[yy, xx] - mean
            acc += d * d
    return mean, acc / count, count


@numba.njit(cache=True)
def r1_value(g, mean, eps_mean):
    return abs(g - mean) / max(mean, eps_mean)


@numba.njit(cache=True)
def r2_value(mean, variance, count, eps_mean):
    return math.sqrt(variance / count) / max(mean, eps_mean)


def check_image(image):
    """Validate a gray image and return it as a C-contiguous uint8 array.

    Raises :class:`UnsupportedImageError` when the image is not 2-D or is
    smaller than 2x2 (the neighbourhood is undefined for a lone row or column).
    """
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise UnsupportedImageError(f"expected a 2-D gray image, got shape {arr.shape}")
    height, width = arr.shape
    if width < 2 or height < 2:
        raise UnsupportedImageError(f"image must be at least 2x2, got {width}x{height}")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise UsageError("gray tones must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


def check_bounds(image, x, y):
    height, width = image.shape
    if not (0 <= x < width and 0 <= y < height):
        raise UsageError(f"pixel ({x}, {y}) outside {width}x{height} image")


def local_stats(image, x, y):
    """Mean, variance and neighbour count around column ``x``, row ``y``."""
    img = check_image(image)
    check_bounds(img, x, y)
    mean, variance, count = neighborhood(img, int(x), int(y))
    return NeighborhoodStats(mean, variance, count)


def ratio_r1(g, mean, eps_mean=DEFAULT_EPS_MEAN):
    """Relative deviation of tone ``g`` from the local mean, ``|g - mean| / mean``."""
    return float(r1_value(float(g), float(mean), float(eps_mean)))


def ratio_r2(stats, eps_mean=DEFAULT_EPS_MEAN):
    """Normalised local dispersion ``sqrt(variance / count) / mean``.

    Large values mark pixels sitting on a strong local gradient.
    """
    return float(r2_value(float(stats.mean), float(stats.variance), int(stats.count), float(eps_mean)))

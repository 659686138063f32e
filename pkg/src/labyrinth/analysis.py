"""Pattern metrics and parameter sweeps.

* change masks and their Hamming distance measure how much a threshold
  change alters the tiling;
* edge concentration compares the density of protected pixels close to a
  known edge set with the density everywhere else.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .errors import UsageError
from .render import Outcome, RenderParams, render

SWEEP_PARAMS = ("t", "v_thresh")


def change_mask(before, after):
    """Boolean ``(height, width)`` mask, True where the tones differ."""
    before = np.asarray(before)
    after = np.asarray(after)
    if before.shape != after.shape:
        raise UsageError(f"image shapes differ: {before.shape} vs {after.shape}")
    return before != after


def mask_distance(a, b):
    """Hamming distance between two change masks."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise UsageError(f"mask shapes differ: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))


def edge_set_mask(edge_set, shape):
    """Turn an edge set (boolean mask or iterable of ``(x, y)``) into a boolean mask."""
    if isinstance(edge_set, np.ndarray) and edge_set.dtype == bool:
        if edge_set.shape != tuple(shape):
            raise UsageError(f"edge mask shape {edge_set.shape} does not match {tuple(shape)}")
        return edge_set
    height, width = shape
    mask = np.zeros(shape, dtype=bool)
    for x, y in edge_set:
        if not (0 <= x < width and 0 <= y < height):
            raise UsageError(f"edge pixel ({x}, {y}) outside {width}x{height} image")
        mask[y, x] = True
    return mask


def edges_of(image):
    """Pixels that differ in tone from at least one 4-connected neighbour."""
    img = np.asarray(image).astype(np.int16)
    mask = np.zeros(img.shape, dtype=bool)
    dx = img[:, 1:] != img[:, :-1]
    dy = img[1:, :] != img[:-1, :]
    mask[:, 1:] |= dx
    mask[:, :-1] |= dx
    mask[1:, :] |= dy
    mask[:-1, :] |= dy
    return mask


def near_mask(edges, radius):
    """Pixels within Chebyshev distance ``radius`` of any edge pixel."""
    if radius < 0:
        raise UsageError(f"radius must be >= 0, got {radius}")
    if radius == 0:
        return edges.copy()
    return ndimage.binary_dilation(edges, structure=np.ones((3, 3), bool), iterations=radius)


def edge_concentration(trace, edge_set, radius=1):
    """Fraction of protected pixels near ``edge_set`` and away from it.

    Returns ``(near_fraction, far_fraction)``. A region that contains no
    pixels reports 0.
    """
    edges = edge_set_mask(edge_set, trace.shape)
    if not edges.any():
        raise UsageError("edge set is empty")
    near = near_mask(edges, radius)
    protected = trace.mask(Outcome.PROTECTED_R2)
    far = ~near
    near_fraction = np.count_nonzero(protected & near) / np.count_nonzero(near)
    n_far = np.count_nonzero(far)
    far_fraction = np.count_nonzero(protected & far) / n_far if n_far else 0.0
    return float(near_fraction), float(far_fraction)


def step_image(width=64, height=64, left=60, right=200):
    """Two-region test image: left half ``left``, right half ``right``."""
    img = np.full((height, width), left, dtype=np.uint8)
    img[:, width // 2 :] = right
    return img


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: tuple
    base: RenderParams = RenderParams()

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise UsageError(f"can only sweep {SWEEP_PARAMS}, got {self.param!r}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise UsageError("sweep needs at least one value")
        if any(not v > 0 for v in values):
            raise UsageError(f"sweep values must be > 0, got {values}")
        object.__setattr__(self, "values", values)

    def params_for(self, value):
        return replace(self.base, **{self.param: value})


@dataclass(frozen=True)
class SweepCell:
    value: float
    image: np.ndarray
    traces: list


def run_sweep(image, spec):
    """Render ``image`` once per sweep value with everything else (seed included) fixed."""
    cells = []
    for value in spec.values:
        out, traces = render(image, spec.params_for(value))
        cells.append(SweepCell(value, out, traces))
    return cells


def sweep_distances(image, cells):
    """Pairwise change-mask Hamming distances, keyed by ``(value_a, value_b)``."""
    masks = [change_mask(image, c.image) for c in cells]
    out = {}
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            out[(cells[i].value, cells[j].value)] = mask_distance(masks[i], masks[j])
    return out

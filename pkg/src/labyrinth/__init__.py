"""Labyrinthine tiling: a stochastic, statistics-driven non-photorealistic image filter."""

__version__ = "0.1.0"

from .errors import (
    InputFormatError,
    IntervalTableError,
    LabyrinthError,
    PGMError,
    UnsupportedImageError,
    UsageError,
)
from .imageio import read_image, read_pgm, to_grayscale, write_image, write_pgm
from .render import (
    DecisionTrace,
    Outcome,
    PixelDecision,
    RenderParams,
    process_pixel,
    read_trace,
    render,
    render_pass,
    write_trace,
)
from .rng import RandomSource
from .stats import NeighborhoodStats, local_stats, ratio_r1, ratio_r2
from .tones import ToneInterval, ToneIntervalTable, classify, default_table, load_table, sample_candidate

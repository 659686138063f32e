"""Labyrinthine tiling renderer.

Each pass visits every pixel once in row-major order starting at the top-left
corner and rewrites the image in place, so a pixel's neighbourhood already
contains the replacements made earlier in the same pass. At each pixel:

1. if the local dispersion ratio r2 exceeds ``v_thresh`` the pixel is
   protected and left alone;
2. otherwise, if the tone is within ``t`` of the local mean (r1 <= t) it is
   kept;
3. otherwise up to ``max_attempts`` candidates are drawn from the target range
   of the interval the current tone falls in, and the first one within ``t``
   of the local mean replaces the pixel;
4. if every candidate fails the pixel keeps its tone.

Passes share one random stream seeded from ``RenderParams.seed``.

Trace files are comma separated text, one header line
``pass,x,y,outcome,r1,r2,attempts,old,new`` then one line per decision in scan
order, ``\\n`` terminated. ``r1``/``r2`` are written as the shortest decimal
string that reads back to the same IEEE-754 double (Python ``repr``), so a
replayer can compare them exactly; the other fields are base-10 integers or
the outcome name.
"""

import enum
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import UsageError
from .rng import RandomSource
from .stats import DEFAULT_EPS_MEAN, check_bounds, check_image, neighborhood, r1_value, r2_value
from .tones import ToneIntervalTable, classify_index, default_table, draw_candidate

KEPT_R1 = 0
PROTECTED_R2 = 1
REPLACED = 2
EXHAUSTED = 3


class Outcome(str, enum.Enum):
    KEPT_R1 = "kept_r1"
    PROTECTED_R2 = "protected_r2"
    REPLACED = "replaced"
    EXHAUSTED = "exhausted"

    @property
    def code(self):
        return _CODES[self]


_OUTCOMES = (Outcome.KEPT_R1, Outcome.PROTECTED_R2, Outcome.REPLACED, Outcome.EXHAUSTED)
_CODES = {o: i for i, o in enumerate(_OUTCOMES)}

TRACE_HEADER = "pass,x,y,outcome,r1,r2,attempts,old,new"


@dataclass(frozen=True)
class RenderParams:
    t: float = 0.12
    v_thresh: float = 0.50
    max_attempts: int = 100
    passes: int = 1
    seed: int = 0
    table: ToneIntervalTable = field(default_factory=default_table)
    eps_mean: float = DEFAULT_EPS_MEAN

    def __post_init__(self):
        if not self.t > 0:
            raise UsageError(f"t must be > 0, got {self.t}")
        if not self.v_thresh > 0:
            raise UsageError(f"v_thresh must be > 0, got {self.v_thresh}")
        if int(self.max_attempts) != self.max_attempts or self.max_attempts < 1:
            raise UsageError(f"max_attempts must be a positive integer, got {self.max_attempts}")
        if int(self.passes) != self.passes or self.passes < 0:
            raise UsageError(f"passes must be a non-negative integer, got {self.passes}")
        if not self.eps_mean > 0:
            raise UsageError(f"eps_mean must be > 0, got {self.eps_mean}")
        if not isinstance(self.table, ToneIntervalTable):
            raise UsageError("table must be a ToneIntervalTable")

    def as_dict(self):
        return {
            "t": self.t,
            "v_thresh": self.v_thresh,
            "max_attempts": self.max_attempts,
            "passes": self.passes,
            "seed": self.seed,
            "eps_mean": self.eps_mean,
            "intervals": self.table.to_dict()["intervals"],
        }


@dataclass(frozen=True)
class PixelDecision:
    x: int
    y: int
    outcome: Outcome
    r1: float
    r2: float
    attempts: int
    old_tone: int
    new_tone: int
    mean: float = float("nan")


@dataclass(eq=False)
class DecisionTrace:
    """Per-pixel decisions of one pass, stored as (height, width) arrays.

    ``outcome`` holds integer codes (see :class:`Outcome`); ``mean`` is the
    local mean the decision was taken against and is not part of the text
    export.
    """

    pass_index: int
    outcome: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    attempts: np.ndarray
    old: np.ndarray
    new: np.ndarray
    mean: np.ndarray

    @classmethod
    def empty(cls, pass_index, height, width):
        shape = (height, width)
        return cls(
            pass_index,
            np.zeros(shape, np.int8),
            np.zeros(shape, np.float64),
            np.zeros(shape, np.float64),
            np.zeros(shape, np.int32),
            np.zeros(shape, np.uint8),
            np.zeros(shape, np.uint8),
            np.full(shape, np.nan),
        )

    @property
    def shape(self):
        return self.outcome.shape

    def __len__(self):
        return self.outcome.size

    def decision(self, x, y):
        return PixelDecision(
            x,
            y,
            _OUTCOMES[self.outcome[y, x]],
            float(self.r1[y, x]),
            float(self.r2[y, x]),
            int(self.attempts[y, x]),
            int(self.old[y, x]),
            int(self.new[y, x]),
            float(self.mean[y, x]),
        )

    @property
    def decisions(self):
        """All decisions in scan (row-major) order."""
        height, width = self.shape
        return [self.decision(x, y) for y in range(height) for x in range(width)]

    def __iter__(self):
        return iter(self.decisions)

    def mask(self, outcome):
        return self.outcome == Outcome(outcome).code

    def counts(self):
        codes = np.bincount(self.outcome.ravel(), minlength=len(_OUTCOMES))
        return {o.value: int(codes[o.code]) for o in _OUTCOMES}

    def __eq__(self, other):
        if not isinstance(other, DecisionTrace):
            return NotImplemented
        return self.pass_index == other.pass_index and all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("outcome", "r1", "r2", "attempts", "old", "new")
        )


@numba.njit(cache=True)
def _process(img, x, y, t, v_thresh, eps_mean, max_attempts, l_sup, t_inf, t_sup, state):
    mean, variance, count = neighborhood(img, x, y)
    g = np.int64(img[y, x])
    r1 = r1_value(float(g), mean, eps_mean)
    r2 = r2_value(mean, variance, count, eps_mean)
    if r2 > v_thresh:
        return PROTECTED_R2, r1, r2, mean, 0, g
    if r1 <= t:
        return KEPT_R1, r1, r2, mean, 0, g
    i = classify_index(g, l_sup)
    lo = float(t_inf[i])
    hi = float(t_sup[i])
    for attempt in range(1, max_attempts + 1):
        c = draw_candidate(lo, hi, state)
        if r1_value(c, mean, eps_mean) <= t:
            img[y, x] = np.uint8(c)
            return REPLACED, r1, r2, mean, attempt, np.int64(c)
    return EXHAUSTED, r1, r2, mean, max_attempts, g


@numba.njit(cache=True)
def _scan(img, t, v_thresh, eps_mean, max_attempts, l_sup, t_inf, t_sup, state,
          outcome, r1s, r2s, means, attempts, old, new):
    height, width = img.shape
    for y in range(height):
        for x in range(width):
            old[y, x] = img[y, x]
            code, r1, r2, mean, n, g = _process(
                img, x, y, t, v_thresh, eps_mean, max_attempts, l_sup, t_inf, t_sup, state
            )
            outcome[y, x] = code
            r1s[y, x] = r1
            r2s[y, x] = r2
            means[y, x] = mean
            attempts[y, x] = n
            new[y, x] = g


def _check_mutable(image):
    if not (
        isinstance(image, np.ndarray)
        and image.dtype == np.uint8
        and image.flags.c_contiguous
        and image.flags.writeable
    ):
        raise UsageError("in-place rendering needs a writable C-contiguous uint8 array")
    check_image(image)


def process_pixel(image, x, y, params, rng):
    """Run the keep/protect/replace decision for one pixel, updating ``image`` in place."""
    _check_mutable(image)
    check_bounds(image, x, y)
    old = int(image[y, x])
    table = params.table
    code, r1, r2, mean, n, new = _process(
        image, int(x), int(y), float(params.t), float(params.v_thresh), float(params.eps_mean),
        int(params.max_attempts), table.l_sup, table.t_inf, table.t_sup, rng.state,
    )
    return PixelDecision(int(x), int(y), _OUTCOMES[code], r1, r2, int(n), old, int(new), mean)


def render_pass(image, params, rng, pass_index=0):
    """One in-place raster pass over ``image``; returns its :class:`DecisionTrace`."""
    _check_mutable(image)
    height, width = image.shape
    trace = DecisionTrace.empty(pass_index, height, width)
    table = params.table
    _scan(
        image, float(params.t), float(params.v_thresh), float(params.eps_mean),
        int(params.max_attempts), table.l_sup, table.t_inf, table.t_sup, rng.state,
        trace.outcome, trace.r1, trace.r2, trace.mean, trace.attempts, trace.old, trace.new,
    )
    return trace


def render(image, params=None):
    """Apply ``params.passes`` passes to a copy of ``image``.

    Returns ``(output, traces)`` with one trace per pass. The input is never
    modified; ``passes == 0`` returns an unchanged copy.
    """
    params = params or RenderParams()
    out = np.array(check_image(image), dtype=np.uint8, order="C", copy=True)
    rng = RandomSource(params.seed)
    traces = [render_pass(out, params, rng, k) for k in range(params.passes)]
    return out, traces


def format_trace(traces):
    """Yield the lines (without terminators) of the text export of ``traces``."""
    yield TRACE_HEADER
    for trace in traces:
        height, width = trace.shape
        p = trace.pass_index
        names = [o.value for o in _OUTCOMES]
        outcome = trace.outcome.tolist()
        r1 = trace.r1.tolist()
        r2 = trace.r2.tolist()
        attempts = trace.attempts.tolist()
        old = trace.old.tolist()
        new = trace.new.tolist()
        for y in range(height):
            for x in range(width):
                yield (
                    f"{p},{x},{y},{names[outcome[y][x]]},{r1[y][x]!r},{r2[y][x]!r},"
                    f"{attempts[y][x]},{old[y][x]},{new[y][x]}"
                )


def write_trace(traces, fh):
    for line in format_trace(traces):
        fh.write(line + "\n")


def read_trace(fh):
    """Parse a trace export back into a list of :class:`DecisionTrace` (means are NaN)."""
    lines = iter(fh)
    header = next(lines, "").rstrip("\n")
    if header != TRACE_HEADER:
        raise UsageError(f"not a decision trace: unexpected header {header!r}")
    rows = {}
    for lineno, line in enumerate(lines, start=2):
        parts = line.rstrip("\n").split(",")
        if len(parts) != 9:
            raise UsageError(f"trace line {lineno}: expected 9 fields, got {len(parts)}")
        p, x, y = int(parts[0]), int(parts[1]), int(parts[2])
        rows.setdefault(p, []).append(
            (x, y, _CODES[Outcome(parts[3])], float(parts[4]), float(parts[5]),
             int(parts[6]), int(parts[7]), int(parts[8]))
        )
    traces = []
    for p in sorted(rows):
        recs = rows[p]
        width = max(r[0] for r in recs) + 1
        height = max(r[1] for r in recs) + 1
        if len(recs) != width * height:
            raise UsageError(f"trace pass {p}: {len(recs)} records for a {width}x{height} image")
        trace = DecisionTrace.empty(p, height, width)
        for x, y, code, r1, r2, n, old, new in recs:
            trace.outcome[y, x] = code
            trace.r1[y, x] = r1
            trace.r2[y, x] = r2
            trace.attempts[y, x] = n
            trace.old[y, x] = old
            trace.new[y, x] = new
        traces.append(trace)
    return traces

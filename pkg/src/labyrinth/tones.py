"""Tone interval table and interval-constrained candidate sampling.

The 0-255 tone range is cut into contiguous classification intervals
``[l_inf, l_sup)`` (the last one closed at 255). A pixel that must be
replaced draws candidates uniformly from the *target* range
``[t_inf, t_sup]`` of the interval its current tone belongs to::

    g* = round(t_inf + R * (t_sup - t_inf)),   R ~ U[0, 1)

Rounding is half-up, so the two endpoints of a target range are drawn half as
often as interior tones.

Interval table files are JSON, either a bare list or ``{"intervals": [...]}``,
each entry an object with integer keys ``l_inf``, ``l_sup`` and optionally
``t_inf``/``t_sup`` (defaulting to the classification bounds)::

    {"intervals": [
        {"l_inf": 10,  "l_sup": 92,  "t_inf": 10,  "t_sup": 92},
        {"l_inf": 92,  "l_sup": 174, "t_inf": 92,  "t_sup": 174},
        {"l_inf": 174, "l_sup": 255, "t_inf": 174, "t_sup": 255}
    ]}
"""

import json
import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import IntervalTableError, UsageError
from .rng import next_unit

DEFAULT_BOUNDS = (10, 92, 174, 255)


@dataclass(frozen=True)
class ToneInterval:
    l_inf: int
    l_sup: int
    t_inf: int
    t_sup: int

    def __post_init__(self):
        for name in ("l_inf", "l_sup", "t_inf", "t_sup"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise IntervalTableError(f"{name} must be an integer tone, got {value!r}")
            if not 0 <= value <= 255:
                raise IntervalTableError(f"{name}={value} outside the tone range [0, 255]")
        if not self.l_inf < self.l_sup:
            raise IntervalTableError(f"l_inf < l_sup violated: {self.l_inf} >= {self.l_sup}")
        if not self.t_inf <= self.t_sup:
            raise IntervalTableError(f"t_inf <= t_sup violated: {self.t_inf} > {self.t_sup}")


class ToneIntervalTable:
    """Immutable ordered sequence of contiguous :class:`ToneInterval`."""

    def __init__(self, intervals):
        intervals = tuple(intervals)
        if not intervals:
            raise IntervalTableError("table must contain at least one interval")
        for i, (lo, hi) in enumerate(zip(intervals, intervals[1:])):
            if lo.l_sup != hi.l_inf:
                raise IntervalTableError(
                    f"contiguity violated between intervals {i} and {i + 1}: "
                    f"l_sup={lo.l_sup} != next l_inf={hi.l_inf}"
                )
        if intervals[0].l_inf <= 0:
            raise IntervalTableError("first interval's l_inf must be greater than 0")
        if intervals[-1].l_sup != 255:
            raise IntervalTableError(f"last interval's l_sup must be 255, got {intervals[-1].l_sup}")
        self._intervals = intervals
        cols = np.array([[iv.l_inf, iv.l_sup, iv.t_inf, iv.t_sup] for iv in intervals], dtype=np.int64)
        cols.setflags(write=False)
        self.l_inf, self.l_sup, self.t_inf, self.t_sup = (np.ascontiguousarray(c) for c in cols.T)

    @property
    def intervals(self):
        return self._intervals

    def __len__(self):
        return len(self._intervals)

    def __getitem__(self, i):
        return self._intervals[i]

    def __iter__(self):
        return iter(self._intervals)

    def __eq__(self, other):
        return isinstance(other, ToneIntervalTable) and self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def __repr__(self):
        return f"ToneIntervalTable({list(self._intervals)!r})"

    def to_dict(self):
        return {"intervals": [vars(iv).copy() for iv in self._intervals]}

    @classmethod
    def from_dict(cls, data):
        entries = data.get("intervals") if isinstance(data, dict) else data
        if not isinstance(entries, list):
            raise IntervalTableError("expected a list of intervals or {'intervals': [...]}")
        intervals = []
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict):
                raise IntervalTableError(f"interval {i} is not an object")
            unknown = set(entry) - {"l_inf", "l_sup", "t_inf", "t_sup"}
            if unknown:
                raise IntervalTableError(f"interval {i} has unknown keys {sorted(unknown)}")
            try:
                l_inf, l_sup = entry["l_inf"], entry["l_sup"]
            except KeyError as exc:
                raise IntervalTableError(f"interval {i} is missing {exc.args[0]}") from None
            intervals.append(
                ToneInterval(l_inf, l_sup, entry.get("t_inf", l_inf), entry.get("t_sup", l_sup))
            )
        return cls(intervals)


def default_table():
    """Three near-equal intervals 10-92, 92-174, 174-255 with targets equal to bounds."""
    b = DEFAULT_BOUNDS
    return ToneIntervalTable(ToneInterval(lo, hi, lo, hi) for lo, hi in zip(b, b[1:]))


def load_table(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise IntervalTableError(f"{path}: not valid JSON: {exc}") from None
    return ToneIntervalTable.from_dict(data)


def save_table(table, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table.to_dict(), fh, indent=2)
        fh.write("\n")


@numba.njit(cache=True)
def classify_index(g, l_sup):
    last = l_sup.shape[0] - 1
    for i in range(last):
        if g < l_sup[i]:
            return i
    return last


@numba.njit(cache=True)
def candidate_tone(r, t_inf, t_sup):
    """Tone for unit draw ``r``: ``t_inf + r (t_sup - t_inf)`` rounded half up, clamped to 0-255."""
    g = math.floor(t_inf + r * (t_sup - t_inf) + 0.5)
    return min(max(g, 0.0), 255.0)


@numba.njit(cache=True)
def draw_candidate(t_inf, t_sup, state):
    return candidate_tone(next_unit(state), t_inf, t_sup)


def classify(g, table):
    """Index of the interval containing tone ``g``; tones below the table floor map to 0."""
    return int(classify_index(int(g), table.l_sup))


def sample_candidate(i, table, rng):
    """Draw one replacement tone from interval ``i``'s target range (one draw from ``rng``)."""
    if not 0 <= i < len(table):
        raise UsageError(f"interval index {i} out of range for a {len(table)}-interval table")
    return int(draw_candidate(float(table.t_inf[i]), float(table.t_sup[i]), rng.state))

"""Independent reference implementations used by the tests.

Nothing here imports the package's compiled paths; each function re-derives
its answer from first principles in plain Python.
"""

import math

MASK = (1 << 64) - 1


def brute_stats(rows, x, y):
    """Mean, population variance and count of the in-bounds 8-neighbours of (x, y)."""
    height = len(rows)
    width = len(rows[0])
    vals = []
    for yy in (y - 1, y, y + 1):
        for xx in (x - 1, x, x + 1):
            if (xx, yy) == (x, y):
                continue
            if 0 <= xx < width and 0 <= yy < height:
                vals.append(int(rows[yy][xx]))
    n = len(vals)
    mean = sum(vals) / n
    var = sum((v - mean) ** 2 for v in vals) / n
    return mean, var, n


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return x, z ^ (z >> 31)


class Xoshiro256:
    def __init__(self, seed=None, state=None):
        if state is None:
            x = seed & MASK
            state = []
            for _ in range(4):
                x, out = splitmix64(x)
                state.append(out)
        self.s = list(state)

    def next(self):
        s = self.s

        def rotl(v, k):
            return ((v << k) | (v >> (64 - k))) & MASK

        result = (rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result

    def unit(self):
        return (self.next() >> 11) / float(1 << 53)


def classify(g, bounds):
    """``bounds`` are the classification cut points l_inf^1, l_sup^1 = l_inf^2, ..., 255."""
    n = len(bounds) - 1
    for i in range(n):
        if bounds[i] <= g < bounds[i + 1]:
            return i
    return 0 if g < bounds[0] else n - 1


def replay(image, trace, t, v_thresh, max_attempts, intervals, eps_mean=1.0, tol=1e-12):
    """Re-run one pass's scan against a trace and list every inconsistency.

    ``image`` is the state before the pass; ``intervals`` a list of
    ``(l_inf, l_sup, t_inf, t_sup)``. The replayer walks pixels in row-major
    order, applies each recorded new tone as it goes, recomputes the local
    statistics from its own copy and checks the recorded outcome against them.
    """
    rows = [list(map(int, r)) for r in image]
    bounds = [iv[0] for iv in intervals] + [intervals[-1][1]]
    height, width = len(rows), len(rows[0])
    problems = []
    for y in range(height):
        for x in range(width):
            outcome = trace["outcome"][y][x]
            old = trace["old"][y][x]
            new = trace["new"][y][x]
            where = f"({x},{y}) {outcome}"
            if old != rows[y][x]:
                problems.append(f"{where}: old tone {old} != reconstructed {rows[y][x]}")
            mean, var, n = brute_stats(rows, x, y)
            div = max(mean, eps_mean)
            r1 = abs(rows[y][x] - mean) / div
            r2 = math.sqrt(var / n) / div
            if abs(r1 - trace["r1"][y][x]) > tol or abs(r2 - trace["r2"][y][x]) > tol:
                problems.append(f"{where}: recorded ratios differ from recomputed ({r1}, {r2})")
            if outcome == "protected_r2":
                ok = r2 > v_thresh and new == old and trace["attempts"][y][x] == 0
            elif outcome == "kept_r1":
                ok = r2 <= v_thresh and r1 <= t and new == old
            elif outcome == "replaced":
                lo, hi = intervals[classify(old, bounds)][2:]
                attempts = trace["attempts"][y][x]
                ok = (
                    r2 <= v_thresh
                    and r1 > t
                    and lo <= new <= hi
                    and abs(new - mean) / div <= t
                    and 1 <= attempts <= max_attempts
                )
            elif outcome == "exhausted":
                ok = r2 <= v_thresh and r1 > t and new == old and trace["attempts"][y][x] == max_attempts
            else:
                ok = False
            if not ok:
                problems.append(f"{where}: decision inconsistent with recomputed state")
            rows[y][x] = new
    return problems, rows


def trace_from_csv(lines):
    """Parse exported trace text into per-pass dicts of row lists, without the package's reader."""
    lines = list(lines)
    assert lines[0].rstrip("\n") == "pass,x,y,outcome,r1,r2,attempts,old,new"
    passes = {}
    for line in lines[1:]:
        p, x, y, outcome, r1, r2, attempts, old, new = line.rstrip("\n").split(",")
        passes.setdefault(int(p), []).append(
            (int(x), int(y), outcome, float(r1), float(r2), int(attempts), int(old), int(new))
        )
    out = {}
    for p, recs in passes.items():
        width = max(r[0] for r in recs) + 1
        height = max(r[1] for r in recs) + 1
        grid = {k: [[None] * width for _ in range(height)] for k in
                ("outcome", "r1", "r2", "attempts", "old", "new")}
        for x, y, outcome, r1, r2, attempts, old, new in recs:
            grid["outcome"][y][x] = outcome
            grid["r1"][y][x] = r1
            grid["r2"][y][x] = r2
            grid["attempts"][y][x] = attempts
            grid["old"][y][x] = old
            grid["new"][y][x] = new
        out[p] = grid
    return out

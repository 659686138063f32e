"""Portable seeded random source.

The generator is xoshiro256** (Blackman & Vigna) with its 256-bit state
initialised from the 64-bit seed by four SplitMix64 steps. Both algorithms use
only wrapping 64-bit integer arithmetic, so a given seed produces the same
stream on every platform. Unit reals are the top 53 bits of each output scaled
by 2**-53, which gives values in [0, 1).

The step functions are compiled with numba so the renderer kernel can draw
candidates without leaving compiled code; :class:`RandomSource` is the
Python-facing owner of one state vector.
"""

import numba
import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_UNIT = 1.0 / 9007199254740992.0  # 2**-53


@numba.njit(cache=True)
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@numba.njit(cache=True)
def _splitmix64(x):
    """Return (next_state, output) of one SplitMix64 step from state ``x``."""
    x = x + _GOLDEN
    z = x
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return x, z ^ (z >> np.uint64(31))


@numba.njit(cache=True)
def next_u64(state):
    """Advance a xoshiro256** state vector in place and return the next output."""
    s0 = state[0]
    s1 = state[1]
    s2 = state[2]
    s3 = state[3]
    result = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
    t = s1 << np.uint64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3
    return result


@numba.njit(cache=True)
def next_unit(state):
    """Uniform real in [0, 1) drawn from ``state``."""
    return float(next_u64(state) >> np.uint64(11)) * _UNIT


def seed_state(seed):
    """Expand a 64-bit seed into a xoshiro256** state vector.

    Negative seeds are taken modulo 2**64.
    """
    x = np.uint64(int(seed) & _MASK64)
    state = np.empty(4, dtype=np.uint64)
    for i in range(4):
        x, out = _splitmix64(x)
        x = np.uint64(x)
        state[i] = np.uint64(out)
    return state


def _derive_seed(seed, stream):
    x = np.uint64(int(seed) & _MASK64) ^ np.uint64((int(stream) * 0xD1B54A32D192ED03) & _MASK64)
    _, out = _splitmix64(x)
    return int(out) & _MASK64


class RandomSource:
    """Single-owner stream of uniform reals in [0, 1).

    Not thread safe. To process several images in parallel give each worker
    its own source via :meth:`fork`.
    """

    def __init__(self, seed=0):
        self.seed = int(seed) & _MASK64
        self.state = seed_state(self.seed)

    def next_u64(self):
        return int(next_u64(self.state))

    def next_unit(self):
        return next_unit(self.state)

    def fork(self, stream):
        """Independent source whose seed is derived from this source's seed and ``stream``."""
        return RandomSource(_derive_seed(self.seed, stream))

    def copy(self):
        clone = RandomSource.__new__(RandomSource)
        clone.seed = self.seed
        clone.state = self.state.copy()
        return clone

    def __repr__(self):
        return f"RandomSource(seed={self.seed})"

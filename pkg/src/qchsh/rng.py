"""Counter-based random numbers for reproducible, partition-independent simulation.

A variate is a pure function of ``(seed, stream, counter)``::

    key     = splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03))
    bits    = splitmix64(key ^ splitmix64(counter))
    uniform = (bits >> 11) * 2**-53            # in [0, 1)

where ``splitmix64`` is the finalizer of Steele, Lea and Flood's SplitMix64
generator. All arithmetic is modulo 2**64. Because no sequential state is
carried, rounds may be evaluated in any order or split across workers and
produce identical draws. This construction is fixed; changing it changes
every seeded result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_STREAM_MULT = 0xD1B54A32D192ED03
_TO_UNIT = 2.0 ** -53


def splitmix64(x) -> np.ndarray:
    """Vectorized SplitMix64 output function on ``uint64`` arrays."""
    z = np.atleast_1d(np.asarray(x, dtype=np.uint64)) + _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int) -> np.uint64:
    s = np.array([seed & MASK64], dtype=np.uint64)
    t = np.array([(stream * _STREAM_MULT) & MASK64], dtype=np.uint64)
    return splitmix64(splitmix64(s) ^ t)[0]


def random_bits(seed: int, stream: int, counters) -> np.ndarray:
    key = stream_key(seed, stream)
    c = np.atleast_1d(np.asarray(counters, dtype=np.uint64))
    return splitmix64(key ^ splitmix64(c))


def uniforms(seed: int, stream: int, counters) -> np.ndarray:
    """Uniform doubles in ``[0, 1)`` for each counter."""
    return (random_bits(seed, stream, counters) >> np.uint64(11)).astype(np.float64) * _TO_UNIT


@dataclass(frozen=True)
class RngState:
    """Immutable generator position; :meth:`next_uniform` returns the successor."""

    seed: int
    stream: int = 0
    counter: int = 0

    def next_uniform(self) -> tuple[float, "RngState"]:
        u = float(uniforms(self.seed, self.stream, [self.counter])[0])
        return u, RngState(self.seed, self.stream, self.counter + 1)

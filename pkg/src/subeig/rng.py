"""Tiny splitmix64 generator.

Experiments must reproduce bit-for-bit across platforms and numpy
versions, so the perturbation and random-model streams use this fixed
64-bit integer recurrence instead of numpy's Generator.  Constants are
the standard splitmix64 ones; doubles take the top 53 bits.
"""

import numpy as np

__all__ = ["SplitMix64"]

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed):
        self._state = int(seed) & _MASK

    def next_u64(self):
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self, n):
        """n doubles, i.i.d. uniform on [0, 1)."""
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            out[i] = (self.next_u64() >> 11) * 2.0**-53
        return out

    def uniform_symmetric(self, n):
        """n doubles, i.i.d. uniform on [-1, 1)."""
        return 2.0 * self.uniform(n) - 1.0

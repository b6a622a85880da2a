"""Deterministic random stream used by every search backend.

The generator is splitmix64: a 64-bit counter advanced by a fixed odd
increment, pushed through an avalanching mixer. Because each output depends
only on the counter value, the same stream can be produced one value at a
time (scalar loop) or as a whole block (vectorized), and both forms are
bitwise identical. That property is what lets the compiled kernel and the
plain-numpy engine replay each other's runs exactly.

Scalar arithmetic here uses Python ints masked to 64 bits: numpy's *scalar*
uint64 multiply warns on overflow, while arrays and compiled code wrap
silently. The batch path works on uint64 arrays.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

# A 53-bit mantissa scaled into [0, 1).
_TWO_NEG53 = 2.0 ** -53

_U_GAMMA = np.uint64(GAMMA)
_U_MIX1 = np.uint64(MIX1)
_U_MIX2 = np.uint64(MIX2)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)


def mix64(z: int) -> int:
    """Avalanche a 64-bit value (python-int form, masked)."""
    z = (z ^ (z >> 30)) * MIX1 & MASK64
    z = (z ^ (z >> 27)) * MIX2 & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Stateful wrapper around the splitmix64 stream.

    `state` is the counter *before* the gamma increment, so the first output
    of `SplitMix64(s)` is `mix64(s + GAMMA)`.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def next_uniform(self) -> float:
        """One float64 uniform in [0, 1), from the top 53 bits."""
        return float(self.next_u64() >> 11) * _TWO_NEG53

    def randint(self, bound: int) -> int:
        """One integer in [0, bound) via modulo reduction.

        Modulo keeps the scalar and compiled paths trivially identical; the
        bias is irrelevant at the bounds used here (population sizes).
        """
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        return self.next_u64() % bound

    def uniforms(self, count: int) -> np.ndarray:
        """`count` float64 uniforms in [0, 1), as one vectorized block.

        Consumes exactly `count` stream positions, identically to calling
        `next_uniform` that many times.
        """
        if count < 0:
            raise ValueError(f"count must be non-negative, got {count}")
        if count == 0:
            return np.empty(0, dtype=np.float64)
        steps = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self.state) + _U_GAMMA * steps
        z = (z ^ (z >> _U30)) * _U_MIX1
        z = (z ^ (z >> _U27)) * _U_MIX2
        z = z ^ (z >> _U31)
        self.state = (self.state + count * GAMMA) & MASK64
        return (z >> _U11).astype(np.float64) * _TWO_NEG53

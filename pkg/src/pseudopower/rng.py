"""Platform-independent random numbers for seeded experiments.

The generator is SplitMix64 (Steele, Lea and Flood constants).  Uniforms
take the top 53 bits: ``u = ((x >> 11) + 1) * 2**-53`` lies in ``(0, 1]``
so the logarithm in Box-Muller is always finite.  Box-Muller pairs
``sqrt(-2 ln u1) * (cos 2 pi u2, sin 2 pi u2)`` are evaluated in 128-bit
MPFR and rounded once to double, so the output bits do not depend on the
platform's libm.
"""
from __future__ import annotations

import gmpy2
from gmpy2 import mpfr

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> int:
        """Numerator ``k`` of the uniform ``k * 2**-53`` in ``(0, 1]``."""
        return (self.next_u64() >> 11) + 1


def normal_samples(seed: int, count: int) -> list[float]:
    """``count`` standard normal doubles from the seeded stream."""
    gen = SplitMix64(seed)
    out: list[float] = []
    with gmpy2.context(gmpy2.get_context(), precision=128):
        two_pi = 2 * gmpy2.const_pi()
        while len(out) < count:
            u1 = gmpy2.mul_2exp(mpfr(gen.uniform()), -53)
            u2 = gmpy2.mul_2exp(mpfr(gen.uniform()), -53)
            r = gmpy2.sqrt(-2 * gmpy2.log(u1))
            out.append(float(r * gmpy2.cos(two_pi * u2)))
            out.append(float(r * gmpy2.sin(two_pi * u2)))
    return out[:count]

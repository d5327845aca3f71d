"""Deterministic, language-portable random number generation.

Corpus downsampling must be reproducible bit-for-bit from a seed, across
machines and across reimplementations, so we fix the generator rather than
rely on a runtime's library RNG.  The generator is PCG32 (XSH-RR output on a
64-bit LCG state) seeded through SplitMix64, both with their standard
published constants.
"""

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1

_PCG_MULT = 6364136223846793005
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 sequence; used only to expand a user seed into PCG state."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + _SM_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _SM_MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _SM_MIX2) & MASK64
        return z ^ (z >> 31)


class PCG32:
    """PCG32: 64-bit LCG state, XSH-RR output function, 32-bit output."""

    def __init__(self, initstate: int, initseq: int):
        self.state = 0
        self.inc = (((initseq & MASK64) << 1) | 1) & MASK64
        self.next_u32()
        self.state = (self.state + (initstate & MASK64)) & MASK64
        self.next_u32()

    @classmethod
    def from_seed(cls, seed: int) -> "PCG32":
        """Derive (initstate, initseq) from one user seed via SplitMix64."""
        sm = SplitMix64(seed)
        return cls(sm.next(), sm.next())

    def next_u32(self) -> int:
        old = self.state
        self.state = (old * _PCG_MULT + self.inc) & MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & MASK32
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & MASK32

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound), by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (MASK32 + 1 - bound) % bound
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % bound

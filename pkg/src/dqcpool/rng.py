"""Deterministic random number streams for reproducible trials.

The generator is pinned bit-for-bit so that identical seeds reproduce
identical experiment outputs anywhere:

* state derivation uses splitmix64 (one step over ``master_seed XOR
  (trial_index * 0x9E3779B97F4A7C15)``, all mod 2**64),
* the per-trial stream is xoshiro256** seeded with four successive
  splitmix64 outputs of that derived value,
* bounded integers use modulo rejection: draw ``u``, accept when
  ``u < 2**64 - (2**64 % bound)``, return ``u % bound``.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state by one step; return (new_state, output)."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** with 64-bit outputs, implemented over Python ints."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, s0: int, s1: int, s2: int, s3: int):
        self.s0 = s0 & MASK64
        self.s1 = s1 & MASK64
        self.s2 = s2 & MASK64
        self.s3 = s3 & MASK64

    @classmethod
    def from_u64_seed(cls, seed: int) -> "Xoshiro256StarStar":
        """Fill the 256-bit state with four successive splitmix64 outputs."""
        state = seed & MASK64
        words = []
        for _ in range(4):
            state, out = splitmix64_next(state)
            words.append(out)
        return cls(*words)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        x = (s1 * 5) & MASK64
        result = (((x << 7) | (x >> 57)) & MASK64) * 9 & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def next_below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by modulo rejection (unbiased)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = ((1 << 64) // bound) * bound
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound

    def state(self) -> tuple[int, int, int, int]:
        return (self.s0, self.s1, self.s2, self.s3)


def derive_trial_rng(master_seed: int, trial_index: int) -> Xoshiro256StarStar:
    """Independent deterministic stream for one trial of one experiment."""
    mixed = (master_seed ^ ((trial_index * GOLDEN_GAMMA) & MASK64)) & MASK64
    _, derived = splitmix64_next(mixed)
    return Xoshiro256StarStar.from_u64_seed(derived)


def bernoulli_threshold(p: float) -> int:
    """Engage-threshold for probability p: a draw u engages iff u < floor(p * 2**64)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    return int(p * (1 << 64))

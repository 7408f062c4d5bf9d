"""Counter-based splittable random number generation.

The generator is a keyed splitmix-style counter mix: draw i of a keyed stream
is mix64(key + (i+1)*GOLDEN) where mix64 is the 3-round xor-multiply
finalizer.  Because outputs are pure functions of (key, counter), streams can
be split hierarchically with no state hand-off:

    seed, stream_id  ->  stream key   (user-level independent streams)
    stream key, i    ->  sample key   (one key per sample index)
    sample key, c    ->  64-bit draws (as many as the sample needs)

Per-sample keys make results independent of how samples are batched or
sharded: any partition of the index range reproduces the identical sample
sequence.  This module is the portable scalar reference; the numba kernels
in :mod:`lisdist.kernels` replicate it bit-for-bit (asserted in tests, with
committed test vectors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM_SALT = 0xD1B54A32D192ED03
SAMPLE_SALT = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer."""
    x &= M64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & M64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & M64
    x ^= x >> 31
    return x


def stream_key(seed: int, stream_id: int) -> int:
    a = mix64((seed + GOLDEN) & M64)
    b = mix64((stream_id + STREAM_SALT) & M64)
    return mix64((a ^ ((b * GOLDEN) & M64)) & M64)


def sample_key(skey: int, index: int) -> int:
    return mix64(((skey ^ SAMPLE_SALT) + (index + 1) * GOLDEN) & M64)


def raw64(key: int, counter: int) -> int:
    return mix64((key + (counter + 1) * GOLDEN) & M64)


@dataclass(frozen=True)
class SeededStream:
    """Addressable stream of draws; equal (seed, stream_id) reproduce exactly."""

    seed: int
    stream_id: int = 0

    @property
    def key(self) -> int:
        return stream_key(self.seed, self.stream_id)


class StreamDraws:
    """Sequential scalar draw helper over one key (reference implementation)."""

    def __init__(self, key: int):
        self.key = key
        self.counter = 0

    def next64(self) -> int:
        v = raw64(self.key, self.counter)
        self.counter += 1
        return v

    def uniform(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next64() >> 11) * 2.0 ** -53

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by mask-and-reject."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (bound - 1).bit_length()) - 1 if bound > 1 else 0
        while True:
            r = self.next64() & mask
            if r < bound:
                return r

    def shuffle(self, items: list) -> None:
        """Fisher-Yates with rejection-based bounded draws (no modulo bias)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def poisson(self, lam: float) -> int:
        """Poisson draw: sequential-search inversion below 30, PTRS above."""
        if lam <= 0:
            raise ValueError("lam must be positive")
        if lam < 30.0:
            # inversion by sequential search
            u = self.uniform()
            p = math.exp(-lam)
            acc = p
            k = 0
            while u > acc:
                k += 1
                p *= lam / k
                acc += p
                if k > 10000:  # numerically unreachable for lam < 30
                    break
            return k
        # Hoermann's transformed rejection with squeeze
        b = 0.931 + 2.53 * math.sqrt(lam)
        a = -0.059 + 0.02483 * b
        inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
        v_r = 0.9277 - 3.6224 / (b - 2.0)
        log_lam = math.log(lam)
        while True:
            u = self.uniform() - 0.5
            v = self.uniform()
            us = 0.5 - abs(u)
            k = math.floor((2.0 * a / us + b) * u + lam + 0.43)
            if us >= 0.07 and v <= v_r:
                return int(k)
            if k < 0 or (us < 0.013 and v > us):
                continue
            if (math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b)
                    <= k * log_lam - lam - math.lgamma(k + 1.0)):
                return int(k)

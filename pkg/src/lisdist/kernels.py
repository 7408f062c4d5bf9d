"""Numba hot loops for the Monte Carlo samplers.

Each kernel replicates the scalar reference in :mod:`lisdist.rng` bit for
bit (equality is asserted in the test suite).  All kernels release the GIL so
shard blocks can run on a thread pool; determinism is unaffected because
every sample is keyed by its global index.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_SAMPLE_SALT = np.uint64(0x94D049BB133111EB)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)


@njit(cache=True, nogil=True, inline="always")
def _mix64(x):
    x ^= x >> np.uint64(30)
    x *= _M1
    x ^= x >> np.uint64(27)
    x *= _M2
    x ^= x >> np.uint64(31)
    return x


@njit(cache=True, nogil=True, inline="always")
def _sample_key(skey, index):
    return _mix64((skey ^ _SAMPLE_SALT) + np.uint64(index + 1) * _GOLDEN)


@njit(cache=True, nogil=True, inline="always")
def _raw64(key, counter):
    return _mix64(key + (counter + _ONE) * _GOLDEN)


@njit(cache=True, nogil=True)
def raw64_block(key, start, out):
    """out[i] = draw (start+i) of the keyed stream; for test vectors."""
    for i in range(out.shape[0]):
        out[i] = _raw64(np.uint64(key), np.uint64(start + i))


@njit(cache=True, nogil=True, inline="always")
def _uniform(key, ctr):
    return (_raw64(key, ctr) >> np.uint64(11)) * 1.1102230246251565e-16  # 2^-53


@njit(cache=True, nogil=True)
def lis_block(skey, index_start, count, N, out):
    """LIS lengths of `count` uniform permutations of size N.

    Sample b uses sample key (skey, index_start+b): a Fisher-Yates shuffle
    with mask-and-reject bounded draws builds the permutation, patience
    sorting counts the piles.
    """
    perm = np.empty(N, np.int64)
    cap = 4 * int(np.sqrt(N)) + 64
    if cap > N:
        cap = N
    tails = np.empty(cap, np.int64)
    for b in range(count):
        key = _sample_key(np.uint64(skey), np.uint64(index_start + b))
        ctr = np.uint64(0)
        for i in range(N):
            perm[i] = i
        # smallest (2^k - 1) >= bound - 1, halved in step as bound falls
        mask = _ONE
        while mask < np.uint64(N - 1):
            mask = (mask << np.uint64(1)) | _ONE
        for i in range(N - 1, 0, -1):
            bound = np.uint64(i + 1)
            while (mask >> np.uint64(1)) >= bound - _ONE and mask > _ONE:
                mask = mask >> np.uint64(1)
            while True:
                r = _raw64(key, ctr) & mask
                ctr += _ONE
                if r < bound:
                    break
            j = np.int64(r)
            t = perm[i]
            perm[i] = perm[j]
            perm[j] = t
        npile = 0
        for i in range(N):
            v = perm[i]
            lo = 0
            hi = npile
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] >= v:
                    hi = mid
                else:
                    lo = mid + 1
            if lo == npile:
                if npile < cap:
                    tails[npile] = v
                npile += 1
            else:
                tails[lo] = v
        out[b] = npile
    return 0


@njit(cache=True, nogil=True, inline="always")
def _poisson_draw(key, ctr, lam):
    """One Poisson draw; returns (value, next counter).  Mirrors rng.poisson."""
    if lam < 30.0:
        u = _uniform(key, ctr)
        ctr += _ONE
        p = np.exp(-lam)
        acc = p
        k = 0
        while u > acc:
            k += 1
            p *= lam / k
            acc += p
            if k > 10000:
                break
        return k, ctr
    b = 0.931 + 2.53 * np.sqrt(lam)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_lam = np.log(lam)
    while True:
        u = _uniform(key, ctr) - 0.5
        ctr += _ONE
        v = _uniform(key, ctr)
        ctr += _ONE
        us = 0.5 - abs(u)
        k = np.floor((2.0 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= v_r:
            return np.int64(k), ctr
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (np.log(v) + np.log(inv_alpha) - np.log(a / (us * us) + b)
                <= k * log_lam - lam - math.lgamma(k + 1.0)):
            return np.int64(k), ctr


@njit(cache=True, nogil=True)
def poisson_block(skey, index_start, count, lam, out):
    """out[b] = Poisson(lam) draw for sample index_start+b (one per key)."""
    for b in range(count):
        key = _sample_key(np.uint64(skey), np.uint64(index_start + b))
        k, _ = _poisson_draw(key, np.uint64(0), lam)
        out[b] = k


@njit(cache=True, nogil=True)
def hammersley_block(skey, index_start, count, lam, out):
    """Longest up-right chain through a Poisson(lam) point cloud per sample.

    K ~ Poisson(lam) points are dropped uniformly in a square; sorting by the
    first coordinate and patience-sorting the second gives the chain length.
    """
    for b in range(count):
        key = _sample_key(np.uint64(skey), np.uint64(index_start + b))
        k, ctr = _poisson_draw(key, np.uint64(0), lam)
        xs = np.empty(k, np.float64)
        ys = np.empty(k, np.float64)
        for i in range(k):
            xs[i] = _uniform(key, ctr)
            ctr += _ONE
            ys[i] = _uniform(key, ctr)
            ctr += _ONE
        order = np.argsort(xs)
        tails = np.empty(k, np.float64)
        npile = 0
        for ii in range(k):
            v = ys[order[ii]]
            lo = 0
            hi = npile
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] >= v:
                    hi = mid
                else:
                    lo = mid + 1
            tails[lo] = v
            if lo == npile:
                npile += 1
        out[b] = npile


@njit(cache=True, nogil=True)
def shuffle_block(skey, index_start, count, N, out):
    """Full permutations (for uniformity tests): row b = shuffled identity."""
    for b in range(count):
        key = _sample_key(np.uint64(skey), np.uint64(index_start + b))
        ctr = np.uint64(0)
        for i in range(N):
            out[b, i] = i
        for i in range(N - 1, 0, -1):
            bound = np.uint64(i + 1)
            mask = np.uint64(1)
            while mask < bound:
                mask = mask << np.uint64(1)
            mask = mask - _ONE
            while True:
                r = _raw64(key, ctr) & mask
                ctr += _ONE
                if r < bound:
                    break
            j = np.int64(r)
            t = out[b, i]
            out[b, i] = out[b, j]
            out[b, j] = t

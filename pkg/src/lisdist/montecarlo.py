"""Reproducible Monte Carlo: LIS of uniform permutations, the Poissonized
point-cloud process, scaled statistics, and convergence diagnostics.

Determinism contract: every sample is addressed by (seed, stream_id, sample
index) through the counter-based generator, so a run is reproducible across
platforms, shard counts, and thread schedules; sharding is purely an
execution detail and the merged output is byte-identical to a serial run.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import kernels
from .errors import DomainError, UsageError
from .painleve import TracyWidomTable
from .rng import SeededStream

DEFAULT_SHARDS = 8


@dataclass(frozen=True)
class SampleStats:
    """Sample set with summary statistics and provenance.

    `samples` is sorted; the empirical CDF is the right-continuous step
    function i/count at the i-th order statistic.
    """

    count: int
    mean: float
    variance: float
    samples: np.ndarray
    stream: SeededStream
    kind: str
    parameter: float

    @classmethod
    def from_samples(cls, raw: np.ndarray, stream: SeededStream, kind: str,
                     parameter: float) -> "SampleStats":
        srt = np.sort(np.asarray(raw))
        n = len(srt)
        mean = float(np.mean(srt))
        var = float(np.var(srt, ddof=1)) if n > 1 else 0.0
        return cls(count=n, mean=mean, variance=var, samples=srt,
                   stream=stream, kind=kind, parameter=parameter)

    def ecdf(self, x: float) -> float:
        return float(np.searchsorted(self.samples, x, side="right")) / self.count


def _shard_ranges(total: int, shards: int) -> List[Tuple[int, int]]:
    base, extra = divmod(total, shards)
    out = []
    start = 0
    for s in range(shards):
        size = base + (1 if s < extra else 0)
        out.append((start, size))
        start += size
    return out


def _run_sharded(kernel, skey: int, total: int, shards: int, extra_args,
                 threads: int | None = None) -> np.ndarray:
    out = np.empty(total, np.int64)
    ranges = _shard_ranges(total, max(1, shards))
    if threads is None:
        threads = min(len(ranges), os.cpu_count() or 1)

    def run(rng_block):
        start, size = rng_block
        if size:
            kernel(np.uint64(skey), start, size, *extra_args, out[start:start + size])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(run, ranges))
    else:
        for r in ranges:
            run(r)
    return out


def sample_lis(N: int, samples: int, stream: SeededStream,
               shards: int = DEFAULT_SHARDS, threads: int | None = None) -> SampleStats:
    """LIS lengths of `samples` uniform permutations of {1..N}.

    Permutations come from an unbiased Fisher-Yates shuffle (mask-and-reject
    bounded draws); lengths from patience sorting.  Output is independent of
    `shards`/`threads`.
    """
    if N < 1 or samples < 1:
        raise DomainError("N and samples must be >= 1")
    raw = _run_sharded(kernels.lis_block, stream.key, samples, shards, (N,), threads)
    return SampleStats.from_samples(raw, stream, "lis", float(N))


def sample_hammersley(lam: float, samples: int, stream: SeededStream,
                      shards: int = DEFAULT_SHARDS, threads: int | None = None) -> SampleStats:
    """Longest up-right chain through a rate-one planar Poisson cloud.

    Each sample draws K ~ Poisson(lam) uniform points in a square, sorts by
    the first coordinate, and patience-sorts the second coordinates.
    """
    if not (lam > 0):
        raise DomainError("lam must be positive")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    raw = _run_sharded(kernels.hammersley_block, stream.key, samples, shards,
                       (float(lam),), threads)
    return SampleStats.from_samples(raw, stream, "hammersley", float(lam))


def scaled_samples(stats: SampleStats, N: int) -> SampleStats:
    """Apply the edge scaling x -> (x - 2 sqrt N)/N^(1/6) to every sample."""
    if stats.kind != "lis" or int(stats.parameter) != N:
        raise UsageError("stats were not drawn at this N")
    c, s = 2.0 * math.sqrt(N), N ** (1.0 / 6.0)
    scaled = (stats.samples - c) / s
    out = SampleStats(count=stats.count, mean=float(np.mean(scaled)),
                      variance=float(np.var(scaled, ddof=1)) if stats.count > 1 else 0.0,
                      samples=scaled, stream=stats.stream, kind="lis-scaled",
                      parameter=float(N))
    return out


def ks_distance(stats: SampleStats, table: TracyWidomTable) -> float:
    """Sup distance between the sample's empirical CDF and the tabulated law.

    The reference CDF is interpolated monotonically from the table grid; the
    samples must lie inside the grid.
    """
    if stats.count == 0:
        raise DomainError("empty sample set")
    lo, hi = float(table.t_grid[0]), float(table.t_grid[-1])
    if stats.samples[0] < lo or stats.samples[-1] > hi:
        raise DomainError(
            f"samples [{stats.samples[0]:.3f}, {stats.samples[-1]:.3f}] "
            f"outside table grid [{lo}, {hi}]")
    F = PchipInterpolator(table.t_grid, table.F)(stats.samples)
    n = stats.count
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


@dataclass(frozen=True)
class LimitConstants:
    c0: float
    c0_stderr: float
    c1: float
    c1_stderr: float


def estimate_limit_constants(sweep: Sequence[Tuple[int, SampleStats]]) -> LimitConstants:
    """Slopes of Var(l_N) ~ c0 N^(1/3) and (E l_N - 2 sqrt N) ~ c1 N^(1/6).

    Through-origin least squares over the sweep; standard errors from the
    residuals.  Requires at least three strictly increasing N.
    """
    if len(sweep) < 3:
        raise UsageError("need at least 3 sweep points")
    Ns = [N for N, _ in sweep]
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise UsageError("N values must be strictly increasing")

    def fit(xs: np.ndarray, ys: np.ndarray) -> Tuple[float, float]:
        sxx = float(np.sum(xs * xs))
        c = float(np.sum(xs * ys)) / sxx
        resid = ys - c * xs
        dof = max(len(xs) - 1, 1)
        se = math.sqrt(float(np.sum(resid ** 2)) / dof / sxx)
        return c, se

    x0 = np.array([N ** (1.0 / 3.0) for N, _ in sweep])
    y0 = np.array([st.variance for _, st in sweep])
    x1 = np.array([N ** (1.0 / 6.0) for N, _ in sweep])
    y1 = np.array([st.mean - 2.0 * math.sqrt(N) for N, st in sweep])
    c0, se0 = fit(x0, y0)
    c1, se1 = fit(x1, y1)
    return LimitConstants(c0=c0, c0_stderr=se0, c1=c1, c1_stderr=se1)

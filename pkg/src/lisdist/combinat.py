"""Exact finite-N combinatorics of longest increasing subsequences.

Everything here is integer-exact: tableau counts via the Frobenius-Young
product, distributions q_{n,N} = #{permutations with LIS <= n} / N! as exact
fractions, and small-N brute-force enumeration as an independent oracle.
"""

from __future__ import annotations

import itertools
import math
import threading
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

from .errors import CapacityError, DomainError

DEFAULT_EXACT_LIMIT = 60      # largest N for hook-sum distributions
DEFAULT_HOOK_LIMIT = 200      # largest partition weight for hook_count
BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n} in one-line notation."""

    values: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.values)
        if sorted(self.values) != list(range(1, n + 1)):
            raise DomainError("values must be a bijection of {1..n}")

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive parts; the shape of a Young diagram."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.parts, self.parts[1:]):
            if b > a:
                raise DomainError("parts must be weakly decreasing")
        if self.parts and self.parts[-1] < 1:
            raise DomainError("parts must be positive")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def rows(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)

    @classmethod
    def from_str(cls, s: str) -> "Partition":
        s = s.strip()
        return cls(tuple(int(tok) for tok in s.split(",")) if s else ())


@dataclass(frozen=True)
class ExactProbability:
    """A probability stored as an exact reduced fraction."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise DomainError("denominator must be positive")
        if not (0 <= self.numerator <= self.denominator):
            raise DomainError("probability must lie in [0, 1]")
        if math.gcd(self.numerator, self.denominator) != 1:
            raise DomainError("fraction must be in lowest terms")

    @classmethod
    def from_fraction(cls, fr: Fraction) -> "ExactProbability":
        return cls(fr.numerator, fr.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def lis_length(p: Permutation | Sequence[int]) -> int:
    """Length of the longest strictly increasing subsequence.

    Patience sorting: scan left to right keeping the minimal top of each
    pile; each value replaces the first pile top >= value (values are
    distinct, so > vs >= is immaterial — the strict convention is used).
    The number of piles is the answer.  O(N log N).
    """
    values = p.values if isinstance(p, Permutation) else p
    tops: List[int] = []
    for v in values:
        i = bisect_left(tops, v)
        if i == len(tops):
            tops.append(v)
        else:
            tops[i] = v
    return len(tops)


def lis_length_quadratic(values: Sequence[int]) -> int:
    """O(N^2) dynamic-programming LIS; independent oracle for lis_length."""
    n = len(values)
    if n == 0:
        return 0
    best = [1] * n
    for i in range(n):
        for j in range(i):
            if values[j] < values[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return max(best)


def transpose(mu: Partition) -> Partition:
    """Conjugate diagram (reflect across the main diagonal)."""
    if not mu.parts:
        return mu
    out = [0] * mu.parts[0]
    for p in mu.parts:
        for i in range(p):
            out[i] += 1
    return Partition(tuple(out))


def hook_count(mu: Partition, limit: int = DEFAULT_HOOK_LIMIT) -> int:
    """Number of standard Young tableaux of shape mu.

    Computed exactly from the product formula over the strictly decreasing
    h_j = mu_j + r - j:

        f(mu) = N! * prod_{i<j} (h_i - h_j) / prod_j h_j!
    """
    N = mu.weight
    if N > limit:
        raise CapacityError(f"hook_count weight {N} exceeds limit {limit}")
    if N == 0:
        return 1
    r = mu.rows
    h = [mu.parts[j] + r - (j + 1) for j in range(r)]
    num = math.factorial(N)
    for i in range(r):
        for j in range(i + 1, r):
            num *= h[i] - h[j]
    den = 1
    for hj in h:
        den *= math.factorial(hj)
    f, rem = divmod(num, den)
    assert rem == 0, "Frobenius-Young product must divide exactly"
    return f


def partitions_first_row_at_most(N: int, n: int) -> Iterator[Partition]:
    """All partitions of N with first part <= n, in reverse lexicographic order."""
    if N < 0:
        raise DomainError("N must be >= 0")
    if n < 1:
        raise DomainError("n must be >= 1")

    def gen(remaining: int, maxpart: int, prefix: List[int]) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield tuple(prefix)
            return
        for part in range(min(maxpart, remaining), 0, -1):
            prefix.append(part)
            yield from gen(remaining - part, part, prefix)
            prefix.pop()

    for parts in gen(N, n, []):
        yield Partition(parts)


def distribution_exact(N: int, n: int, limit: int = DEFAULT_EXACT_LIMIT) -> ExactProbability:
    """q_{n,N} = Prob(LIS <= n) = sum_{mu |- N, mu_1 <= n} f(mu)^2 / N!."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if N < 0:
        raise DomainError("N must be >= 0")
    if N > limit:
        raise CapacityError(f"distribution_exact capacity {limit} exceeded (N={N})")
    if N == 0:
        return ExactProbability(1, 1)
    total = 0
    for mu in partitions_first_row_at_most(N, n):
        f = hook_count(mu, limit=max(DEFAULT_HOOK_LIMIT, N))
        total += f * f
    return ExactProbability.from_fraction(Fraction(total, math.factorial(N)))


# Incremental Young-lattice growth cache for bulk tables: _levels[N] maps each
# partition (first row capped at _cap) to its tableau count f(mu).  Growing by
# one box at a time reproduces the Frobenius-Young values (checked in tests)
# at a fraction of the per-partition product cost.  The lock keeps the cache
# consistent under concurrent table requests.
_cap: int = 0
_levels: List[Dict[Tuple[int, ...], int]] = []
_levels_lock = threading.Lock()


def _grow_levels(N: int, n_max: int) -> None:
    global _cap, _levels
    if n_max > _cap:
        _cap = n_max
        _levels = [{(): 1}]
    while len(_levels) <= N:
        prev = _levels[-1]
        nxt: Dict[Tuple[int, ...], int] = {}
        for parts, f in prev.items():
            r = len(parts)
            for i in range(r + 1):
                cur = parts[i] if i < r else 0
                above = parts[i - 1] if i > 0 else _cap
                if cur + 1 > above:
                    continue
                if i < r:
                    child = parts[:i] + (cur + 1,) + parts[i + 1:]
                else:
                    child = parts + (1,)
                nxt[child] = nxt.get(child, 0) + f
        _levels.append(nxt)


def distribution_table(N: int, n_max: int = 12,
                       limit: int = DEFAULT_EXACT_LIMIT) -> Dict[int, ExactProbability]:
    """q_{n,N} for every n = 1..n_max at once (cumulative over first-row buckets)."""
    if N > limit:
        raise CapacityError(f"distribution_table capacity {limit} exceeded (N={N})")
    if N < 0:
        raise DomainError("N must be >= 0")
    with _levels_lock:
        _grow_levels(N, n_max)
        level = _levels[N]
    bucket = [0] * (n_max + 1)
    for parts, f in level.items():
        first = parts[0] if parts else 0
        if first <= n_max:
            bucket[first] += f * f
    fact = math.factorial(N)
    out: Dict[int, ExactProbability] = {}
    acc = 0
    for n in range(0, n_max + 1):
        acc += bucket[n]
        if n >= 1:
            out[n] = ExactProbability.from_fraction(Fraction(acc, fact))
    return out


def brute_force_distribution(N: int) -> Dict[int, ExactProbability]:
    """Exhaustive LIS tally over all N! permutations; oracle for the hook sums."""
    if N < 1:
        raise DomainError("N must be >= 1")
    if N > BRUTE_FORCE_LIMIT:
        raise CapacityError(f"brute force limited to N <= {BRUTE_FORCE_LIMIT}")
    counts = [0] * (N + 1)
    for perm in itertools.permutations(range(1, N + 1)):
        counts[lis_length(perm)] += 1
    fact = math.factorial(N)
    out: Dict[int, ExactProbability] = {}
    acc = 0
    for n in range(1, N + 1):
        acc += counts[n]
        out[n] = ExactProbability.from_fraction(Fraction(acc, fact))
    return out


def erdos_szekeres_floor(N: int) -> float:
    """Lower bound sqrt(N-1)/2 on the mean LIS length."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return 0.5 * math.sqrt(N - 1)

"""Poissonized LIS distribution via Toeplitz determinants of Bessel moments.

The central objects are the n x n moment determinants D_{n-1}(lam) with
entries I_{j-k}(2 sqrt(lam)), the Poissonized distribution function

    phi_n(lam) = exp(-lam) * D_{n-1}(lam),

and the orthonormal-polynomial norm ratios kappa^2_k = D_{k-1}/D_k.  Because
the leading principal minors of a positive-definite Toeplitz matrix are the
smaller Toeplitz determinants, one symmetric (Cholesky) factorization yields
every log-pivot log(D_k/D_{k-1}) = -log kappa^2_k at once; determinants are
only ever accumulated in log space (D_n grows like e^lam).

Backends:

* float64 Cholesky for z = 2 sqrt(lam) <= 26 — beyond that the Schur
  complements cancel at size e^z and float64 breaks down;
* adaptive-precision mpmath Cholesky (verified by precision stepping) for
  moderate sizes at any z;
* the reflection-coefficient recurrence (`log_kappa_sq_recurrence`) for
  large k and lam, an O(k_max) route cross-validated against the
  determinants in the test suite.

Also here: the discrete-measure Hankel determinants H_r and their identity
with D_r - D_{r-1}, plus the truncated (largest-"eigenvalue") variant.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import mpmath as mp
import numpy as np

from .bessel import bessel_i, bessel_i_mp
from .combinat import distribution_table
from .errors import ConditioningError, DomainError, TruncationError, UsageError

# float64 Cholesky is trusted up to z = 2 sqrt(lam) = 6: pivot errors compound
# through the Schur complements like eps * e^z (measured ~1e-13 at z = 6,
# ~1e-9 at z = 8, O(1) by z = 20 against the mp backend), and the acceptance
# routes demand 1e-9 agreement.
Z_FLOAT_MAX = 6.0
Z_FLOAT_HARD = 30.0     # explicit method="float" refuses beyond this
MP_SIZE_MAX = 320       # largest matrix the mp backend will factor
COND_LIMIT = 1e12

# mpmath's precision context is process-global, so the high-precision
# sections serialize; float64-path evaluations stay fully parallel
_MP_LOCK = threading.Lock()


@dataclass(frozen=True)
class LogDetResult:
    dimension: int
    lam: float
    log_value: float
    condition_estimate: float


@dataclass(frozen=True)
class PoissonizedPoint:
    n: int
    lam: float
    phi: float


class RouteValue(NamedTuple):
    """A phi evaluation together with its reported truncation bound."""

    value: float
    tail_bound: float


def _validate(n: int, lam: float) -> None:
    if n < 1:
        raise DomainError("n must be >= 1")
    if not (lam > 0):
        raise DomainError("lambda must be positive")


@lru_cache(maxsize=256)
def _logpivots_f64(size: int, lam: float) -> tuple:
    """(log-pivot array, condition estimate) by float64 Cholesky."""
    z = 2.0 * math.sqrt(lam)
    d = np.array([bessel_i(j, z) for j in range(size)])
    A = d[np.abs(np.subtract.outer(np.arange(size), np.arange(size)))]
    norm1 = float(np.max(np.abs(A).sum(axis=0)))
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(
            f"moment matrix numerically non-PD at size {size}, lam {lam}",
            condition_estimate=math.inf) from exc
    piv = np.diag(L) ** 2
    cond = norm1 * float(1.0 / piv.min())
    return 2.0 * np.log(np.diag(L)), cond


def _mp_logpivots_once(size: int, lam: float, dps: int):
    with mp.workdps(dps):
        z = 2 * mp.sqrt(mp.mpf(lam))
        d = [bessel_i_mp(j, z) for j in range(size)]
        L = [[mp.mpf(0)] * size for _ in range(size)]
        lp = []
        for i in range(size):
            Li = L[i]
            for j in range(i + 1):
                Lj = L[j]
                acc = mp.mpf(0)
                for k in range(j):
                    acc += Li[k] * Lj[k]
                s = d[abs(i - j)] - acc
                if i == j:
                    if s <= 0:
                        return None
                    lp.append(mp.log(s))
                    Li[j] = mp.sqrt(s)
                else:
                    Li[j] = s / Lj[j]
        return [float(v) for v in lp]


@lru_cache(maxsize=64)
def _logpivots_mp(size: int, lam: float) -> tuple:
    """Adaptive-precision mp Cholesky: step precision until two runs agree.

    Needed digits scale like z (not the naive 0.43*z: the pivot cancellation
    compounds through the Schur complements), so start near z and verify.
    """
    if size > MP_SIZE_MAX:
        raise ConditioningError(
            f"mp factorization limited to size <= {MP_SIZE_MAX} (got {size}); "
            "use the recurrence route", condition_estimate=math.inf)
    z = 2.0 * math.sqrt(lam)
    dps = max(40, int(z) + 40 + size // 8)
    with _MP_LOCK:
        prev = _mp_logpivots_once(size, lam, dps)
        for _ in range(5):
            dps += max(40, dps // 3)
            cur = _mp_logpivots_once(size, lam, dps)
            if prev is not None and cur is not None:
                diff = max(abs(a - b) for a, b in zip(prev, cur))
                if diff < 1e-12:
                    arr = np.array(cur)
                    cond = math.exp(min(math.log(size) + z, 700.0))
                    return arr, cond
            prev = cur
    raise ConditioningError(
        f"mp factorization failed to stabilize at size {size}, lam {lam}",
        condition_estimate=math.inf)


def _logpivots(size: int, lam: float, method: str = "auto") -> tuple:
    z = 2.0 * math.sqrt(lam)
    if method == "float":
        if z > Z_FLOAT_HARD:
            raise ConditioningError(
                f"float64 factorization refused at z={z:.1f} (> {Z_FLOAT_HARD})",
                condition_estimate=math.exp(min(z, 700.0)))
        return _logpivots_f64(size, float(lam))
    if method == "auto" and z <= Z_FLOAT_MAX:
        return _logpivots_f64(size, float(lam))
    if method in ("auto", "mp"):
        return _logpivots_mp(size, float(lam))
    raise UsageError(f"unknown method {method!r}")


def log_toeplitz_det(n: int, lam: float, method: str = "auto") -> LogDetResult:
    """log D_{n-1}(lam): the n x n determinant det(I_{j-k}(2 sqrt lam))."""
    _validate(n, lam)
    lp, cond = _logpivots(n, lam, method)
    if cond > COND_LIMIT and method == "float":
        raise ConditioningError(
            f"condition estimate {cond:.2e} exceeds {COND_LIMIT:.0e}",
            condition_estimate=cond)
    return LogDetResult(dimension=n, lam=float(lam),
                        log_value=float(lp.sum() if hasattr(lp, "sum") else sum(lp)),
                        condition_estimate=cond)


def log_det_prefix(size: int, lam: float, method: str = "auto") -> np.ndarray:
    """Array of log D_k for k = 0..size-1 from one factorization."""
    _validate(size, lam)
    lp, _ = _logpivots(size, lam, method)
    return np.cumsum(np.asarray(lp))


def log_phi(n: int, lam: float, method: str = "auto") -> float:
    """log phi_n(lam); auto-routes to the recurrence for large z."""
    _validate(n, lam)
    z = 2.0 * math.sqrt(lam)
    if method == "auto" and z > Z_FLOAT_MAX:
        lk, k_max = log_kappa_sq_recurrence(lam, k_min=n)
        return float(lk[n:].sum())
    det = log_toeplitz_det(n, lam, method)
    return det.log_value - lam


def phi(n: int, lam: float, method: str = "auto") -> PoissonizedPoint:
    """phi_n(lam) = exp(-lam) D_{n-1}(lam), clamped to (0, 1] at roundoff."""
    val = math.exp(min(log_phi(n, lam, method), 0.0))
    return PoissonizedPoint(n=n, lam=float(lam), phi=val)


def kappa_sq(k: int, lam: float, method: str = "auto") -> float:
    """kappa^2_k(lam) = D_{k-1}(lam)/D_k(lam) (> 0)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if not (lam > 0):
        raise DomainError("lambda must be positive")
    z = 2.0 * math.sqrt(lam)
    if method == "auto" and z > Z_FLOAT_MAX and k + 1 > MP_SIZE_MAX:
        method = "recurrence"
    if method == "recurrence":
        lk, _ = log_kappa_sq_recurrence(lam, k_min=k)
        return float(math.exp(lk[k]))
    lp, _ = _logpivots(k + 1, lam, method)
    return float(math.exp(-lp[k]))


def phi_via_kappa(n: int, lam: float, k_max: int) -> RouteValue:
    """phi_n from the telescoped norm ratios: exp(sum_{k=n}^{k_max} log kappa^2_k).

    The reported tail bound uses the heuristic subcritical envelope
    (1/4) e^{-k/4} summed past k_max; it is an empirical reporting device,
    not a proven constant.
    """
    _validate(n, lam)
    if k_max <= n:
        raise UsageError("k_max must exceed n")
    if 2.0 * math.sqrt(lam) / k_max > 0.5:
        raise TruncationError(
            f"k_max={k_max} too small: need 2 sqrt(lam)/k_max <= 1/2 at lam={lam}")
    lp, _ = _logpivots(k_max + 1, lam)
    s = -float(np.sum(lp[n:k_max + 1]))
    tail = 0.25 * math.exp(-0.25 * k_max) / (1.0 - math.exp(-0.25))
    return RouteValue(value=math.exp(min(s, 0.0)), tail_bound=tail)


def phi_via_series(n: int, lam: float, N_max: int) -> RouteValue:
    """Poissonized series sum_{N<=N_max} e^{-lam} lam^N/N! q_{n,N}.

    The tail bound is rigorous: 0 <= q <= 1, so the remainder is at most the
    Poisson upper tail past N_max.  lam = 0 is allowed here (the empty
    permutation carries all the mass, so the value is exactly 1).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    if lam == 0.0:
        return RouteValue(value=1.0, tail_bound=0.0)
    table_cache = {}
    pmf = math.exp(-lam)
    total = pmf  # N=0 term: q_{n,0} = 1
    for N in range(1, N_max + 1):
        pmf *= lam / N
        if n >= N:
            q = 1.0
        else:
            if N not in table_cache:
                table_cache[N] = distribution_table(N, n_max=min(n, N))
            q = float(table_cache[N][n])
        total += pmf * q
    # Poisson upper tail past N_max
    tail = 0.0
    t = pmf
    N = N_max
    while True:
        N += 1
        t *= lam / N
        tail += t
        if t < 1e-3 * tail or t < 1e-300:
            break
    tail *= 1.0 / max(1e-12, (1.0 - lam / (N + 1))) if lam < N + 1 else 1.0
    return RouteValue(value=total, tail_bound=tail)


# ---------------------------------------------------------------------------
# Reflection-coefficient recurrence
#
# The monic orthogonal polynomials for the weight exp(2 sqrt(lam) cos theta)
# have real reflection coefficients alpha_k = -Phi_{k+1}(0) satisfying the
# classical string (discrete Painleve II) equation
#
#     alpha_{n+1} + alpha_{n-1} = -(n+1) alpha_n / (sqrt(lam) (1 - alpha_n^2))
#
# with alpha_{-1} = -1, alpha_0 = I_1/I_0, and
#
#     kappa^2_0 = 1/I_0,   kappa^2_{k+1} = kappa^2_k / (1 - alpha_k^2).
#
# Forward iteration sheds ~0.9*z digits before the spectral edge (a Miller
# phenomenon: the decaying branch is minimal past k ~ z), so the iteration
# runs in mpmath at ~z digits and is accepted only when a higher-precision
# rerun agrees.  The suite pins this route against the determinant route.
# ---------------------------------------------------------------------------

def _recurrence_once(lam: float, k_top: int, dps: int):
    with mp.workdps(dps):
        rt = mp.sqrt(mp.mpf(lam))
        z = 2 * rt
        i0 = bessel_i_mp(0, z)
        i1 = bessel_i_mp(1, z)
        a_prev = mp.mpf(-1)
        a_cur = i1 / i0
        out = np.empty(k_top + 1, dtype=np.float64)
        out[0] = float(-mp.log(i0))
        logk2 = -mp.log(i0)
        for k in range(k_top):
            w = 1 - a_cur * a_cur
            if w <= 0:
                return None
            logk2 = logk2 - mp.log(w)
            out[k + 1] = float(logk2)
            a_next = -(k + 1) * a_cur / (rt * w) - a_prev
            a_prev, a_cur = a_cur, a_next
        return out


def default_k_top(lam: float, k_min: int = 0) -> int:
    """Index past which |log kappa^2_k| < ~1e-30 (Airy-type decay depth)."""
    z = 2.0 * math.sqrt(lam)
    return max(int(z + 16.0 * (z / 2.0) ** (1.0 / 3.0) + 40), k_min + 40)


@lru_cache(maxsize=32)
def _recurrence_cached(lam: float, k_top: int) -> tuple:
    z = 2.0 * math.sqrt(lam)
    dps = max(40, int(z) + 60)
    with _MP_LOCK:
        prev = _recurrence_once(lam, k_top, dps)
        for _ in range(5):
            dps += max(60, dps // 2)
            cur = _recurrence_once(lam, k_top, dps)
            if prev is not None and cur is not None:
                if np.max(np.abs(prev - cur)) < 1e-13:
                    return cur, k_top
            prev = cur
    raise ConditioningError(
        f"reflection recurrence failed to stabilize at lam={lam}",
        condition_estimate=math.inf)


def log_kappa_sq_recurrence(lam: float, k_min: int = 0):
    """Array of log kappa^2_k for k = 0..k_top, plus k_top itself."""
    if not (lam > 0):
        raise DomainError("lambda must be positive")
    return _recurrence_cached(float(lam), default_k_top(lam, k_min))


# ---------------------------------------------------------------------------
# Hankel determinants of the discrete measure nu({m}) = lam^m/(m!)^2, m >= 1
# ---------------------------------------------------------------------------

def _hankel_gram(r: int, lam: float, m_top: int) -> np.ndarray:
    """Gram matrix of monic falling factorials q_j(m) = m(m-1)..(m-j+1)."""
    ms = np.arange(1, m_top + 1, dtype=np.float64)
    # weights lam^m / (m!)^2, built multiplicatively
    w = np.empty(m_top)
    cur = lam  # m = 1 weight
    for i, m in enumerate(range(1, m_top + 1)):
        if i > 0:
            cur *= lam / (m * m)
        w[i] = cur
    Q = np.empty((r, m_top))
    Q[0] = 1.0
    for j in range(1, r):
        Q[j] = Q[j - 1] * (ms - (j - 1))
    return (Q * w) @ Q.T


def _hankel_logdet_mp(r: int, lam: float, m_top: int, dps: int = 50):
    """log det of the moment Gram in mpmath.

    The measure decays so fast for small lam that only ~2 sqrt(lam)+ a few
    points carry weight; with r polynomials on that support the float64 Gram
    can be singular to working precision, so the small determinant is done
    exactly enough here.  Returns None for a numerically non-PD matrix.
    """
    with mp.workdps(dps):
        lam_mp = mp.mpf(lam)
        w = []
        cur = lam_mp
        for m in range(1, m_top + 1):
            if m > 1:
                cur *= lam_mp / (m * m)
            w.append(cur)
        Q = [[mp.mpf(1)] * m_top]
        for j in range(1, r):
            Q.append([Q[j - 1][i] * (i + 1 - (j - 1)) for i in range(m_top)])
        G = [[sum(Q[a][i] * Q[b][i] * w[i] for i in range(m_top))
              for b in range(r)] for a in range(r)]
        logdet = mp.mpf(0)
        L = [[mp.mpf(0)] * r for _ in range(r)]
        for i in range(r):
            for j in range(i + 1):
                s = G[i][j] - sum(L[i][k] * L[j][k] for k in range(j))
                if i == j:
                    if s <= 0:
                        return None
                    logdet += mp.log(s)
                    L[i][j] = mp.sqrt(s)
                else:
                    L[i][j] = s / L[j][j]
        return float(logdet)


def _hankel_cap(r: int, lam: float) -> int:
    return max(4 * r, int(math.ceil(6.0 * math.sqrt(lam))) + 20)


def hankel_h(r: int, lam: float) -> float:
    """H_r(lam) = (1/r!) sum_{h in Z_+^r} Delta(h)^2 prod lam^{h_j}/(h_j!)^2.

    Evaluated as the r x r determinant of discrete moments (any monic
    polynomial family gives the same determinant; falling factorials keep the
    Gram well scaled).  The summation cap carries a certified remainder: past
    m ~ 2 sqrt(lam) the weights decay super-geometrically.
    """
    if not (1 <= r <= 8):
        raise DomainError("r must be in 1..8")
    if not (lam > 0):
        raise DomainError("lambda must be positive")
    m_top = _hankel_cap(r, lam)
    # remainder check: extending the cap must not move the moments
    G = _hankel_gram(r, lam, m_top)
    G2 = _hankel_gram(r, lam, m_top + 8)
    if not np.allclose(G, G2, rtol=1e-13, atol=0.0):
        raise TruncationError(f"hankel cap {m_top} insufficient at r={r}, lam={lam}")
    with _MP_LOCK:
        ld = _hankel_logdet_mp(r, lam, m_top + 8)
    if ld is None:
        raise ConditioningError("Hankel Gram matrix non-PD",
                                condition_estimate=math.inf)
    return math.exp(ld)


def hankel_h_direct(r: int, lam: float) -> float:
    """Brute-force r-fold sum over {1..cap}^r; oracle for r <= 4."""
    if not (1 <= r <= 4):
        raise DomainError("direct summation limited to r <= 4")
    cap = _hankel_cap(r, lam)
    logw = [m * math.log(lam) - 2.0 * math.lgamma(m + 1) for m in range(1, cap + 1)]
    w = [math.exp(v) for v in logw]
    import itertools
    total = 0.0
    for h in itertools.product(range(1, cap + 1), repeat=r):
        prod = 1.0
        for i in range(r):
            for j in range(i + 1, r):
                prod *= (h[j] - h[i])
        if prod == 0.0:
            continue
        weight = 1.0
        for hj in h:
            weight *= w[hj - 1]
        total += prod * prod * weight
    return total / math.factorial(r)


def hankel_h_truncated(r: int, lam: float, n: int) -> float:
    """H_r(lam; n): the same sum with every h_j restricted to {1..n+r-1}."""
    if not (1 <= r <= 8):
        raise DomainError("r must be in 1..8")
    if not (lam > 0):
        raise DomainError("lambda must be positive")
    m_top = n + r - 1
    if m_top < r:
        return 0.0  # fewer support points than variables
    m_top = min(m_top, _hankel_cap(r, lam) + 8)
    with _MP_LOCK:
        ld = _hankel_logdet_mp(r, lam, m_top)
    return 0.0 if ld is None else math.exp(ld)


def verify_hankel_toeplitz(r: int, lam: float) -> float:
    """Relative residual of the identity H_r = lam^{r(r-1)/2} (T_r - T_{r-1}),
    where T_m denotes the m x m Toeplitz determinant (T_0 = 1).

    T_r - T_{r-1} cancels at relative scale H_r/T_r (down to ~1e-15 on the
    tested grid), so both determinants and their difference are formed in
    mpmath; only the final residual is floating point.
    """
    if not (1 <= r <= 8):
        raise DomainError("r must be in 1..8")
    h = hankel_h(r, lam)
    with _MP_LOCK, mp.workdps(60):
        z = 2 * mp.sqrt(mp.mpf(lam))
        d = [bessel_i_mp(j, z) for j in range(r)]
        def toep_det(m):
            if m == 0:
                return mp.mpf(1)
            A = mp.matrix(m, m)
            for i in range(m):
                for jj in range(m):
                    A[i, jj] = d[abs(i - jj)]
            return mp.det(A)
        rhs = mp.mpf(lam) ** (r * (r - 1) // 2) * (toep_det(r) - toep_det(r - 1))
        return float(abs(mp.mpf(h) - rhs) / rhs)

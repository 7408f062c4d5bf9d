"""Closed-form asymptotics: large-deviation rates, equilibrium measures, the
g-function, regime classification for kappa^2 and phi_n, the edge scaling
map, and de-Poissonization sandwich bounds.

Conventions used throughout (matching the generating-function analysis):
gamma = 2 sqrt(lam)/(n+1) for phi_n, gamma = 2 sqrt(lam)/q for kappa^2_{q-1},
and the window coordinate t = 2^(1/3) (n+1)^(2/3) (1 - gamma), so t > 0 is
the subcritical side (phi -> 1) and t < 0 the supercritical side (phi -> 0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.integrate import quad

from . import toeplitz
from .combinat import distribution_table
from .errors import AccuracyError, DomainError
from .painleve import PainleveSolution, log_tw_cdf, m1_22

# ---------------------------------------------------------------------------
# Large-deviation rate functions
# ---------------------------------------------------------------------------

def rate_U(x: float) -> float:
    """Lower-tail rate for the Poissonized length on the lam scale.

    U(x) = 1 - 2x + (3/4) x^2 + (x^2/2) log(2/x), zero exactly at x = 2.
    """
    if not (0.0 < x <= 2.0):
        raise DomainError("rate_U requires 0 < x <= 2")
    return 1.0 - 2.0 * x + 0.75 * x * x + 0.5 * x * x * math.log(2.0 / x)


def rate_I(x: float) -> float:
    """Upper-tail rate I(x) = 2x acosh(x/2) - 2 sqrt(x^2 - 4), x >= 2."""
    if x < 2.0:
        raise DomainError("rate_I requires x >= 2")
    return 2.0 * x * math.acosh(x / 2.0) - 2.0 * math.sqrt(x * x - 4.0)


def rate_H(x: float) -> float:
    """Lower-tail rate for the fixed-N length (differs from U):

    H(x) = -1/2 + x^2/8 + log(x/2) - (1 + x^2/4) log(2x^2/(4 + x^2)).
    """
    if not (0.0 < x <= 2.0):
        raise DomainError("rate_H requires 0 < x <= 2")
    return (-0.5 + x * x / 8.0 + math.log(x / 2.0)
            - (1.0 + x * x / 4.0) * math.log(2.0 * x * x / (4.0 + x * x)))


# ---------------------------------------------------------------------------
# Equilibrium measure for V(z) = -(gamma/2)(z + 1/z) on the unit circle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquilibriumMeasure:
    """Minimizer of the weighted logarithmic energy on the circle.

    gamma <= 1: density (1 + gamma cos theta)/(2 pi) on the full circle,
    Lagrange constant 0.  gamma > 1: support [-theta_c, theta_c] with
    sin^2(theta_c/2) = 1/gamma, density (gamma/pi) cos(theta/2)
    sqrt(1/gamma - sin^2(theta/2)), constant -gamma + log gamma + 1.
    """

    gamma: float
    full_circle: bool
    theta_c: float
    lagrange_l: float

    def density(self, theta: float) -> float:
        if self.full_circle:
            return (1.0 + self.gamma * math.cos(theta)) / (2.0 * math.pi)
        if abs(theta) > self.theta_c:
            return 0.0
        s = math.sin(theta / 2.0)
        return (self.gamma / math.pi) * math.cos(theta / 2.0) * math.sqrt(
            max(1.0 / self.gamma - s * s, 0.0))

    def normalization(self) -> float:
        """Total mass by adaptive quadrature (should be 1)."""
        if self.full_circle:
            val, _ = quad(self.density, -math.pi, math.pi, epsabs=1e-13, limit=200)
            return val
        # substitute sin(theta/2) = s_c * s: the integrand becomes the
        # semicircle (2/pi) sqrt(1 - s^2), removing the edge root
        val, _ = quad(lambda s: (2.0 / math.pi) * math.sqrt(max(1.0 - s * s, 0.0)),
                      -1.0, 1.0, epsabs=1e-13, limit=200)
        return val


def equilibrium_measure(gamma: float) -> EquilibriumMeasure:
    if not (gamma > 0):
        raise DomainError("gamma must be positive")
    if gamma <= 1.0:
        return EquilibriumMeasure(gamma=gamma, full_circle=True,
                                  theta_c=math.pi, lagrange_l=0.0)
    theta_c = 2.0 * math.asin(math.sqrt(1.0 / gamma))
    return EquilibriumMeasure(gamma=gamma, full_circle=False, theta_c=theta_c,
                              lagrange_l=-gamma + math.log(gamma) + 1.0)


def eval_g(gamma: float, z: complex) -> complex:
    """Closed-form g(z) = int log(z - s) dmu(s) for gamma <= 1.

    log z - gamma/(2z) outside the circle, -(gamma/2) z + i pi inside;
    g(z) - log z -> 0 at infinity and g(0) = i pi.
    """
    if not (0.0 <= gamma <= 1.0):
        raise DomainError("eval_g is the full-circle branch: 0 <= gamma <= 1")
    z = complex(z)
    r = abs(z)
    if abs(r - 1.0) < 1e-12:
        raise DomainError("g is discontinuous across |z| = 1")
    if z.imag == 0.0 and z.real <= -1.0:
        raise DomainError("z on the branch cut (-inf, -1]")
    if r > 1.0:
        return cmath.log(z) - gamma / (2.0 * z)
    return -(gamma / 2.0) * z + 1j * math.pi


def variational_residual(gamma: float, phi_angle: float) -> float:
    """Euler-Lagrange residual 2 int log|e^{i phi} - s| dmu(s) - V + l.

    Zero (to quadrature accuracy) on the support, strictly negative off the
    support when gamma > 1.
    """
    if not (gamma > 0):
        raise DomainError("gamma must be positive")
    meas = equilibrium_measure(gamma)
    phi_angle = float(phi_angle)

    def integrand(theta: float) -> float:
        d = abs(cmath.exp(1j * phi_angle) - cmath.exp(1j * theta))
        if d == 0.0:
            return 0.0
        return 2.0 * math.log(d) * meas.density(theta)

    lo, hi = (-math.pi, math.pi) if meas.full_circle else (-meas.theta_c, meas.theta_c)
    pts = [phi_angle] if lo < phi_angle < hi else None
    val, err = quad(integrand, lo, hi, points=pts, limit=400, epsabs=1e-11)
    if err > 1e-7:
        raise AccuracyError(f"variational quadrature error {err:.2e}")
    return val + gamma * math.cos(phi_angle) + meas.lagrange_l


# ---------------------------------------------------------------------------
# Regime classification and closed-form estimates
# ---------------------------------------------------------------------------

REGIMES = ("SubFar", "SubNear", "Critical", "SuperNear", "SuperFar")


@dataclass(frozen=True)
class RegimeThresholds:
    delta5: float = 0.1
    delta6: float = 0.1
    delta7: float = 0.1
    M5: float = 2.0
    M6: float = 2.0
    M7: float = 2.0


@dataclass(frozen=True)
class RegimeClassification:
    n: int
    lam: float
    gamma_n: float
    t_crit: float
    regime: str
    thresholds: RegimeThresholds


def classify_regime(n: int, lam: float,
                    thresholds: RegimeThresholds = RegimeThresholds()) -> RegimeClassification:
    """Assign one of the five asymptotic regimes of phi_n(lam).

    The source ranges overlap; boundaries here resolve toward the critical
    window, then by the delta cutoffs.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not (lam > 0):
        raise DomainError("lambda must be positive")
    gamma_n = 2.0 * math.sqrt(lam) / (n + 1)
    w = 2.0 ** (1.0 / 3.0) * (n + 1) ** (2.0 / 3.0)
    t = w * (1.0 - gamma_n)
    th = thresholds
    if -th.M6 <= t <= th.M6:
        regime = "Critical"
    elif t > 0:
        regime = "SubFar" if gamma_n <= 1.0 - th.delta5 else "SubNear"
    else:
        regime = "SuperFar" if gamma_n >= 1.0 + th.delta7 else "SuperNear"
    return RegimeClassification(n=n, lam=float(lam), gamma_n=gamma_n,
                                t_crit=t, regime=regime, thresholds=th)


@dataclass(frozen=True)
class KappaEstimate:
    q: int
    gamma: float
    t: float
    regime: str
    estimate: float
    caveat: str


def kappa_asymptotic(q: int, gamma: float, sol: PainleveSolution,
                     window: float = 2.0, delta: float = 0.1) -> KappaEstimate:
    """Closed-form prediction for kappa^2_{q-1} at gamma = 2 sqrt(lam)/q.

    Critical window |t| <= window * 2^(1/3) ... : 1 + 2^(1/3) v(t)/q^(1/3)
    with v = the m1_22 integral (error O(q^{-2/3})); subcritical: 1 with an
    exponentially small envelope; supercritical: e^{q(-gamma+log gamma+1)} /
    sqrt(gamma) (relative error O(1/q)).
    """
    if q < 2:
        raise DomainError("q must be >= 2")
    if not (gamma > 0):
        raise DomainError("gamma must be positive")
    t = 2.0 ** (1.0 / 3.0) * q ** (2.0 / 3.0) * (1.0 - gamma)
    if abs(t) <= window:
        v = m1_22(sol, t)
        est = 1.0 + 2.0 ** (1.0 / 3.0) * v / q ** (1.0 / 3.0)
        return KappaEstimate(q, gamma, t, "Critical", est,
                             "error O(q^(-2/3)), constant depends on the window")
    if gamma < 1.0:
        regime = "SubFar" if gamma <= 1.0 - delta else "SubNear"
        env = math.exp(-(2.0 * math.sqrt(2.0) / 3.0) * q * (1.0 - gamma) ** 1.5) \
            / q ** (1.0 / 3.0)
        return KappaEstimate(q, gamma, t, regime, 1.0,
                             f"|kappa^2 - 1| <= C*{env:.3e}, C unspecified")
    regime = "SuperFar" if gamma >= 1.0 + delta else "SuperNear"
    est = math.exp(q * (-gamma + math.log(gamma) + 1.0)) / math.sqrt(gamma)
    return KappaEstimate(q, gamma, t, regime, est,
                         "relative error O(1/(q (gamma-1))) near 1, O(1/q) beyond")


@dataclass(frozen=True)
class PhiAsymptotics:
    classification: RegimeClassification
    log_phi_estimate: Optional[float]
    bound_exponent: Optional[float]
    caveat: str


def phi_asymptotic(n: int, lam: float, sol: PainleveSolution,
                   thresholds: RegimeThresholds = RegimeThresholds()) -> PhiAsymptotics:
    """Regime classification plus the applicable estimate/bound for log phi.

    Critical: log phi ~ int_t^inf v = log F(t).  SuperNear: the upper bound
    is t^3/96 + C with t < 0 here, i.e. a negative cubic (the bound's sign
    follows its derivation; the displayed form agrees once t carries the
    window sign convention).  Sub regimes report the exponential envelope;
    SuperFar reports the quadratic-in-n decay marker.  All unknown constants
    stay symbolic in the caveat.
    """
    cls = classify_regime(n, lam, thresholds)
    t = cls.t_crit
    if cls.regime == "Critical":
        est = log_tw_cdf(sol, t)
        return PhiAsymptotics(cls, est, None,
                              "log phi = log F(t) + O(n^(-1/3)) + O(e^(-M6^(3/2)/4))")
    if cls.regime in ("SubFar", "SubNear"):
        expo = -0.5 * (n + 1) * max(1.0 - cls.gamma_n, 0.0) ** 1.5 \
            if cls.regime == "SubNear" else -float(n)
        return PhiAsymptotics(cls, None, expo,
                              "|log phi| <= C e^(exponent), C unspecified")
    if cls.regime == "SuperNear":
        return PhiAsymptotics(cls, None, t ** 3 / 96.0,
                              "log phi <= t^3/96 + C(M7); t < 0 in this regime")
    return PhiAsymptotics(cls, None, -lam,
                          "phi <= C e^(-c lam) <= C e^(-c n^2), constants unspecified")


# ---------------------------------------------------------------------------
# Edge scaling and de-Poissonization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScaledCdfValue:
    N: int
    t: float
    n: int
    value: float
    path: str  # "exact" | "poissonized" | "boundary"


def scaled_cdf(N: int, t: float, exact_limit: int = 60,
               m: float = 1.0) -> ScaledCdfValue:
    """Prob((l_N - 2 sqrt N)/N^(1/6) <= t) with n = floor(2 sqrt N + t N^(1/6)).

    Exact hook-sum path up to exact_limit, otherwise the midpoint of the
    de-Poissonization sandwich at the given m.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    n = math.floor(2.0 * math.sqrt(N) + t * N ** (1.0 / 6.0))
    if n < 1:
        return ScaledCdfValue(N, t, n, 0.0, "boundary")
    if n >= N:
        return ScaledCdfValue(N, t, n, 1.0, "boundary")
    if N <= exact_limit:
        q = float(distribution_table(N, n_max=n, limit=exact_limit)[n])
        return ScaledCdfValue(N, t, n, q, "exact")
    sb = depoisson_bounds(n, N, m)
    return ScaledCdfValue(N, t, n, 0.5 * (sb.lower + sb.upper), "poissonized")


@dataclass(frozen=True)
class SandwichBound:
    n: int
    N: int
    m: float
    mu_N: float
    nu_N: float
    lower: float
    upper: float
    nu_clamped: bool
    slack_scale: float  # the unknown-constant C/N^m enters at this scale


def depoisson_bounds(n: int, N: int, m: float,
                     phi_eval: Optional[Callable[[int, float], float]] = None) -> SandwichBound:
    """Sandwich phi_n(mu_N) - C/N^m <= q_{n,N} <= phi_n(nu_N) + C/N^m.

    mu/nu sit at N +- (2 sqrt(m+1)+1) sqrt(N log N).  At small N the nu side
    can go nonpositive; the upper bound is then the lam -> 0+ limit 1 (flagged
    nu_clamped).  The unknown constant is reported as a scale, never folded
    into the numbers.
    """
    if N < 2:
        raise DomainError("N must be >= 2")
    if not (m > 0):
        raise DomainError("m must be positive")
    if phi_eval is None:
        phi_eval = lambda nn, ll: toeplitz.phi(nn, ll).phi
    radius = (2.0 * math.sqrt(m + 1.0) + 1.0) * math.sqrt(N * math.log(N))
    mu = N + radius
    nu = N - radius
    lower = phi_eval(n, mu)
    clamped = nu <= 0.0
    upper = 1.0 if clamped else phi_eval(n, nu)
    return SandwichBound(n=n, N=N, m=m, mu_N=mu, nu_N=nu, lower=lower,
                         upper=upper, nu_clamped=clamped, slack_scale=N ** (-m))

"""Airy function Ai and its derivative on [-15, 20].

Two regimes:

* |x| <= 8: the pair of Maclaurin series solutions.  The alternating series
  cancel heavily for negative x (the summands reach ~6e2 while Ai itself can
  sit at a zero), so the sums are accumulated in extended precision (mpmath,
  30 digits) and rounded once at the end; this keeps the absolute error near
  the negative-axis zeros at the 1e-16 level.
* |x| > 8: Poincare asymptotic expansions, exponential on the right,
  oscillatory (phase zeta = (2/3)|x|^(3/2)) on the left.  At |x| = 8 the
  smallest term is ~e^(-2*zeta) ~ 1e-13 relative, shrinking rapidly further
  out; the seam against the series branch is checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .errors import DomainError

X_MIN = -15.0
X_MAX = 20.0
_SEAM = 8.0

# Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3); kept as mpf at
# 40 digits: float64-rounded constants would dominate the e^(2 zeta)
# cancellation between the two series on the positive axis.
with mp.workdps(40):
    _AI0_MP = mp.mpf(3) ** mp.mpf("-2/3") / mp.gamma(mp.mpf(2) / 3)
    _AIP0_MP = -(mp.mpf(3) ** mp.mpf("-1/3")) / mp.gamma(mp.mpf(1) / 3)
AI_ZERO = float(_AI0_MP)
AI_PRIME_ZERO = float(_AIP0_MP)


@dataclass(frozen=True)
class AiryValue:
    x: float
    ai: float
    ai_prime: float


def _maclaurin(x: float) -> tuple[float, float]:
    """Ai, Ai' from the two series solutions, summed at 30 digits."""
    with mp.workdps(30):
        xm = mp.mpf(x)
        x3 = xm ** 3
        # f  = sum c_k x^(3k)/(3k)!,  g = sum d_k x^(3k+1)/(3k+1)!
        # with the term recurrences below; fp, gp are their derivatives.
        f = mp.mpf(1)
        g = xm
        fp = mp.mpf(0)
        gp = mp.mpf(1)
        tf = mp.mpf(1)
        tg = xm
        tfp = mp.mpf(0)
        tgp = mp.mpf(1)
        k = 0
        tiny = mp.mpf(10) ** -33
        while True:
            tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
            tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
            if k == 0:
                tfp = xm * xm / 2
            else:
                tfp = tfp * x3 / ((3 * k) * (3 * k + 2))
            tgp = tgp * x3 / ((3 * k + 1) * (3 * k + 3))
            f += tf
            g += tg
            fp += tfp
            gp += tgp
            k += 1
            if abs(tf) < tiny * (1 + abs(f)) and abs(tg) < tiny * (1 + abs(g)):
                break
            if k > 400:
                raise DomainError("airy series did not converge")
        ai = _AI0_MP * f + _AIP0_MP * g
        aip = _AI0_MP * fp + _AIP0_MP * gp
        return float(ai), float(aip)


def _asym_coeffs(nmax: int) -> tuple[list[float], list[float]]:
    u = [1.0]
    v = [1.0]
    for k in range(1, nmax + 1):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
        v.append(u[-1] * (6 * k + 1) / (1.0 - 6 * k))
    return u, v


_U, _V = _asym_coeffs(40)


def _asym_right(x: float) -> tuple[float, float]:
    """x > seam: Ai ~ e^(-zeta)/(2 sqrt(pi) x^(1/4)) * sum (-1)^k u_k zeta^-k."""
    zeta = (2.0 / 3.0) * x * math.sqrt(x)
    su, sv = 0.0, 0.0
    sign = 1.0
    zk = 1.0
    prev = math.inf
    for k in range(len(_U)):
        tu = _U[k] * zk
        if abs(tu) >= prev:  # divergent tail reached
            break
        su += sign * tu
        sv += sign * _V[k] * zk
        prev = abs(tu)
        sign = -sign
        zk /= zeta
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pref * su / x ** 0.25
    aip = -pref * sv * x ** 0.25
    return ai, aip


def _asym_left(x: float) -> tuple[float, float]:
    """x < -seam: oscillatory expansion with phase zeta - pi/4."""
    y = -x
    zeta = (2.0 / 3.0) * y * math.sqrt(y)
    c = math.cos(zeta - 0.25 * math.pi)
    s = math.sin(zeta - 0.25 * math.pi)
    # even/odd splits of the u and v tails
    ue, uo, ve, vo = 0.0, 0.0, 0.0, 0.0
    zk = 1.0
    prev = math.inf
    for k in range(len(_U)):
        t = _U[k] * zk
        if abs(t) >= prev:
            break
        sgn = -1.0 if (k // 2) % 2 else 1.0  # (-1)^(k/2) per pair
        if k % 2 == 0:
            ue += sgn * t
            ve += sgn * _V[k] * zk
        else:
            uo += sgn * t
            vo += sgn * _V[k] * zk
        prev = abs(t)
        zk /= zeta
    q = 1.0 / (math.sqrt(math.pi) * y ** 0.25)
    ai = q * (c * ue + s * uo)
    aip = (y ** 0.25 / math.sqrt(math.pi)) * (s * ve - c * vo)
    return ai, aip


def airy(x: float) -> AiryValue:
    """Ai(x) and Ai'(x) for -15 <= x <= 20."""
    x = float(x)
    if not (X_MIN <= x <= X_MAX):
        raise DomainError(f"airy supports {X_MIN} <= x <= {X_MAX}, got {x}")
    if abs(x) <= _SEAM:
        ai, aip = _maclaurin(x)
    elif x > 0:
        ai, aip = _asym_right(x)
    else:
        ai, aip = _asym_left(x)
    return AiryValue(x=x, ai=ai, ai_prime=aip)


def ai(x: float) -> float:
    return airy(x).ai


def ai_prime(x: float) -> float:
    return airy(x).ai_prime

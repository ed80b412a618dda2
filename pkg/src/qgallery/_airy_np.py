"""Airy functions Ai and Bi, NumPy implementation.

Self-contained evaluation with no special-function dependencies:

* |x| <= 7 (and up to x = 4 on the positive side for Ai): Maclaurin series
  Ai = c1*f - c2*g, Bi = sqrt(3)*(c1*f + c2*g).
* x in [4, 9.5] for Ai: Chebyshev fit of the scaled function Ai(x)*exp(zeta),
  zeta = (2/3)*x^(3/2). The series suffers exponential cancellation here
  (f and g grow like exp(+zeta) while Ai decays like exp(-zeta)); the fit
  coefficients were generated offline with 40-digit arithmetic.
* beyond: standard asymptotic expansions in u_k = Gamma(3k+1/2) /
  (54^k k! Gamma(k+1/2)), truncated adaptively at the smallest term.

Accuracy (checked against an independent high-precision oracle in the test
suite): better than 1e-10 relative on the oscillatory branch relative to the
local envelope, ~1e-11 or better pointwise elsewhere.

Scaled variants ai_scaled = Ai*exp(+zeta) and bi_scaled = Bi*exp(-zeta)
(identity for x <= 0) keep two-wall determinants finite at large arguments.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

# Ai(0) = 3^(-2/3)/Gamma(2/3) and -Ai'(0) = 3^(-1/3)/Gamma(1/3)
_C1 = 0.3550280538878172
_C2 = 0.2588194037928068
_SQRT3 = 1.7320508075688772

# Chebyshev coefficients of Ai(x)*exp((2/3)x^(3/2)) on [4, 9.5]
# (generated offline at 40-digit precision; max relative error 4e-15).
_CHEB_A, _CHEB_B = 4.0, 9.5
_CHEB_AI = np.array([
    0.3525145268861484,
    -0.018130514115984753,
    0.00229469833134224,
    -0.0003451214639709723,
    5.583582737098027e-05,
    -9.400235511498292e-06,
    1.6225421162569348e-06,
    -2.849061176511779e-07,
    5.0663964971732084e-08,
    -9.098649810700495e-09,
    1.647203232564414e-09,
    -3.002457653041178e-10,
    5.50545758789123e-11,
    -1.0149118065270192e-11,
    1.880106191189579e-12,
    -3.498673464582837e-13,
    6.538397350316905e-14,
    -1.2268390082753415e-14,
    2.310740627090895e-15,
    -4.362914134510911e-16,
    7.986885413481217e-17,
])

# u_k coefficients of the asymptotic expansions
_UK = np.empty(40)
_UK[0] = 1.0
for _k in range(39):
    _UK[_k + 1] = _UK[_k] * (6 * _k + 1) * (6 * _k + 5) / (72.0 * (_k + 1))

_SERIES_MAX_TERMS = 80


def _maclaurin_fg(x):
    """The two Maclaurin basis sums f(x) and g(x)."""
    x = np.asarray(x, dtype=float)
    x3 = x * x * x
    f = np.ones_like(x)
    g = x.copy()
    tf = np.ones_like(x)
    tg = x.copy()
    for k in range(_SERIES_MAX_TERMS):
        tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
        f += tf
        g += tg
        if (np.abs(tf) < 1e-18 * np.abs(f)).all() and (
            np.abs(tg) < 1e-18 * np.maximum(np.abs(g), 1e-300)
        ).all():
            break
    return f, g


def _cheb_eval(coeffs, t):
    """Clenshaw evaluation; coeffs[0] carries the conventional 1/2 weight."""
    b0 = np.zeros_like(t)
    b1 = np.zeros_like(t)
    for ck in coeffs[:0:-1]:
        b0, b1 = ck + 2.0 * t * b0 - b1, b0
    return 0.5 * coeffs[0] + t * b0 - b1


def _asym_sums_pos(zeta):
    """Adaptive asymptotic sums for x > 0: (alternating, same-sign)."""
    sa = np.ones_like(zeta)
    sb = np.ones_like(zeta)
    term = 1.0 / zeta  # u_1/zeta with u_1 applied below
    term = _UK[1] * term
    active = np.ones_like(zeta, dtype=bool)
    prev = np.full_like(zeta, np.inf)
    for k in range(1, 38):
        active &= np.abs(term) < prev
        inc = np.where(active, term, 0.0)
        sa += (-1.0) ** k * inc
        sb += inc
        prev = np.where(active, np.abs(term), prev)
        term = term * _UK[k + 1] / _UK[k] / zeta
    return sa, sb


def _asym_sums_neg(t):
    """Adaptive asymptotic sums for the oscillatory branch: (even, odd)."""
    inv2 = 1.0 / (t * t)
    s_even = np.ones_like(t)
    s_odd = _UK[1] / t
    term_e = np.ones_like(t)
    term_o = _UK[1] / t
    active = np.ones_like(t, dtype=bool)
    for k in range(1, 18):
        new_e = term_e * (_UK[2 * k] / _UK[2 * k - 2]) * inv2
        new_o = term_o * (_UK[2 * k + 1] / _UK[2 * k - 1]) * inv2
        active &= (np.abs(new_e) < np.abs(term_e)) & (np.abs(new_o) < np.abs(term_o))
        s_even += np.where(active, (-1.0) ** k * new_e, 0.0)
        s_odd += np.where(active, (-1.0) ** k * new_o, 0.0)
        term_e = np.where(active, new_e, term_e)
        term_o = np.where(active, new_o, term_o)
    return s_even, s_odd


def _airy_all(x):
    """Return (ai, bi, ai_scaled, bi_scaled) for a float array."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ai = np.empty_like(x)
    bi = np.empty_like(x)
    ai_s = np.empty_like(x)
    bi_s = np.empty_like(x)

    neg_asym = x < -7.0
    mid = (~neg_asym) & (x <= _CHEB_A)
    cheb = (x > _CHEB_A) & (x <= _CHEB_B)
    pos_asym = x > _CHEB_B

    if neg_asym.any():
        z = -x[neg_asym]
        t = (2.0 / 3.0) * z ** 1.5
        s_even, s_odd = _asym_sums_neg(t)
        pref = 1.0 / (np.sqrt(np.pi) * z ** 0.25)
        c = np.cos(t - 0.25 * np.pi)
        s = np.sin(t - 0.25 * np.pi)
        ai[neg_asym] = pref * (c * s_even + s * s_odd)
        bi[neg_asym] = pref * (-s * s_even + c * s_odd)
        ai_s[neg_asym] = ai[neg_asym]
        bi_s[neg_asym] = bi[neg_asym]

    if mid.any():
        xm = x[mid]
        f, g = _maclaurin_fg(xm)
        a = _C1 * f - _C2 * g
        b = _SQRT3 * (_C1 * f + _C2 * g)
        ai[mid] = a
        bi[mid] = b
        zeta = (2.0 / 3.0) * np.where(xm > 0, xm, 0.0) ** 1.5
        ai_s[mid] = a * np.exp(zeta)
        bi_s[mid] = b * np.exp(-zeta)

    if cheb.any():
        xc = x[cheb]
        zeta = (2.0 / 3.0) * xc ** 1.5
        t = (2.0 * xc - (_CHEB_A + _CHEB_B)) / (_CHEB_B - _CHEB_A)
        a_scaled = _cheb_eval(_CHEB_AI, t)
        # Bi has no cancellation for x > 0: series stays accurate here.
        f, g = _maclaurin_fg(xc)
        b = _SQRT3 * (_C1 * f + _C2 * g)
        ai_s[cheb] = a_scaled
        ai[cheb] = a_scaled * np.exp(-zeta)
        bi[cheb] = b
        bi_s[cheb] = b * np.exp(-zeta)

    if pos_asym.any():
        xp = x[pos_asym]
        zeta = (2.0 / 3.0) * xp ** 1.5
        sa, sb = _asym_sums_pos(zeta)
        pref = 1.0 / (np.sqrt(np.pi) * xp ** 0.25)
        ai_s[pos_asym] = 0.5 * pref * sa
        bi_s[pos_asym] = pref * sb
        with np.errstate(over="ignore", under="ignore"):
            ai[pos_asym] = 0.5 * pref * sa * np.exp(-zeta)
            bi[pos_asym] = pref * sb * np.exp(zeta)

    return ai, bi, ai_s, bi_s


def airy_ai(x):
    """Ai(x), elementwise."""
    scalar = np.isscalar(x)
    out = _airy_all(x)[0]
    return float(out[0]) if scalar else out


def airy_bi(x):
    """Bi(x), elementwise (overflows for x beyond ~105; use airy_bi_scaled)."""
    scalar = np.isscalar(x)
    out = _airy_all(x)[1]
    return float(out[0]) if scalar else out


def airy_ai_scaled(x):
    """Ai(x)*exp(+(2/3)x^(3/2)) for x > 0; Ai(x) for x <= 0."""
    scalar = np.isscalar(x)
    out = _airy_all(x)[2]
    return float(out[0]) if scalar else out


def airy_bi_scaled(x):
    """Bi(x)*exp(-(2/3)x^(3/2)) for x > 0; Bi(x) for x <= 0."""
    scalar = np.isscalar(x)
    out = _airy_all(x)[3]
    return float(out[0]) if scalar else out


def _zero_estimate(n):
    """Asymptotic estimate of the magnitude of the n-th zero of Ai."""
    t = 3.0 * np.pi * (4.0 * n - 1.0) / 8.0
    t2 = 1.0 / (t * t)
    return t ** (2.0 / 3.0) * (
        1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0)))
    )


def airy_ai_zeros(n_max: int) -> np.ndarray:
    """Magnitudes lambda_n of the first n_max zeros of Ai (Ai(-lambda_n)=0),
    refined by bracketed root-finding to ~1e-12 relative."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    zeros = np.empty(n_max)
    for n in range(1, n_max + 1):
        est = _zero_estimate(n)
        lo, hi = est - 0.2, est + 0.2
        f = lambda lam: airy_ai(-lam)
        if f(lo) * f(hi) > 0:  # widen if the estimate is off (n=1 only risk)
            lo, hi = est - 0.5, est + 0.5
        zeros[n - 1] = brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16)
    return zeros

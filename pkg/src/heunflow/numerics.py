"""Complex special functions used as series bases.

All functions take and return Python/numpy complex scalars.  The confluent
hypergeometric functions follow the usual conventions

* ``kummer_phi(a, b, y)``        Φ(a, b; y) = M(a, b, y)
* ``regularized_phi(a, b, y)``   Φ(a, b; y) / Γ(b)
* ``phi_tilde(a, b, y)``         Γ(b − a) Φ(a, b; y) / Γ(b)
* ``tricomi_psi(a, b, y)``       Ψ(a, b; y) = U(a, b, y)
* ``gauss_f(a, b, c, x)``        F(a, b; c; x)
* ``regularized_f(a, b, c, x)``  F(a, b; c; x) / Γ(c)

Ψ is computed from the two-Φ connection formula when b is safely away from
an integer and the two terms do not cancel badly, from its asymptotic
expansion for large |y|, and from ``mpmath.hyperu`` otherwise.
"""

from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
from scipy import special as sc

from .exceptions import BranchError, NonConvergence, PoleError

__all__ = [
    "gamma",
    "rgamma",
    "loggamma",
    "pochhammer",
    "kummer_phi",
    "regularized_phi",
    "phi_tilde",
    "tricomi_psi",
    "tricomi_psi_scaled",
    "psi_sequence",
    "phi_hat_sequence",
    "gauss_f",
    "regularized_f",
    "bessel_j",
    "bessel_k",
    "bessel_i",
    "scaled_bessel_j_sequence",
    "scaled_bessel_k_sequence",
    "check_finite",
]

MAX_TERMS = 10_000
SERIES_EPS = 1e-16
# |y| beyond which the asymptotic expansion of Ψ is tried first
PSI_ASYMPTOTIC_RADIUS = 30.0
# distance of b from an integer below which the connection formula is avoided
PSI_INTEGER_GAP = 1e-3
# tolerated cancellation ratio in the connection formula
PSI_CANCELLATION = 1e3
# peak partial sum over result above which the Φ series is not trusted
PHI_CANCELLATION = 1e3

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# private extended-precision context, configured once and never mutated
_MP80 = mpmath.MPContext()
_MP80.prec = 80


def check_finite(*values, name="argument"):
    """Raise ``ValueError`` if any of the given scalars is NaN or infinite."""
    for v in values:
        if not cmath.isfinite(complex(v)):
            raise ValueError(f"{name} must be finite, got {v!r}")


def _nonpositive_integer(z, tol=0.0) -> int | None:
    """Return -m if z equals the nonpositive integer -m (within tol), else None."""
    z = complex(z)
    if abs(z.imag) > tol:
        return None
    r = round(z.real)
    if r <= 0 and abs(z.real - r) <= tol:
        return int(r)
    return None


def _sinpi(z: complex) -> complex:
    """sin(πz) with exact zeros at the integers."""
    z = complex(z)
    n = round(z.real)
    s = cmath.sin(math.pi * complex(z.real - n, z.imag))
    return -s if n % 2 else s


def _lanczos_log(z: complex) -> complex:
    # log Γ(z) for Re z >= 0.5
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma(z) -> complex:
    """Complex Gamma function.

    Lanczos approximation for ``Re z >= 0.5`` and the reflection formula
    otherwise.

    Raises
    ------
    PoleError
        If ``z`` is a nonpositive integer.
    """
    z = complex(z)
    check_finite(z)
    if _nonpositive_integer(z) is not None:
        raise PoleError(f"Gamma pole at z={z}")
    if z.real < 0.5:
        return math.pi / (_sinpi(z) * gamma(1.0 - z))
    if z.imag == 0.0 and z.real == round(z.real) and z.real <= 171:
        return complex(math.factorial(int(z.real) - 1))
    return cmath.exp(_lanczos_log(z))


def rgamma(z) -> complex:
    """Reciprocal Gamma function, entire (zero at the nonpositive integers)."""
    z = complex(z)
    check_finite(z)
    if _nonpositive_integer(z) is not None:
        return 0j
    if z.real < 0.5:
        return _sinpi(z) * gamma(1.0 - z) / math.pi
    return cmath.exp(-_lanczos_log(z))


def loggamma(z) -> complex:
    """log Γ(z) for ``Re z >= 0.5`` (continuous branch of the Lanczos form)."""
    z = complex(z)
    check_finite(z)
    if z.real < 0.5:
        raise ValueError("loggamma is only provided for Re z >= 0.5")
    return _lanczos_log(z)


def pochhammer(a, n: int) -> complex:
    """Rising factorial (a)_n for integer n >= 0."""
    out = 1.0 + 0j
    a = complex(a)
    for k in range(n):
        out *= a + k
    return out


def _series(first, ratio, k0=0, max_terms=MAX_TERMS, with_peak=False):
    """Sum a hypergeometric-type series given its first term and term ratio.

    Stops when two consecutive terms are below ``SERIES_EPS`` times the
    running maximum of the partial sums.  With ``with_peak`` the largest
    partial-sum magnitude is returned as well, as a cancellation measure.
    """
    term = complex(first)
    total = term
    biggest = abs(total)
    small = 0
    k = k0
    for _ in range(max_terms):
        term = term * ratio(k)
        total += term
        biggest = max(biggest, abs(total))
        if term == 0 or abs(term) <= SERIES_EPS * biggest:
            small += 1
            if small >= 2 or term == 0:
                return (total, biggest) if with_peak else total
        else:
            small = 0
        k += 1
    raise NonConvergence(f"series did not converge in {max_terms} terms")


def kummer_phi(a, b, y) -> complex:
    """Kummer's confluent hypergeometric function Φ(a, b; y).

    For ``Re y < 0`` the Kummer transformation
    Φ(a, b; y) = e^y Φ(b − a, b; −y) is used to avoid cancellation.

    Raises
    ------
    PoleError
        If ``b`` is a nonpositive integer (use :func:`regularized_phi`).
    """
    a, b, y = complex(a), complex(b), complex(y)
    check_finite(a, b, y)
    if _nonpositive_integer(b) is not None:
        raise PoleError(f"Φ undefined for nonpositive integer b={b}")
    if y == 0:
        return 1.0 + 0j
    if _nonpositive_integer(a) is None and y.real < 0:
        a, y, pre = b - a, -y, cmath.exp(y)
    else:
        pre = 1.0
    total, peak = _series(1.0, lambda k: (a + k) * y / ((k + 1) * (b + k)), with_peak=True)
    if peak > PHI_CANCELLATION * abs(total):
        # oscillating series (large imaginary y): mpmath picks its own precision
        return pre * complex(_MP80.hyp1f1(a, b, y))
    return pre * total


def regularized_phi(a, b, y) -> complex:
    """Φ(a, b; y)/Γ(b), continuous in b across the nonpositive integers.

    At b = 1 − m (m = 1, 2, ...) the limit value
    (a)_m y^m Φ(a + m, 1 + m; y)/m! is returned.
    """
    a, b, y = complex(a), complex(b), complex(y)
    check_finite(a, b, y)
    m = _nonpositive_integer(b)
    if m is not None:
        mm = 1 - m
        if y == 0:
            return 0j
        return pochhammer(a, mm) * y**mm / math.factorial(mm) * kummer_phi(a + mm, 1 + mm, y)
    return kummer_phi(a, b, y) * rgamma(b)


def phi_tilde(a, b, y) -> complex:
    """Γ(b − a) Φ(a, b; y)/Γ(b)."""
    return gamma(complex(b) - complex(a)) * regularized_phi(a, b, y)


def _psi_polynomial(m, b, y):
    # Ψ(−m, b; y) = (−1)^m (b)_m Φ(−m, b; y) for m = 0, 1, ...
    # written as a finite sum that is valid for every b
    total = 0j
    for k in range(m + 1):
        total += math.comb(m, k) * pochhammer(b + k, m - k) * (-y) ** k
    return (-1) ** m * total


def _psi_asymptotic(a, b, y):
    # Ψ(a,b;y) ~ y^{-a} Σ (a)_k (a−b+1)_k (−y)^{-k}/k!
    term = 1.0 + 0j
    total = term
    best = abs(term)
    for k in range(200):
        nxt = term * (a + k) * (a - b + 1 + k) / ((k + 1) * (-y))
        if abs(nxt) > best and k > 2:
            break
        term = nxt
        total += term
        best = min(best, abs(term))
        if abs(term) < SERIES_EPS * abs(total):
            return y ** (-a) * total, True
    return y ** (-a) * total, best < 1e-13 * abs(total)


def _psi_connection(a, b, y):
    # DLMF 13.2.42 with regularized Φ; returns value and cancellation ratio
    s = _sinpi(b)
    t1 = regularized_phi(a, b, y) * rgamma(1.0 + a - b)
    t2 = y ** (1.0 - b) * regularized_phi(1.0 + a - b, 2.0 - b, y) * rgamma(a)
    val = (t1 - t2) * math.pi / s
    scale = max(abs(t1), abs(t2)) * abs(math.pi / s)
    ratio = scale / abs(val) if val != 0 else math.inf
    return val, ratio


def _psi_mpmath(a, b, y):
    return complex(mpmath.hyperu(a, b, y))


def tricomi_psi(a, b, y, strict: bool = False) -> complex:
    """Tricomi's confluent hypergeometric function Ψ(a, b; y), principal branch.

    Parameters
    ----------
    a, b, y : complex
    strict : bool
        If True, raise :class:`BranchError` when ``y`` lies on the negative
        real axis (the branch cut).
    """
    a, b, y = complex(a), complex(b), complex(y)
    check_finite(a, b, y)
    if y == 0:
        raise PoleError("Ψ is singular at y = 0")
    if strict and y.imag == 0 and y.real < 0:
        raise BranchError(f"y={y} lies on the branch cut of Ψ")
    m = _nonpositive_integer(a)
    if m is not None:
        return _psi_polynomial(-m, b, y)
    if abs(y) > PSI_ASYMPTOTIC_RADIUS:
        val, ok = _psi_asymptotic(a, b, y)
        if ok:
            return val
        # the connection formula cancels badly this far out
        return _psi_mpmath(a, b, y)
    gap = abs(b.real - round(b.real)) + abs(b.imag)
    if gap > PSI_INTEGER_GAP:
        val, ratio = _psi_connection(a, b, y)
        if ratio < PSI_CANCELLATION and cmath.isfinite(val):
            return val
    return _psi_mpmath(a, b, y)


def tricomi_psi_scaled(a, b, y) -> complex:
    """Γ(a + 1 − b) Ψ(a, b; y), safe when Γ(a + 1 − b) alone would overflow."""
    a, b, y = complex(a), complex(b), complex(y)
    ctx = _MP80
    return complex(ctx.gamma(a + 1 - b) * ctx.hyperu(a, b, y))


def psi_sequence(a0, b0, y, n_max: int) -> np.ndarray:
    """Ψ(a0 + n, b0 + n; y) for n = 0..n_max.

    Uses the contiguous relation

        (a0+n) y Ψ_{n+1} + (1 − b0 − n + y) Ψ_n − Ψ_{n−1} = 0.

    Ψ_n is the minimal solution for n below about |y| and the dominant one
    above, so two values are computed directly at m = min(n_max, ceil|y| + 1)
    and the relation is run backward to 0 and forward to ``n_max``.
    """
    a0, b0, y = complex(a0), complex(b0), complex(y)
    out = np.empty(n_max + 2, dtype=complex)
    m = min(n_max, int(math.ceil(abs(y))) + 1)
    out[m] = tricomi_psi(a0 + m, b0 + m, y)
    out[m + 1] = tricomi_psi(a0 + m + 1, b0 + m + 1, y)
    for n in range(m, 0, -1):
        out[n - 1] = (a0 + n) * y * out[n + 1] + (1.0 - b0 - n + y) * out[n]
    for n in range(m + 1, n_max):
        an = a0 + n
        if abs(an) < 1e-12:
            out[n + 1] = tricomi_psi(a0 + n + 1, b0 + n + 1, y)
            continue
        out[n + 1] = (out[n - 1] - (1.0 - b0 - n + y) * out[n]) / (an * y)
    return out[: n_max + 1]


def phi_hat_sequence(a0, b0, y, n_max: int) -> np.ndarray:
    """(−1)^n Φ(a0 + n, b0 + n; y)/Γ(b0 + n) for n = 0..n_max (direct)."""
    return np.array(
        [(-1) ** n * regularized_phi(a0 + n, b0 + n, y) for n in range(n_max + 1)],
        dtype=complex,
    )


def regularized_f(a, b, c, x) -> complex:
    """F(a, b; c; x)/Γ(c) for |x| < 1, finite for nonpositive-integer c."""
    a, b, c, x = complex(a), complex(b), complex(c), complex(x)
    check_finite(a, b, c, x)
    if abs(x) >= 1:
        raise NonConvergence(f"hypergeometric series needs |x| < 1, got {x}")
    m = _nonpositive_integer(c)
    if m is not None:
        k0 = 1 - m
        if x == 0:
            return 0j
        first = pochhammer(a, k0) * pochhammer(b, k0) * x**k0 / math.factorial(k0)
        return _series(first, lambda k: (a + k) * (b + k) * x / ((k + 1) * (c + k)), k0=k0)
    if x == 0:
        return rgamma(c)
    return rgamma(c) * _series(1.0, lambda k: (a + k) * (b + k) * x / ((k + 1) * (c + k)))


def gauss_f(a, b, c, x) -> complex:
    """Gauss hypergeometric function F(a, b; c; x) by its power series, |x| < 1."""
    a, b, c, x = complex(a), complex(b), complex(c), complex(x)
    check_finite(a, b, c, x)
    if _nonpositive_integer(c) is not None:
        raise PoleError(f"F undefined for nonpositive integer c={c}")
    if x == 0:
        return 1.0 + 0j
    if abs(x) >= 1:
        raise NonConvergence(f"hypergeometric series needs |x| < 1, got {x}")
    return _series(1.0, lambda k: (a + k) * (b + k) * x / ((k + 1) * (c + k)))


# ---------------------------------------------------------------- Bessel

def _is_real(v) -> bool:
    return complex(v).imag == 0.0


def _bessel_series(lam, t, sign):
    # Σ sign^k (t/2)^{2k+λ}/(k! Γ(k+λ+1)); sign=-1 gives J, +1 gives I
    h = t / 2.0
    first = h**lam * rgamma(lam + 1.0)
    h2 = sign * h * h
    if first == 0:
        # λ a negative integer: start where Γ(k+λ+1) is finite
        k0 = -int(round(lam.real))
        first = h2**k0 * h**lam / math.factorial(k0)
        return _series(first, lambda k: h2 / ((k + 1) * (k + lam + 1)), k0=k0)
    return _series(first, lambda k: h2 / ((k + 1) * (k + lam + 1)))


def bessel_j(lam, t) -> complex:
    """Bessel function of the first kind J_λ(t), principal branch."""
    lam, t = complex(lam), complex(t)
    check_finite(lam, t)
    if _is_real(lam) and abs(t) > 8:
        return complex(sc.jv(lam.real, t))
    if abs(t) > 25:
        return complex(mpmath.besselj(lam, t))
    if t == 0 and lam == 0:
        return 1.0 + 0j
    return _bessel_series(lam, t, -1.0)


def bessel_i(lam, t) -> complex:
    """Modified Bessel function I_λ(t) by its power series."""
    lam, t = complex(lam), complex(t)
    if _is_real(lam) and abs(t) > 8:
        return complex(sc.iv(lam.real, t))
    return _bessel_series(lam, t, 1.0)


def bessel_k(lam, t) -> complex:
    """Modified Bessel function of the second kind K_λ(t), principal branch."""
    lam, t = complex(lam), complex(t)
    check_finite(lam, t)
    if t == 0:
        raise PoleError("K_λ is singular at t = 0")
    if _is_real(lam):
        return complex(sc.kv(lam.real, t))
    gap = abs(lam.real - round(lam.real)) + abs(lam.imag)
    if gap > 1e-3 and abs(t) < 15:
        return math.pi / 2 * (bessel_i(-lam, t) - bessel_i(lam, t)) / _sinpi(lam)
    return complex(mpmath.besselk(lam, t))


def scaled_bessel_j_sequence(lam0, x, n_max: int) -> np.ndarray:
    """x^{−n} J_{λ0+n}(2x) for n = 0..n_max.

    Evaluated from the power series x^{λ0} Σ_k (−x²)^k/(k! Γ(k+n+λ0+1)),
    which has no overflow or underflow for small x.
    """
    lam0, x = complex(lam0), complex(x)
    out = np.empty(n_max + 1, dtype=complex)
    if abs(x) > 6:
        for n in range(n_max + 1):
            out[n] = x ** (-n) * bessel_j(lam0 + n, 2 * x)
        return out
    pre = x**lam0
    x2 = -x * x
    for n in range(n_max + 1):
        nu = lam0 + n
        first = rgamma(nu + 1.0)
        if first == 0:
            out[n] = x ** (-n) * bessel_j(nu, 2 * x)
            continue
        out[n] = pre * _series(first, lambda k, nu=nu: x2 / ((k + 1) * (k + nu + 1)))
    return out


def scaled_bessel_k_sequence(lam0, x, n_max: int) -> np.ndarray:
    """(i x)^{−n} K_{λ0+n}(2 i x) for n = 0..n_max (forward order recurrence)."""
    lam0, x = complex(lam0), complex(x)
    t = 2j * x
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = bessel_k(lam0, t)
    if n_max >= 1:
        out[1] = bessel_k(lam0 + 1, t) / (1j * x)
    x2 = x * x
    for n in range(1, n_max):
        # K_{ν+1} = K_{ν−1} + (2ν/t) K_ν in scaled form
        out[n + 1] = -(out[n - 1] + (lam0 + n) * out[n]) / x2
    return out

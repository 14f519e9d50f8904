"""Three-term recurrences, continued fractions and characteristic equations.

A recurrence is written as

    α_n b_{n+1} + β_n b_n + γ_n b_{n−1} = 0,

one-sided (n ≥ 0, with γ_0 b_{−1} absent) or two-sided (all integers n).
Requiring the series to converge selects the minimal solution, which exists
only if the characteristic equation

    β_0 − α_{−1}γ_0/(β_{−1} − ...) − α_0γ_1/(β_1 − α_1γ_2/(β_2 − ...)) = 0

holds; the first fraction is present only for two-sided systems.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .exceptions import (
    CharacteristicUnsatisfied,
    Diverged,
    InadmissibleNu,
    NoRoot,
    NonConvergence,
)

__all__ = [
    "RecurrenceSystem",
    "CoefficientSequence",
    "continued_fraction",
    "characteristic_residual",
    "solve_characteristic",
    "minimal_solution",
    "hill_determinant",
    "hill_matrix",
    "detect_finite_series",
    "check_nu",
    "max_iter",
    "recurrence_residuals",
    "hill_seeds",
]

TINY = 1e-30
CF_MAX_TERMS = 100_000
SCAN_CAP = 1000
# |γ_N| below this (relative to max(|β_N|, 1)) counts as a terminating row
FINITE_TOL = 1e-13


def max_iter(default: int) -> int:
    """Iteration cap, overridable through the ``HEUNFLOW_MAX_ITER`` variable."""
    raw = os.environ.get("HEUNFLOW_MAX_ITER")
    if raw is None:
        return default
    try:
        val = int(raw)
    except ValueError:
        return default
    return val if val > 0 else default


CoeffFn = Callable[[np.ndarray, complex], tuple]


@dataclass(frozen=True)
class RecurrenceSystem:
    """Coefficient provider for a three-term recurrence.

    Parameters
    ----------
    coeffs : callable
        ``coeffs(n, x)`` returns ``(alpha, beta, gamma)`` for an integer
        array ``n`` and free-parameter value ``x``.
    two_sided : bool
        True if the index runs over all integers.
    free_param : str
        Name of the scalar that root-solving varies (``"B3"``, ``"a"``,
        ``"nu"``, ``"E"``, ...).
    value : complex
        Current value of the free parameter.
    nu : complex or None
        Index shift of a two-sided system, checked for admissibility.
    scale : float
        Rough size of ω z0 type products, used to pad backward recurrences.
    label : str
        Free-form description.
    """

    coeffs: CoeffFn
    two_sided: bool = False
    free_param: str = "B3"
    value: complex = 0j
    nu: complex | None = None
    scale: float = 0.0
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def with_value(self, value) -> "RecurrenceSystem":
        return replace(self, value=complex(value))

    def at(self, n, value=None):
        """(α_n, β_n, γ_n) as complex arrays for integer array ``n``."""
        x = self.value if value is None else complex(value)
        n = np.asarray(n)
        a, b, g = self.coeffs(n, x)
        shape = n.shape
        return (
            np.broadcast_to(np.asarray(a, dtype=complex), shape).copy(),
            np.broadcast_to(np.asarray(b, dtype=complex), shape).copy(),
            np.broadcast_to(np.asarray(g, dtype=complex), shape).copy(),
        )


@dataclass(frozen=True)
class CoefficientSequence:
    """Coefficients b_n for n = n_min .. n_min + len(values) − 1."""

    values: np.ndarray
    n_min: int = 0
    norm_index: int = 0

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.values) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def __getitem__(self, n: int) -> complex:
        return self.values[n - self.n_min]

    def as_dict(self) -> dict:
        return {int(n): complex(v) for n, v in zip(self.indices, self.values)}


def check_nu(nu) -> None:
    """Raise :class:`InadmissibleNu` if 2ν is within 1e-6 of an integer."""
    if nu is None:
        return
    nu = complex(nu)
    if abs(nu.imag) < 1e-6 and abs(2 * nu.real - round(2 * nu.real)) < 2e-6:
        raise InadmissibleNu(f"ν={nu} is (close to) an integer or half-integer")


def continued_fraction(partial_num, partial_den, tol: float = 1e-15, max_terms=None) -> complex:
    """Value of a_1/(b_1 + a_2/(b_2 + ...)) by the modified Lentz method.

    Parameters
    ----------
    partial_num, partial_den : callable
        ``k -> a_k`` and ``k -> b_k`` for k = 1, 2, ...
    tol : float
        Convergence when the update factor differs from 1 by less than tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    cap = max_iter(CF_MAX_TERMS) if max_terms is None else max_terms
    f = TINY
    C = f
    D = 0j
    for k in range(1, cap + 1):
        a = complex(partial_num(k))
        b = complex(partial_den(k))
        if a == 0:
            # terminating fraction
            return f if k > 1 else 0j
        D = b + a * D
        if D == 0:
            D = TINY
        C = b + a / C
        if C == 0:
            C = TINY
        D = 1.0 / D
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < tol:
            return f
    raise NonConvergence(f"continued fraction did not converge in {cap} terms")


def _tail_fraction(sys: RecurrenceSystem, value, sign: int, tol: float, chunk: int = 64, start: int = 0) -> complex:
    """α_sγ_{s+1}/(β_{s+1} − α_{s+1}γ_{s+2}/(β_{s+2} − ...)) for sign=+1, or the mirrored
    α_{s−1}γ_s/(β_{s−1} − α_{s−2}γ_{s−1}/(β_{s−2} − ...)) for sign=−1 (s = ``start``)."""
    cache: dict[int, tuple] = {}

    def block(k):
        first = (k - 1) // chunk * chunk + 1
        if first not in cache:
            ks = np.arange(first, first + chunk)
            if sign > 0:
                a_prev, _, _ = sys.at(start + ks - 1, value)
                _, b, g = sys.at(start + ks, value)
                cache[first] = (-a_prev * g, b)
            else:
                a, b, _ = sys.at(start - ks, value)
                _, _, g_next = sys.at(start - ks + 1, value)
                cache[first] = (-a * g_next, b)
        nums, dens = cache[first]
        return nums[k - first], dens[k - first]

    # β0 + K(−αγ/β) form: value returned is the negative of the displayed fraction
    return -continued_fraction(lambda k: block(k)[0], lambda k: block(k)[1], tol)


def characteristic_residual(sys: RecurrenceSystem, value=None, tol: float = 1e-15, inversion: int = 0) -> complex:
    """β_0 − CF⁺ (one-sided) or β_0 − CF⁻ − CF⁺ (two-sided).

    With ``inversion = N > 0`` the equation is rewritten around row N:
    β_N − (finite fraction over rows N−1 .. 0) − (tail fraction from row N).
    Its zeros are the same, but the root near the N-th free-equation value
    is no longer next to a pole, which makes higher roots easy to polish.
    """
    x = sys.value if value is None else complex(value)
    if sys.two_sided:
        check_nu(sys.nu if sys.free_param != "nu" else x)
    if inversion < 0:
        raise ValueError("inversion index must be >= 0")
    n = np.arange(inversion + 1)
    a, b, g = sys.at(n, x)
    t = b[0]
    if sys.two_sided:
        t = t - _tail_fraction(sys, x, -1, tol)
    for j in range(1, inversion + 1):
        t = b[j] - a[j - 1] * g[j] / t if t != 0 else complex(np.inf)
    return complex(t - _tail_fraction(sys, x, +1, tol, start=inversion))


def solve_characteristic(
    sys: RecurrenceSystem,
    guess,
    tol: float = 1e-12,
    max_steps: int | None = None,
    residual: Callable | None = None,
) -> complex:
    """Root of the characteristic residual in the free parameter (complex secant).

    Parameters
    ----------
    sys : RecurrenceSystem
    guess : complex
        Starting value; the second seed is ``guess*(1+1e-4) + 1e-4``.
    tol : float
        Relative step tolerance: iteration stops once two successive
        iterates differ by less than ``tol * (1 + |x|)``.
    residual : callable, optional
        Replacement for :func:`characteristic_residual` (same signature).
    """
    f = residual or characteristic_residual
    steps = max_iter(100) if max_steps is None else max_steps
    x0 = complex(guess)
    x1 = x0 * (1 + 1e-4) + 1e-4
    f0 = f(sys, x0)
    if f0 == 0:
        return x0
    f1 = f(sys, x1)
    start = abs(x0) + 1.0
    for _ in range(steps):
        if f1 == 0:
            return x1
        denom = f1 - f0
        if denom == 0:
            break
        x2 = x1 - f1 * (x1 - x0) / denom
        if not np.isfinite(x2) or abs(x2) > 1e8 * start:
            raise Diverged(f"secant iterate ran away from guess {guess}")
        x0, f0 = x1, f1
        x1, f1 = x2, f(sys, x2)
        if abs(x1 - x0) <= tol * (1.0 + abs(x1)):
            return x1
    raise NoRoot(f"no root found from guess {guess} (last residual {abs(f1):.3g})")


def _pad(sys: RecurrenceSystem, n_max: int) -> int:
    return n_max + 30 + int(math.ceil(10 * abs(sys.scale)))


def minimal_solution(
    sys: RecurrenceSystem,
    n_max: int,
    check: bool = True,
    check_tol: float = 1e-8,
) -> CoefficientSequence:
    """Minimal solution by backward recurrence, normalized to b_0 = 1.

    For two-sided systems the negative wing is obtained by a forward sweep
    from −(n_max + padding) and the two wings meet at n = 0, so the
    returned coefficients run from −n_max to n_max.

    Raises
    ------
    CharacteristicUnsatisfied
        If ``check`` is set and the n = 0 equation, which is not used by
        the sweeps, is violated by more than ``check_tol`` relative.
    """
    top = _pad(sys, n_max)
    ks = np.arange(1, top + 1)
    a, b, g = sys.at(ks)
    # r_n = b_n / b_{n−1}, from r_{top+1} = 0
    r = np.zeros(top + 2, dtype=complex)
    cut = None
    if not sys.two_sided:
        # γ_N = 0 (to rounding) terminates the series: b_n = 0 exactly for n ≥ N
        hits = np.nonzero(np.abs(g) <= FINITE_TOL * np.maximum(np.abs(b), 1.0))[0]
        cut = int(ks[hits[0]]) if hits.size else None
    for n in range(top, 0, -1):
        if n == cut:
            r[n] = 0j
            continue
        den = b[n - 1] + a[n - 1] * r[n + 1]
        r[n] = -g[n - 1] / den if den != 0 else 0j
    pos = np.zeros(n_max + 1, dtype=complex)
    pos[0] = 1.0
    for n in range(1, n_max + 1):
        pos[n] = pos[n - 1] * r[n]
        if pos[n] != 0 and abs(pos[n]) < 1e-290:
            break
    if not sys.two_sided:
        seq = CoefficientSequence(pos, 0, 0)
        if check:
            _check_zero_equation(sys, seq, check_tol)
        return seq
    check_nu(sys.nu if sys.free_param != "nu" else sys.value)
    an, bn, gn = sys.at(-ks)
    # s_n = b_n / b_{n+1} for n < 0, from s_{−top−1} = 0
    s = np.zeros(top + 2, dtype=complex)
    for j in range(top, 0, -1):
        den = bn[j - 1] + gn[j - 1] * s[j + 1]
        s[j] = -an[j - 1] / den if den != 0 else 0j
    neg = np.zeros(n_max + 1, dtype=complex)
    neg[0] = 1.0
    for j in range(1, n_max + 1):
        neg[j] = neg[j - 1] * s[j]
        if neg[j] != 0 and abs(neg[j]) < 1e-290:
            break
    vals = np.concatenate([neg[:0:-1], pos])
    seq = CoefficientSequence(vals, -n_max, 0)
    if check:
        _check_zero_equation(sys, seq, check_tol)
    return seq


def _check_zero_equation(sys, seq, tol):
    n = np.array([0])
    a, b, g = sys.at(n)
    b1 = seq[1] if seq.n_max >= 1 else 0j
    bm1 = seq[-1] if seq.n_min <= -1 else 0j
    terms = [a[0] * b1, b[0] * seq[0], g[0] * bm1 if sys.two_sided else 0j]
    scale = max(abs(t) for t in terms)
    if scale == 0:
        return
    if abs(sum(terms)) > tol * scale:
        raise CharacteristicUnsatisfied(
            f"n=0 equation violated (relative residual {abs(sum(terms)) / scale:.2e})"
        )


def recurrence_residuals(sys: RecurrenceSystem, seq: CoefficientSequence) -> np.ndarray:
    """Relative residual of every interior equation satisfied by ``seq``."""
    idx = seq.indices[1:-1] if sys.two_sided else seq.indices[:-1]
    out = []
    a, b, g = sys.at(idx)
    for i, n in enumerate(idx):
        bm1 = seq[n - 1] if n - 1 >= seq.n_min else 0j
        terms = (a[i] * seq[n + 1], b[i] * seq[n], g[i] * bm1)
        sc = max(abs(t) for t in terms)
        out.append(abs(sum(terms)) / sc if sc else 0.0)
    return np.array(out)


def hill_determinant(sys: RecurrenceSystem, dim: int, value=None) -> complex:
    """Determinant of the leading dim × dim block of the tridiagonal matrix."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    a, b, g = sys.at(np.arange(dim), value)
    d_prev, d = 1.0 + 0j, b[0]
    for k in range(1, dim):
        d_prev, d = d, b[k] * d - a[k - 1] * g[k] * d_prev
    return complex(d)


def hill_matrix(sys: RecurrenceSystem, dim: int, value=None, n0: int = 0) -> np.ndarray:
    """Truncated tridiagonal matrix with rows n0 .. n0+dim−1.

    Row n holds γ_n, β_n, α_n in columns n−1, n, n+1.
    """
    n = np.arange(n0, n0 + dim)
    a, b, g = sys.at(n, value)
    return np.diag(b) + np.diag(a[:-1], 1) + np.diag(g[1:], -1)


def detect_finite_series(sys: RecurrenceSystem, cap: int = SCAN_CAP, tol: float = FINITE_TOL) -> int | None:
    """Smallest N ≥ 1 with γ_N = 0, if any below ``cap``."""
    if sys.two_sided:
        raise ValueError("finite-series detection needs a one-sided system")
    n = np.arange(1, cap + 1)
    a, b, g = sys.at(n)
    scale = np.maximum(np.abs(b), 1.0)
    hits = np.nonzero(np.abs(g) <= tol * scale)[0]
    return int(n[hits[0]]) if hits.size else None


def hill_seeds(sys: RecurrenceSystem, dim: int = 40) -> np.ndarray:
    """Approximate characteristic values from a truncated tridiagonal matrix.

    Valid when the coefficients are affine in the free parameter x:
    det(M0 + x M1) = 0 is solved as a generalized eigenproblem.  Two-sided
    systems use rows −dim//2 .. dim − dim//2 − 1.  Returned sorted by modulus.
    """
    from scipy.linalg import eigvals

    n0 = -(dim // 2) if sys.two_sided else 0
    m0 = hill_matrix(sys, dim, 0.0, n0)
    m1 = hill_matrix(sys, dim, 1.0, n0) - m0
    w = eigvals(m0, -m1)
    w = w[np.isfinite(w)]
    return w[np.argsort(np.abs(w))]

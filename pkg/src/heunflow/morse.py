"""Asymmetric double-Morse potential as a double-confluent Heun problem.

    ψ'' + [ℰ − V(u)]ψ = 0,   V(u) = (B²/4)(sinh u − C/B)² − B(s + ½) cosh u

with B > 0, C > 0 and s a non-negative integer or half-integer.  Under
z = e^u and ψ = e^{−B/(4z)} z^{C/2−s} U(z) the equation becomes a DCHE.

Two parts of the spectrum are handled:

* the finite (quasi-polynomial) family, 2s + 1 levels from a tridiagonal
  determinant;
* the remaining levels, from two-sided series solutions.  Two procedures
  are implemented.  :func:`infinite_spectrum` holds ν at a canonical value
  and scans ℰ for roots of the two-sided characteristic equation.
  :func:`matched_spectrum` solves ν at each ℰ and requires the solution
  decaying at z → 0 to be proportional to the one decaying at z → ∞.
  Only the second procedure reproduces the bound states (see the tests).

:func:`fd_oracle` is an independent finite-difference eigen-solver.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from . import dche
from .exceptions import GridTooCoarse, HeunflowError, NoRoot, RatioNotConstant, RootCount
from .params import DcheParams, MorseParams
from .recurrence import (
    RecurrenceSystem,
    characteristic_residual,
    check_nu,
    hill_seeds,
    solve_characteristic,
)
from .series import contour_derivatives

__all__ = [
    "MorseParams",
    "NuCase",
    "SpectrumResult",
    "potential",
    "to_dche",
    "finite_system",
    "finite_spectrum",
    "finite_eigenfunction",
    "choose_nu",
    "two_sided_system",
    "infinite_spectrum",
    "eigenfunction_matched",
    "solve_nu",
    "matching_function",
    "matched_spectrum",
    "fd_oracle",
    "default_half_width",
    "unmatched_levels",
]


@dataclass(frozen=True)
class NuCase:
    case: str  # "c_integer_or_half", "s_integer", "s_half_integer"
    nu: float


@dataclass
class SpectrumResult:
    energies: np.ndarray
    method: str
    diagnostics: dict = field(default_factory=dict)


def _validate(p: MorseParams, need_positive_c: bool = True):
    for name in ("B", "C", "s"):
        if abs(getattr(p, name).imag) > 0:
            raise ValueError(f"{name} must be real")
    if p.B.real <= 0:
        raise ValueError("B must be positive")
    if need_positive_c and p.C.real <= 0:
        raise ValueError("C must be positive (C = 0 is the symmetric Whittaker-Hill case)")
    two_s = 2 * p.s.real
    if two_s < 0 or abs(two_s - round(two_s)) > 1e-12:
        raise ValueError("s must be a non-negative integer or half-integer")


def _is_half_multiple(x: float, tol: float = 1e-12) -> bool:
    return abs(2 * x - round(2 * x)) < tol


def potential(p: MorseParams, u):
    """V(u); accepts scalars or arrays."""
    B, C, s = p.B.real, p.C.real, p.s.real
    u = np.asarray(u, dtype=float)
    return (B * B / 4) * (np.sinh(u) - C / B) ** 2 - B * (s + 0.5) * np.cosh(u)


def default_half_width(p: MorseParams) -> float:
    """Heuristic domain half-width for the finite-difference oracle."""
    return 2 * math.asinh(p.C.real / p.B.real) + 12.0


def to_dche(p: MorseParams, E=None) -> DcheParams:
    """DCHE parameters (z = e^u, ψ = e^{−B/(4z)} z^{C/2−s} U)."""
    E = p.E if E is None else complex(E)
    B, C, s = p.B, p.C, p.s
    return DcheParams(
        B1=B / 2,
        B2=1 + C - 2 * s,
        B3=E + B * B / 8 + s * s - s * C,
        omega=1j * B / 4,
        eta=1j * (C / 2 + 0.5 + s),
    )


def _outer(p: MorseParams):
    B, C, s = p.B, p.C, p.s

    def f(z):
        return cmath.exp(-B / (4 * z) + (C / 2 - s) * cmath.log(z))

    return f


# ----------------------------------------------------------- finite family


def finite_system(p: MorseParams) -> RecurrenceSystem:
    """(n+1)b_{n+1} + [n(n+C−2s) + ℰ + s² − sC] b_n − (B²/4)(n−2s−1) b_{n−1} = 0."""
    B, C, s = p.B, p.C, p.s

    def coeffs(n, E):
        return n + 1, n * (n + C - 2 * s) + E + s * s - s * C, -(B * B / 4) * (n - 2 * s - 1)

    return RecurrenceSystem(coeffs, free_param="E", value=p.E, scale=abs(B), label="morse finite")


def finite_spectrum(p: MorseParams, tol: float = 1e-9) -> SpectrumResult:
    """The 2s + 1 quasi-polynomial energies, ascending.

    Roots of det(M0 + ℰ I) for the (2s+1) × (2s+1) truncation, which is
    exact because γ_{2s+1} = 0.  The matrix is diagonally similar to a
    symmetric one when B² > 0, so the roots are real.
    """
    _validate(p, need_positive_c=False)
    size = int(round(2 * p.s.real)) + 1
    sys = finite_system(p)
    roots = hill_seeds(sys, size)
    real = 0.0 + np.sort(roots.real[np.abs(roots.imag) <= tol * (1 + np.abs(roots.real))])
    if real.size != size:
        raise RootCount(f"expected {size} real roots, found {real.size}")
    return SpectrumResult(real, "finite", {"size": size})


def finite_eigenfunction(p: MorseParams, E):
    """ψ(u) from the terminating power series, ψ = e^{−B(z+1/z)/4} z^{C/2−s} Σ b_n (2z/B)^n."""
    sys = finite_system(p).with_value(E)
    size = int(round(2 * p.s.real)) + 1
    a, b, g = sys.at(np.arange(size))
    coef = np.zeros(size, dtype=complex)
    coef[0] = 1.0
    if size > 1:
        coef[1] = -b[0] / a[0]
    for n in range(1, size - 1):
        coef[n + 1] = -(b[n] * coef[n] + g[n] * coef[n - 1]) / a[n]
    B, C, s = p.B.real, p.C.real, p.s.real

    def psi(u):
        u = np.asarray(u)
        z = np.exp(u if np.iscomplexobj(u) else u.astype(float))
        poly = np.polyval(coef[::-1], 2 * z / B)
        return np.exp(-B * (z + 1 / z) / 4) * z ** (C / 2 - s) * poly

    return psi, coef


# ----------------------------------------------------- two-sided (fixed ν)


def choose_nu(C, s) -> NuCase:
    """Canonical ν keeping the numerators of α_n and γ_n nonzero."""
    C = float(np.real(C))
    s = float(np.real(s))
    if C <= 0:
        raise ValueError("C must be positive")
    if _is_half_multiple(C):
        return NuCase("c_integer_or_half", 1.0 / 3.0)
    if abs(s - round(s)) < 1e-12:
        return NuCase("s_integer", C / 2 + 1)
    return NuCase("s_half_integer", C / 2 + 0.5)


def two_sided_system(p: MorseParams, nu, free: str = "E") -> RecurrenceSystem:
    """Two-sided recurrence with ℰ (default) or ν free."""
    B2, C, s = p.B * p.B, p.C, p.s

    def coeffs_at(n, E, v):
        m = n + v
        a = -(B2 / 16) * (m + 1.5 - C / 2 + s) * (m + 1.5 + C / 2 + s) / ((m + 1) * (m + 1.5))
        b = E + B2 / 8 - C * C / 4 + (m + 0.5) ** 2 - (B2 / 32) * (C * C - (1 + 2 * s) ** 2) / (m * (m + 1))
        g = -(B2 / 16) * (m + C / 2 - 0.5 - s) * (m - C / 2 - 0.5 - s) / (m * (m - 0.5))
        return a, b, g

    if free == "E":
        check_nu(nu)
        return RecurrenceSystem(lambda n, E: coeffs_at(n, E, nu), two_sided=True, free_param="E", value=p.E,
                                nu=complex(nu), scale=abs(p.B), label="morse two-sided")
    if free == "nu":
        return RecurrenceSystem(lambda n, v: coeffs_at(n, p.E, v), two_sided=True, free_param="nu",
                                value=complex(nu), scale=abs(p.B), label="morse two-sided")
    raise ValueError("free must be 'E' or 'nu'")


def _real_residual(sys, E):
    return characteristic_residual(sys, E).real


def infinite_spectrum(p: MorseParams, bracket=(None, None), grid: int = 400, nu=None,
                      tol: float = 1e-12, exclude_finite: bool = True) -> SpectrumResult:
    """Roots in ℰ of the two-sided characteristic equation at fixed ν.

    ν defaults to :func:`choose_nu`.  Sign changes of the (real)
    residual on a uniform grid are polished with Brent's method; sign
    changes caused by poles are discarded.
    """
    _validate(p)
    if nu is None:
        nu = choose_nu(p.C, p.s).nu
    lo, hi = bracket
    if lo is None or hi is None:
        fin = finite_spectrum(p).energies
        lo = fin[-1] + 0.5 if lo is None else lo
        hi = lo + 15 if hi is None else hi
    sys = two_sided_system(p, nu)
    es = np.linspace(lo, hi, grid + 1)
    vals = np.array([_real_residual(sys, e) for e in es])
    roots = []
    for e0, e1, f0, f1 in zip(es[:-1], es[1:], vals[:-1], vals[1:]):
        if not (np.isfinite(f0) and np.isfinite(f1)) or f0 * f1 > 0:
            continue
        r = brentq(lambda e: _real_residual(sys, e), e0, e1, xtol=tol, rtol=4 * np.finfo(float).eps)
        scale = max(abs(f0), abs(f1))
        if abs(_real_residual(sys, r)) < 1e-6 * max(1.0, scale):
            roots.append(r)
    if not roots:
        raise NoRoot(f"no characteristic root in [{lo}, {hi}] at ν={nu}")
    if exclude_finite:
        fin = finite_spectrum(p).energies
        roots = [r for r in roots if np.min(np.abs(fin - r)) > 1e-8]
    return SpectrumResult(np.array(roots), "two-sided, fixed nu", {"nu": nu, "bracket": (lo, hi)})


def _matched_pair(p: MorseParams, E, nu, n_max: int = 40):
    d = to_dche(p, E)
    sset = dche.two_sided_set(d, nu, n_max)
    outer = _outer(p)
    phi0 = lambda z: outer(z) * sset["U0"].evaluate(z)  # noqa: E731
    phiinf = lambda z: outer(z) * sset["Uinf"].evaluate(z)  # noqa: E731
    return phi0, phiinf


def eigenfunction_matched(p: MorseParams, E, overlap=(0.5, 2.0), nu=None, points: int = 9,
                          tol: float = 1e-6, n_max: int = 40):
    """Glue φ⁰ (small-z side) to φ^∞ (large-z side) at energy ``E``.

    Returns ``(psi, report)``; ``psi(u)`` uses φ⁰ for z ≤ 1 and the scaled
    φ^∞ for z > 1.  Raises :class:`RatioNotConstant` if the ratio
    φ^∞/φ⁰ varies by more than ``tol`` (relative) over ``overlap``.
    """
    if nu is None:
        nu = choose_nu(p.C, p.s).nu
    phi0, phiinf = _matched_pair(p, E, nu, n_max)
    zs = np.linspace(overlap[0], overlap[1], points)
    ratios = np.array([phiinf(z) / phi0(z) for z in zs])
    ref = ratios[len(ratios) // 2]
    variation = float(np.max(np.abs(ratios - ref)) / abs(ref))
    report = {"E": float(np.real(E)), "nu": complex(nu), "ratio": complex(ref), "variation": variation}
    if not variation < tol:
        raise RatioNotConstant(f"overlap ratio varies by {variation:.2e} at E={E}", )

    def psi(u):
        z = math.exp(float(u))
        return phi0(z) if z <= 1 else phiinf(z) / ref

    return psi, report


# ------------------------------------------------ two-sided (ν solved, matched)


def solve_nu(p: MorseParams, E, guess=None, tol: float = 1e-13) -> complex:
    """ν solving the two-sided characteristic equation at energy ``E``.

    Default seed: the B → 0 value ν = −½ + √(C²/4 − ℰ).
    """
    if guess is None:
        guess = -0.5 + cmath.sqrt(p.C * p.C / 4 - E)
    sys = two_sided_system(p.replace(E=E), guess, free="nu")
    return solve_characteristic(sys, guess, tol)


def matching_function(p: MorseParams, E, z: float = 1.0, n_max: int = 24) -> float:
    """φ⁰'/φ⁰ − φ^∞'/φ^∞ at ``z`` (derivatives in z), with ν solved at ``E``.

    Real for real ℰ; it vanishes exactly when the solution decaying at
    z → 0 is proportional to the one decaying at z → ∞.
    """
    nu = solve_nu(p, E)
    phi0, phiinf = _matched_pair(p, E, nu, n_max)
    radius = 0.2 * z
    f0, d0, _ = contour_derivatives(phi0, z, radius, m=12, max_halvings=0)
    fi, di, _ = contour_derivatives(phiinf, z, radius, m=12, max_halvings=0)
    return float((d0 / f0 - di / fi).real)


def _safe_matching(p, E):
    # energies where ν cannot be solved or lands on a forbidden value are skipped
    try:
        return matching_function(p, E)
    except (HeunflowError, ZeroDivisionError):
        return math.nan


def matched_spectrum(p: MorseParams, bracket, grid: int = 24, tol: float = 1e-12,
                     exclude_finite: bool = True) -> SpectrumResult:
    """Bound-state energies from the matching condition (ν solved per energy).

    Zeros of :func:`matching_function` located by a sign-change scan and
    Brent's method.  Poles (zeros of φ⁰ at the matching point) are
    rejected.  Finite-family levels are also matching zeros; they are
    dropped when ``exclude_finite`` is set.
    """
    _validate(p)
    lo, hi = bracket
    es = np.linspace(lo, hi, grid + 1)
    vals = np.array([_safe_matching(p, e) for e in es])
    roots = []
    for e0, e1, f0, f1 in zip(es[:-1], es[1:], vals[:-1], vals[1:]):
        if not (np.isfinite(f0) and np.isfinite(f1)) or f0 * f1 > 0:
            continue
        try:
            r = brentq(lambda e: matching_function(p, e), e0, e1, xtol=tol, rtol=4 * np.finfo(float).eps)
            fr = matching_function(p, r)
        except (HeunflowError, ZeroDivisionError):
            continue
        if abs(fr) < 1e-6 * max(1.0, abs(f0), abs(f1)):
            roots.append(r)
    if exclude_finite:
        fin = finite_spectrum(p).energies
        roots = [r for r in roots if np.min(np.abs(fin - r)) > 1e-6]
    return SpectrumResult(np.array(roots), "two-sided, nu solved, matched", {"bracket": (lo, hi)})


# ---------------------------------------------------------- FD oracle


def _fd_levels(pot, L: float, N: int, count: int) -> np.ndarray:
    u = np.linspace(-L, L, N + 2)[1:-1]
    h = u[1] - u[0]
    diag = 2.0 / h**2 + pot(u)
    off = -np.ones(N - 1) / h**2
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))[0]


def fd_oracle(p: MorseParams | None = None, L: float | None = None, N: int = 4000, count: int = 6,
              pot=None, check_tol: float | None = None) -> SpectrumResult:
    """Lowest levels of −d²/du² + V on [−L, L], Dirichlet ends.

    Second-order central differences on N interior points; the symmetric
    tridiagonal matrix is diagonalized by LAPACK.  ``pot`` replaces the
    double-Morse potential (for sanity checks).  With ``check_tol`` the
    computation is repeated at 2N and :class:`GridTooCoarse` is warned if
    a level moves by more than ``check_tol``.
    """
    if N < 2000:
        raise ValueError("N must be at least 2000")
    if pot is None:
        if p is None:
            raise ValueError("need MorseParams or a potential")
        _validate(p, need_positive_c=False)
        pot = lambda u: potential(p, u)  # noqa: E731
        if L is None:
            L = default_half_width(p)
    if L is None:
        raise ValueError("L is required with a custom potential")
    levels = _fd_levels(pot, L, N, count)
    diag = {"L": L, "N": N}
    if check_tol is not None:
        fine = _fd_levels(pot, L, 2 * N, count)
        shift = float(np.max(np.abs(fine - levels)))
        diag["refinement_shift"] = shift
        if shift > check_tol:
            warnings.warn(f"doubling N moves levels by {shift:.2e}", GridTooCoarse, stacklevel=2)
    return SpectrumResult(levels, "finite differences", diag)


def unmatched_levels(p: MorseParams, bracket, matched=None, N: int = 16000, L: float | None = None,
                     tol: float = 1e-3) -> dict:
    """Finite-difference levels in ``bracket`` reproduced by neither family.

    Completeness of the finite plus matched spectra is not guaranteed, so
    this compares both against :func:`fd_oracle`.  ``matched`` reuses
    energies from an earlier :func:`matched_spectrum` call.
    """
    lo, hi = bracket
    fin = finite_spectrum(p).energies
    if matched is None:
        matched = matched_spectrum(p, bracket).energies
    count = fin.size + 8
    while True:
        fd = fd_oracle(p, L=L, N=N, count=count).energies
        if fd[-1] > hi or count > 200:
            break
        count *= 2
    known = np.concatenate([fin, np.asarray(matched, dtype=float)])
    window = fd[(fd >= lo) & (fd <= hi)]
    missing = [float(e) for e in window if known.size == 0 or np.min(np.abs(known - e)) > tol]
    return {"fd": window, "finite": fin, "matched": np.asarray(matched), "unmatched": missing}

"""Double-confluent Heun equation (DCHE)

    z²U'' + (B1 + B2 z)U' + (B3 − 2ηωz + ω²z²)U = 0,   B1 ≠ 0, ω ≠ 0.

Two one-sided solution sets (power series in z about the irregular point
z = 0, and series of Ψ / Φ̂ in −2iωz) and the two-sided ν solutions.  The
code here is written independently of :mod:`heunflow.gswe`; the z0 → 0
limit of the GSWE solutions is exercised in the tests only.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateTarget, OutsideDomain
from .params import DcheParams, GsweParams
from .recurrence import RecurrenceSystem, check_nu, hill_seeds, minimal_solution, solve_characteristic
from .series import (
    ConfluentNuBasis,
    PhiHatBasis,
    PowerBasis,
    Prefactor,
    PsiBasis,
    SeriesSolution,
)

__all__ = [
    "DcheParams",
    "leaver_limit",
    "system",
    "solve_b3",
    "solution_set",
    "ode_terms",
    "two_sided_system",
    "two_sided_set",
    "solve_two_sided",
    "leaver_check",
]

DEFAULT_TERMS = 80
MIN_ABS_Z = 1e-8


def leaver_limit(p: GsweParams) -> DcheParams:
    """DCHE parameters reached from the GSWE as z0 → 0 with B1 kept fixed."""
    if p.B1 == 0:
        raise DegenerateTarget("B1 = 0: the limit is a confluent hypergeometric equation")
    return DcheParams(B1=p.B1, B2=p.B2, B3=p.B3, omega=p.omega, eta=p.eta)


def _coeffs(p: DcheParams, i: int, n):
    iw = 1j * p.omega
    ie = 1j * p.eta
    if i == 1:
        b = n * (n + p.B2 - 1) + iw * p.B1 + p.B3
        g = 2 * iw * p.B1 * (n + ie + p.B2 / 2 - 1)
    elif i == 2:
        b = n * (n + 3 - p.B2) + 2 - iw * p.B1 - p.B2 + p.B3
        g = -2 * iw * p.B1 * (n + 1 + ie - p.B2 / 2)
    else:
        raise ValueError("DCHE set index must be 1 or 2")
    return n + 1, b, g


def system(p: DcheParams, i: int = 1, free: str = "B3") -> RecurrenceSystem:
    """Recurrence for the coefficients c_n of set ``i`` (shared by U⁰, U^∞, U)."""

    def coeffs(n, x):
        return _coeffs(p.replace(**{free: x}), i, n)

    return RecurrenceSystem(coeffs, free_param=free, value=getattr(p, free), scale=abs(p.omega * p.B1),
                            label=f"dche set {i}")


def solve_b3(p: DcheParams, i: int = 1, guess=None, tol: float = 1e-13) -> complex:
    sys = system(p, i)
    if guess is None:
        guess = hill_seeds(sys, 40)[0]
    return solve_characteristic(sys, guess, tol)


def ode_terms(p: DcheParams):
    def terms(z, u, du, d2u):
        return [
            z * z * d2u,
            (p.B1 + p.B2 * z) * du,
            (p.B3 - 2 * p.eta * p.omega * z + p.omega**2 * z * z) * u,
        ]

    return terms


def _away_from_zero(z):
    if abs(z) < MIN_ABS_Z:
        raise OutsideDomain("|z| too small near the essential singularity at z = 0")
    return True


def solution_set(p: DcheParams, i: int = 1, n_max: int = DEFAULT_TERMS) -> dict:
    """U_i⁰, U_i^∞ and U_i at the B3 stored in ``p`` (must be characteristic)."""
    c = minimal_solution(system(p, i), n_max)
    iw = 1j * p.omega
    k = -2j * p.omega
    ode = ode_terms(p)
    if i == 1:
        pref = Prefactor(lin=iw)
        power = PowerBasis(scale=1 / p.B1)
        a0, b0 = 1j * p.eta + p.B2 / 2, p.B2
    else:
        pref = Prefactor(lin=iw, inv=p.B1, pz=2 - p.B2)
        power = PowerBasis(scale=-1 / p.B1)
        a0, b0 = 2 + 1j * p.eta - p.B2 / 2, 4 - p.B2
    nz = lambda z: _away_from_zero(z)  # noqa: E731
    return {
        "U0": SeriesSolution(pref, power, c, domain=nz, label=f"U{i}0", ode=ode, domain_text="z != 0"),
        "Uinf": SeriesSolution(pref, PsiBasis(a0, b0, k), c, domain=nz, label=f"U{i}inf", ode=ode,
                               domain_text="z != 0"),
        "U": SeriesSolution(pref, PhiHatBasis(a0, b0, k), c, domain=nz, label=f"U{i}", ode=ode,
                            domain_text="z != 0"),
    }


# ------------------------------------------------------------ two-sided


def _two_sided_coeffs(p: DcheParams, nu, n):
    iwb = 1j * p.omega * p.B1
    ie = 1j * p.eta
    h = p.B2 / 2
    m = n + nu
    a = iwb * (m + 2 - h) * (m + 1 - ie) / (2 * (m + 1) * (m + 1.5))
    b = p.B3 - (p.B2 - 1) ** 2 / 4 + (m + 0.5) ** 2 + p.eta * p.omega * p.B1 * (h - 1) / (m * (m + 1))
    g = iwb * (m + h - 1) * (m + ie) / (2 * m * (m - 0.5))
    return a, b, g


def two_sided_system(p: DcheParams, nu=None, free: str = "nu") -> RecurrenceSystem:
    """Two-sided recurrence; free parameter ν (default) or any field of ``p``."""
    if free == "nu":
        return RecurrenceSystem(lambda n, x: _two_sided_coeffs(p, x, n), two_sided=True, free_param="nu",
                                value=complex(nu if nu is not None else 0.3), scale=abs(p.omega * p.B1),
                                label="dche two-sided")
    check_nu(nu)
    return RecurrenceSystem(lambda n, x: _two_sided_coeffs(p.replace(**{free: x}), nu, n), two_sided=True,
                            free_param=free, value=getattr(p, free), nu=complex(nu),
                            scale=abs(p.omega * p.B1), label="dche two-sided")


def solve_two_sided(p: DcheParams, guess, free: str = "nu", nu=None, tol: float = 1e-13) -> complex:
    sys = two_sided_system(p, nu if free != "nu" else guess, free)
    return solve_characteristic(sys, guess, tol)


def two_sided_set(p: DcheParams, nu, n_max: int = 40) -> dict:
    """U⁰_ν, Û^∞_ν (argument B1/z) and U^∞_ν, Ũ^∞_ν (argument −2iωz).

    All four share the coefficients b_n; ``p`` and ``nu`` must satisfy the
    two-sided characteristic equation.
    """
    nu = complex(nu)
    check_nu(nu)
    sys = two_sided_system(p, nu).with_value(nu)
    b = minimal_solution(sys, n_max)
    ode = ode_terms(p)
    iw = 1j * p.omega
    h = p.B2 / 2
    k = -2j * p.omega
    pre0 = Prefactor(lin=iw, pz=-h)
    pre_inf = Prefactor(lin=iw, pz=1 - h)
    nz = lambda z: _away_from_zero(z)  # noqa: E731
    return {
        "U0": SeriesSolution(pre0, ConfluentNuBasis(h, p.B1, nu, "psi", inverse=True), b, domain=nz,
                             label="U0nu", ode=ode, domain_text="z != 0"),
        "Uhat_inf": SeriesSolution(pre0, ConfluentNuBasis(h, p.B1, nu, "phitilde", inverse=True, sign=-1), b,
                                   domain=nz, label="Uhat_inf_nu", ode=ode, domain_text="z != 0"),
        "Uinf": SeriesSolution(pre_inf, ConfluentNuBasis(1 + 1j * p.eta, k, nu, "psi"), b, domain=nz,
                               label="Uinf_nu", ode=ode, domain_text="z != 0"),
        "Utilde_inf": SeriesSolution(pre_inf, ConfluentNuBasis(1 + 1j * p.eta, k, nu, "phitilde", sign=-1), b,
                                     domain=nz, label="Utilde_inf_nu", ode=ode, domain_text="z != 0"),
    }


def tail_ratios(c: np.ndarray) -> np.ndarray:
    """c_{n+1}/c_n for a coefficient array (zeros give NaN)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return c[1:] / c[:-1]


def leaver_check(p: GsweParams, zs=(0.5, 1.0, 2.0), members=("U0", "Uinf", "U")) -> dict:
    """Compare solved GSWE solutions at small z0 with the solved DCHE solutions.

    GSWE set 1 is paired with DCHE set 1 and GSWE set 3 with DCHE set 2.
    Each ratio U_gswe/U_dche is normalized at the first sample point, so
    the reported error is independent of the series normalizations.
    """
    from . import gswe

    d = leaver_limit(p)
    report = {"z0": complex(p.z0), "pairs": {}}
    worst = 0.0
    for gi, di in ((1, 1), (3, 2)):
        bd = solve_b3(d, di)
        bg = gswe.solve_b3(p, gi, guess=bd)
        sg = gswe.solution_set(p.replace(B3=bg), gi)
        sd = solution_set(d.replace(B3=bd), di)
        errs = {}
        for m in members:
            r = np.array([sg[m](z) / sd[m](z) for z in zs])
            errs[m] = float(np.max(np.abs(r / r[0] - 1)))
        worst = max(worst, max(errs.values()))
        report["pairs"][f"gswe{gi}-dche{di}"] = {"B3_gswe": bg, "B3_dche": bd, "errors": errs}
    report["max_error"] = worst
    return report

"""Whittaker-Ince limits of the GSWE and of the DCHE.

    z(z−z0)U'' + (B1 + B2 z)U' + [B3 + q(z−z0)]U = 0      (GSWE limit)
    z²U'' + (B1 + B2 z)U' + (B3 + qz)U = 0                (DCHE limit)

Both arise when ω → 0 and η → ∞ with q = −2ηω fixed.  Each solution set
has a power series U⁰, a series U^∞ of modified Bessel functions K and a
series U of Bessel functions J; the Bessel series share their coefficients.
"""

from __future__ import annotations

import cmath

import numpy as np

from .exceptions import ConnectionUndefined, OutsideDomain, RuleInapplicable
from .params import DcheParams, GsweParams, InceDcheParams, InceGsweParams
from .recurrence import RecurrenceSystem, hill_seeds, minimal_solution, solve_characteristic
from . import numerics as nm
from .series import (
    BesselJBasis,
    BesselKBasis,
    PowerBasis,
    Prefactor,
    SeriesSolution,
    TBesselKBasis,
    normalized_residual,
)

__all__ = [
    "InceGsweParams",
    "InceDcheParams",
    "ince_limit",
    "transform",
    "set_map",
    "b_system",
    "c_system",
    "d_system",
    "solve_b3",
    "solution_set_gswe",
    "dche_system",
    "solve_b3_dche",
    "solution_set_dche",
    "ode_terms_gswe",
    "ode_terms_dche",
    "k_series_direct_check",
    "appendix_a_verify",
    "whittaker_ince_check",
]

DEFAULT_TERMS = 60


def ince_limit(p, q) -> InceGsweParams | InceDcheParams:
    """Drop ω, η and install q (the retained product −2ηω)."""
    if isinstance(p, GsweParams):
        return InceGsweParams(B1=p.B1, B2=p.B2, B3=p.B3, z0=p.z0, q=q)
    if isinstance(p, DcheParams):
        return InceDcheParams(B1=p.B1, B2=p.B2, B3=p.B3, q=q)
    raise TypeError("expected GsweParams or DcheParams")


# ----------------------------------------------------------- GSWE limit


def transform(p: InceGsweParams, rule: str):
    """Rules T1, T2 (as for the GSWE, q unchanged) and T4 (q → −q, z → z0 − z).

    Returns ``(params, pz, pzm)``.
    """
    rule = rule.upper()
    if rule in ("T1", "T2") and p.z0 == 0:
        raise RuleInapplicable(f"{rule} needs z0 != 0")
    r = p.r
    if rule == "T1":
        return p.replace(B1=-p.B1 - 2 * p.z0, B2=2 + p.B2 + 2 * r, B3=p.B3 + (1 + r) * (p.B2 + r)), 1 + r, 0j
    if rule == "T2":
        return p.replace(B2=2 - p.B2 - 2 * r, B3=p.B3 + r * (r + p.B2 - 1)), 0j, 1 - p.B2 - r
    if rule == "T4":
        return p.replace(B1=-p.B1 - p.B2 * p.z0, B3=p.B3 - p.q * p.z0, q=-p.q), 0j, 0j
    raise ValueError(f"unknown rule {rule!r}")


def set_map(p: InceGsweParams, i: int):
    """(params for the set-1 formulas, pz, pzm) for set ``i``."""
    if i == 1:
        return p, 0j, 0j
    if i == 2:
        return transform(p, "T1")
    if i == 3:
        q2, _, pzm = transform(p, "T2")
        q3, pz, _ = transform(q2, "T1")
        return q3, pz, pzm
    if i == 4:
        return transform(p, "T2")
    raise ValueError("set index must be 1..4")


def _b1(q: InceGsweParams, n):
    return q.z0 * (n + q.B2 + q.r) * (n + 1), n * (n + q.B2 - 1) + q.B3, q.q + 0 * n


def _c1(q: InceGsweParams, n):
    return n + 1, n * (n + q.B2 - 1) + q.B3, q.q * q.z0 * (n + q.B2 + q.r - 1)


def _d1(q: InceGsweParams, n):
    # coefficients of the t-variable K-series: d_n = 2^n c_n
    return (n + 1) / 2, n * (n + q.B2 - 1) + q.B3, 2 * q.z0 * q.q * (n + q.B2 + q.r - 1)


def _sys(p, i, fn, label, free="B3"):
    return RecurrenceSystem(lambda n, x: fn(set_map(p.replace(**{free: x}), i)[0], n), free_param=free,
                            value=getattr(p, free), scale=abs(cmath.sqrt(p.q * p.z0)), label=label)


def b_system(p: InceGsweParams, i: int = 1, free="B3") -> RecurrenceSystem:
    return _sys(p, i, _b1, f"ince-gswe set {i} b", free)


def c_system(p: InceGsweParams, i: int = 1, free="B3") -> RecurrenceSystem:
    return _sys(p, i, _c1, f"ince-gswe set {i} c", free)


def d_system(p: InceGsweParams, i: int = 1, free="B3") -> RecurrenceSystem:
    return _sys(p, i, _d1, f"ince-gswe set {i} d", free)


def solve_b3(p: InceGsweParams, i: int = 1, guess=None, tol: float = 1e-13) -> complex:
    sys = c_system(p, i)
    if guess is None:
        guess = hill_seeds(sys, 40)[0]
    return solve_characteristic(sys, guess, tol)


def ode_terms_gswe(p: InceGsweParams):
    def terms(z, u, du, d2u):
        return [z * (z - p.z0) * d2u, (p.B1 + p.B2 * z) * du, (p.B3 + p.q * (z - p.z0)) * u]

    return terms


def solution_set_gswe(p: InceGsweParams, i: int = 1, n_max: int = DEFAULT_TERMS) -> dict:
    """U_i⁰ (powers of z − z0), U_i^∞ (K-series) and U_i (J-series).

    Also returns ``"Uinf_t"``: the same K-series written in the variable
    t = 2i√(qz) with coefficients d_n = 2^n c_n from their own recurrence.
    """
    q, pz, pzm = set_map(p, i)
    if nm._nonpositive_integer(q.B2 + q.r, 1e-12) is not None:
        raise ConnectionUndefined("B2 + B1/z0 of the mapped set is a nonpositive integer")
    b = minimal_solution(b_system(p, i), n_max)
    c = minimal_solution(c_system(p, i), n_max)
    d = minimal_solution(d_system(p, i), n_max)
    z0 = p.z0
    ode = ode_terms_gswe(p)
    sing = (0j, z0)
    pre0 = Prefactor(pz=pz, pzm=pzm, z0=z0)
    lam0 = q.B2 - 1
    pre_b = Prefactor(pz=pz + (1 - q.B2) / 2, pzm=pzm, z0=z0)
    # t^{1−B2} = (2i√q)^{1−B2} z^{(1−B2)/2}
    pre_t = Prefactor(pz=pz + (1 - q.B2) / 2, pzm=pzm, z0=z0,
                      const=cmath.exp((1 - q.B2) * cmath.log(2j * cmath.sqrt(p.q))))
    far = lambda z: abs(z) > abs(z0)  # noqa: E731
    return {
        "U0": SeriesSolution(pre0, PowerBasis(center=z0), b, z0=z0, label=f"U{i}0", ode=ode, singular_points=sing),
        "Uinf": SeriesSolution(pre_b, BesselKBasis(lam0, p.q), c, domain=far, z0=z0, label=f"U{i}inf", ode=ode,
                               singular_points=sing, domain_text="|z| > |z0|"),
        "U": SeriesSolution(pre_b, BesselJBasis(lam0, p.q, -1), c, z0=z0, label=f"U{i}", ode=ode, singular_points=sing),
        "Uinf_t": SeriesSolution(pre_t, TBesselKBasis(lam0, p.q), d, domain=far, z0=z0, label=f"U{i}inf_t",
                                 ode=ode, singular_points=sing, domain_text="|z| > |z0|"),
    }


def k_series_direct_check(p: InceGsweParams, zs, i: int = 1, n_max: int = DEFAULT_TERMS) -> dict:
    """Substitute the t-variable K-series directly into the equation.

    Derivatives are obtained term by term from the contiguity relations

        t K_λ' = −λ K_λ − t K_{λ−1},     K_λ'' = K_λ + λ(λ−1)t^{−2}K_λ + t^{−1}K_{λ+1}

    (no numerical differentiation).  Returns the maximum normalized
    residual over ``zs`` and the per-point values.
    """
    if i != 1:
        raise ValueError("the direct verification is written for set 1")
    d = minimal_solution(d_system(p, 1), n_max).values
    sq = cmath.sqrt(p.q)
    lam0 = p.B2 - 1
    out = []
    for z in zs:
        z = complex(z)
        if abs(z) <= abs(p.z0):
            raise OutsideDomain("K-series needs |z| > |z0|")
        t = 2j * sq * cmath.sqrt(z)
        # F(t) = Σ d_n t^{1−B2−n} K_{n+B2−1}(t) = Σ d_n t^{−λ} K_λ(t) with λ = n + B2 − 1
        f = df = d2f = 0j
        for n, dn in enumerate(d):
            if dn == 0:
                continue
            lam = lam0 + n
            k = nm.bessel_k(lam, t)
            km = nm.bessel_k(lam - 1, t)
            kp = nm.bessel_k(lam + 1, t)
            dk = (-lam * k - t * km) / t
            d2k = k + lam * (lam - 1) / t**2 * k + kp / t
            tp = t ** (-lam)
            f += dn * tp * k
            df += dn * (tp * dk - lam * t ** (-lam - 1) * k)
            d2f += dn * (tp * d2k - 2 * lam * t ** (-lam - 1) * dk + lam * (lam + 1) * t ** (-lam - 2) * k)
        # chain rule: t = c√z, dt/dz = t/(2z), d²t/dz² = −t/(4z²)
        tz = t / (2 * z)
        tzz = -t / (4 * z * z)
        u, du, d2u = f, df * tz, d2f * tz**2 + df * tzz
        out.append(normalized_residual(ode_terms_gswe(p)(z, u, du, d2u)))
    return {"max_residual": max(out), "residuals": out}


appendix_a_verify = k_series_direct_check  # name used by the public operation list


# ----------------------------------------------------------- DCHE limit


def _dche_coeffs(p: InceDcheParams, i, n):
    if i == 1:
        return n + 1, n * (n + p.B2 - 1) + p.B3, p.q * p.B1 + 0 * n
    if i == 2:
        return n + 1, n * (n + 3 - p.B2) + 2 - p.B2 + p.B3, -p.q * p.B1 + 0 * n
    raise ValueError("set index must be 1 or 2")


def dche_system(p: InceDcheParams, i: int = 1, free="B3") -> RecurrenceSystem:
    return RecurrenceSystem(lambda n, x: _dche_coeffs(p.replace(**{free: x}), i, n), free_param=free,
                            value=getattr(p, free), scale=abs(cmath.sqrt(p.q * p.B1)), label=f"ince-dche set {i}")


def solve_b3_dche(p: InceDcheParams, i: int = 1, guess=None, tol: float = 1e-13) -> complex:
    sys = dche_system(p, i)
    if guess is None:
        guess = hill_seeds(sys, 40)[0]
    return solve_characteristic(sys, guess, tol)


def ode_terms_dche(p: InceDcheParams):
    def terms(z, u, du, d2u):
        return [z * z * d2u, (p.B1 + p.B2 * z) * du, (p.B3 + p.q * z) * u]

    return terms


def solution_set_dche(p: InceDcheParams, i: int = 1, n_max: int = DEFAULT_TERMS) -> dict:
    c = minimal_solution(dche_system(p, i), n_max)
    ode = ode_terms_dche(p)
    nz = lambda z: abs(z) > 1e-8  # noqa: E731
    if i == 1:
        pre0 = Prefactor()
        power = PowerBasis(scale=1 / p.B1)
        pre_b = Prefactor(pz=(1 - p.B2) / 2)
        lam0 = p.B2 - 1
    else:
        pre0 = Prefactor(inv=p.B1, pz=2 - p.B2)
        power = PowerBasis(scale=-1 / p.B1)
        pre_b = Prefactor(inv=p.B1, pz=(1 - p.B2) / 2)
        lam0 = 3 - p.B2
    return {
        "U0": SeriesSolution(pre0, power, c, domain=nz, label=f"U{i}0", ode=ode, domain_text="z != 0"),
        "Uinf": SeriesSolution(pre_b, BesselKBasis(lam0, p.q), c, domain=nz, label=f"U{i}inf", ode=ode,
                               domain_text="z != 0"),
        "U": SeriesSolution(pre_b, BesselJBasis(lam0, p.q, -1), c, domain=nz, label=f"U{i}", ode=ode,
                            domain_text="z != 0"),
    }


def whittaker_ince_check(p: InceGsweParams, omega: float = 1e-3, zs=(0.5, 1.5, 2.0, 3.0),
                         members=("U0", "U")) -> dict:
    """Solved GSWE set 1 at small ω with 2ηω = −q, against the solved limit equation.

    Ratios are normalized at the first sample point.  ``Uinf`` is only
    compared at points with |z| > |z0|.
    """
    from . import gswe

    g = GsweParams(B1=p.B1, B2=p.B2, B3=p.B3, z0=p.z0, omega=omega, eta=-p.q / (2 * omega))
    bi = solve_b3(p, 1)
    bg = gswe.solve_b3(g, 1, guess=bi)
    sg = gswe.solution_set(g.replace(B3=bg), 1)
    si = solution_set_gswe(p.replace(B3=bi), 1)
    errs = {}
    for m in members:
        pts = [z for z in zs if m != "Uinf" or abs(z) > abs(p.z0)]
        r = np.array([sg[m](z) / si[m](z) for z in pts])
        errs[m] = float(np.max(np.abs(r / r[0] - 1)))
    return {"omega": omega, "B3_gswe": bg, "B3_limit": bi, "errors": errs, "max_error": max(errs.values())}

"""Generalized spheroidal wave equation (GSWE)

    z(z−z0)U'' + (B1 + B2 z)U' + [B3 − 2ηω(z−z0) + ω² z(z−z0)]U = 0.

Contents

* the transformation rules T1–T4 and their parameter maps;
* the four one-sided solution sets, each holding a power series U⁰ about
  z0, a series U^∞ of irregular confluent functions Ψ and a series U of
  regular ones Φ̂.  Set 1 is coded directly; sets 2–4 are set 1 composed
  with T1 and/or T2 (set 2 = T1, set 3 = T2 then T1, set 4 = T2);
* explicit written-out recurrences for sets 2–4, kept as independent test
  vectors for the generated ones;
* the two-sided (index shift ν) solutions in hypergeometric and confluent
  hypergeometric functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics as nm
from .exceptions import ConnectionUndefined, RuleInapplicable
from .params import GsweParams
from .recurrence import (
    CoefficientSequence,
    RecurrenceSystem,
    check_nu,
    hill_seeds,
    minimal_solution,
    solve_characteristic,
)
from .series import (
    ConfluentNuBasis,
    HypergeometricInvNuBasis,
    HypergeometricNuBasis,
    PhiHatBasis,
    PowerBasis,
    Prefactor,
    PsiBasis,
    SeriesSolution,
)

__all__ = [
    "GsweParams",
    "RuleResult",
    "transform",
    "set_map",
    "b_system",
    "c_system",
    "explicit_system",
    "connection_factors",
    "solve_b3",
    "solution_set",
    "ode_terms",
    "residual",
    "two_sided_system",
    "two_sided_hat_factors",
    "two_sided_set",
    "solve_nu",
]

DEFAULT_TERMS = 80


@dataclass(frozen=True)
class RuleResult:
    """Outcome of a transformation rule.

    ``U(z) = z^{pz} (z − z0)^{pzm} U'(z')`` where U' solves the GSWE with
    ``params`` and ``z' = z0 − z`` if ``reflect`` else ``z' = z``.
    """

    params: GsweParams
    pz: complex = 0j
    pzm: complex = 0j
    reflect: bool = False


def transform(p: GsweParams, rule: str) -> RuleResult:
    """Apply one of the rules ``"T1"``, ``"T2"``, ``"T3"``, ``"T4"``."""
    rule = rule.upper()
    if rule in ("T1", "T2") and p.z0 == 0:
        raise RuleInapplicable(f"{rule} needs z0 != 0")
    if rule == "T1":
        r = p.r
        q = p.replace(B1=-p.B1 - 2 * p.z0, B2=2 + p.B2 + 2 * r, B3=p.B3 + (1 + r) * (p.B2 + r))
        return RuleResult(q, pz=1 + r)
    if rule == "T2":
        r = p.r
        q = p.replace(B2=2 - p.B2 - 2 * r, B3=p.B3 + r * (r + p.B2 - 1))
        return RuleResult(q, pzm=1 - p.B2 - r)
    if rule == "T3":
        return RuleResult(p.replace(omega=-p.omega, eta=-p.eta))
    if rule == "T4":
        q = p.replace(B1=-p.B1 - p.B2 * p.z0, B3=p.B3 + 2 * p.eta * p.omega * p.z0, omega=-p.omega)
        return RuleResult(q, reflect=True)
    raise ValueError(f"unknown rule {rule!r}")


def set_map(p: GsweParams, i: int) -> RuleResult:
    """Parameters fed to the set-1 formulas and the prefactor powers of set ``i``."""
    if i == 1:
        return RuleResult(p)
    if i == 2:
        return transform(p, "T1")
    if i == 3:
        t2 = transform(p, "T2")
        t1 = transform(t2.params, "T1")
        return RuleResult(t1.params, pz=t1.pz, pzm=t2.pzm)
    if i == 4:
        return transform(p, "T2")
    raise ValueError("set index must be 1..4")


# ------------------------------------------------------- set-1 formulas


def _set1_b(q: GsweParams, n):
    iw = 1j * q.omega
    r = q.r
    a = q.z0 * (n + q.B2 + r) * (n + 1)
    b = n * (n + q.B2 - 1 + 2 * iw * q.z0) + iw * q.z0 * (q.B2 + r) + q.B3
    g = 2 * iw * (n - 1 + 1j * q.eta + q.B2 / 2)
    return a, b, g


def _set1_c(q: GsweParams, n):
    iw = 1j * q.omega
    r = q.r
    a = n + 1
    b = n * (n + q.B2 - 1 + 2 * iw * q.z0) + iw * q.z0 * (q.B2 + r) + q.B3
    g = 2 * iw * q.z0 * (n - 1 + q.B2 + r) * (n - 1 + 1j * q.eta + q.B2 / 2)
    return a, b, g


def _system(p, i, fn, label, free="B3"):
    def coeffs(n, x):
        return fn(set_map(p.replace(**{free: x}), i).params, n)

    return RecurrenceSystem(
        coeffs,
        free_param=free,
        value=getattr(p, free),
        scale=abs(p.omega * p.z0),
        label=label,
    )


def b_system(p: GsweParams, i: int = 1, free: str = "B3") -> RecurrenceSystem:
    """Recurrence for the U⁰ coefficients b_n of set ``i``."""
    return _system(p, i, _set1_b, f"gswe set {i} b", free)


def c_system(p: GsweParams, i: int = 1, free: str = "B3") -> RecurrenceSystem:
    """Recurrence for the U^∞/U coefficients c_n of set ``i``."""
    return _system(p, i, _set1_c, f"gswe set {i} c", free)


def explicit_system(p: GsweParams, i: int, kind: str = "b") -> RecurrenceSystem:
    """Written-out recurrence coefficients of set ``i`` (independent of the rules)."""
    iw = 1j * p.omega
    ie = 1j * p.eta
    z0 = p.z0
    B1, B2 = p.B1, p.B2
    r = B1 / z0

    def coeffs(n, B3):
        if i == 1:
            beta = n * (n + B2 - 1 + 2 * iw * z0) + iw * z0 * (B2 + r) + B3
            ab = z0 * (n + B2 + r) * (n + 1)
            gb = 2 * iw * (n - 1 + ie + B2 / 2)
            gc = 2 * iw * z0 * (n - 1 + B2 + r) * (n - 1 + ie + B2 / 2)
        elif i == 2:
            beta = n * (n + 1 + 2 * iw * z0 + B2 + 2 * r) + iw * z0 * (B2 + r) + (1 + r) * (B2 + r) + B3
            ab = z0 * (n + B2 + r) * (n + 1)
            gb = 2 * iw * (n + ie + r + B2 / 2)
            gc = 2 * iw * z0 * (n - 1 + B2 + r) * (n + ie + r + B2 / 2)
        elif i == 3:
            beta = n * (n + 3 + 2 * iw * z0 - B2) + iw * z0 * (2 - B2 - r) + 2 - B2 + B3
            ab = z0 * (n + 2 - B2 - r) * (n + 1)
            gb = 2 * iw * (n + 1 + ie - B2 / 2)
            gc = 2 * iw * z0 * (n + 1 - B2 - r) * (n + 1 + ie - B2 / 2)
        elif i == 4:
            beta = n * (n + 1 + 2 * iw * z0 - B2 - 2 * r) + iw * z0 * (2 - B2 - r) + r * (B2 + r - 1) + B3
            ab = z0 * (n + 2 - B2 - r) * (n + 1)
            gb = 2 * iw * (n + ie - r - B2 / 2)
            gc = 2 * iw * z0 * (n + 1 - B2 - r) * (n + ie - r - B2 / 2)
        else:
            raise ValueError("set index must be 1..4")
        if kind == "b":
            return ab, beta, gb
        return n + 1, beta, gc

    return RecurrenceSystem(coeffs, free_param="B3", value=p.B3, scale=abs(p.omega * z0), label=f"explicit set {i} {kind}")


def connection_factors(p: GsweParams, i: int, n_max: int) -> np.ndarray:
    """z0^n Γ(n + κ) with κ = B2 + B1/z0 (sets 1, 2) or 2 − B2 − B1/z0 (sets 3, 4).

    c_n = factor_n · b_n up to a common constant.
    """
    kappa = p.B2 + p.r if i in (1, 2) else 2 - p.B2 - p.r
    if nm._nonpositive_integer(kappa, 1e-12) is not None:
        raise ConnectionUndefined(f"Γ(n + {kappa}) has a pole for some n >= 0")
    out = np.empty(n_max + 1, dtype=complex)
    g = nm.gamma(kappa)
    for n in range(n_max + 1):
        out[n] = p.z0**n * g
        g *= kappa + n
    return out / out[0]


def solve_b3(p: GsweParams, i: int = 1, guess=None, tol: float = 1e-13, which: str = "c") -> complex:
    """Characteristic value of B3 for set ``i`` nearest to ``guess``.

    Without a guess the root nearest to the smallest Hill-matrix eigenvalue
    (in modulus) is returned.
    """
    sys = c_system(p, i) if which == "c" else b_system(p, i)
    if guess is None:
        guess = hill_seeds(sys, 40)[0]
    return solve_characteristic(sys, guess, tol)


def ode_terms(p: GsweParams):
    """Callable returning the three terms of the GSWE at (z, U, U', U'')."""

    def terms(z, u, du, d2u):
        return [
            z * (z - p.z0) * d2u,
            (p.B1 + p.B2 * z) * du,
            (p.B3 - 2 * p.eta * p.omega * (z - p.z0) + p.omega**2 * z * (z - p.z0)) * u,
        ]

    return terms


def residual(p: GsweParams, f, z, method: str = "contour") -> float:
    """Normalized residual of the GSWE for an evaluable solution ``f``."""
    from .series import contour_derivatives, central_derivatives, normalized_residual, safe_radius

    z = complex(z)
    if isinstance(f, SeriesSolution):
        return f.residual(z, method=method)
    if method == "contour":
        u, du, d2u = contour_derivatives(f, z, safe_radius(z, (0j, p.z0)))
    else:
        u, du, d2u = central_derivatives(f, z, 1e-3 * max(1.0, abs(z)))
    return normalized_residual(ode_terms(p)(z, u, du, d2u))


def solution_set(p: GsweParams, i: int = 1, n_max: int = DEFAULT_TERMS) -> dict:
    """The three solutions U_i⁰, U_i^∞, U_i at the B3 stored in ``p``.

    ``p.B3`` must be a characteristic value of set ``i`` (see
    :func:`solve_b3`); otherwise :class:`CharacteristicUnsatisfied` is
    raised by the coefficient computation.
    """
    m = set_map(p, i)
    q = m.params
    pref = Prefactor(lin=1j * p.omega, pz=m.pz, pzm=m.pzm, z0=p.z0)
    b = minimal_solution(b_system(p, i), n_max)
    c = minimal_solution(c_system(p, i), n_max)
    ode = ode_terms(p)
    z0 = p.z0
    sing = (0j, z0)
    a0 = 1j * q.eta + q.B2 / 2
    k = -2j * p.omega
    return {
        "U0": SeriesSolution(pref, PowerBasis(center=z0), b, z0=z0, label=f"U{i}0", ode=ode,
                             singular_points=sing),
        "Uinf": SeriesSolution(pref, PsiBasis(a0, q.B2, k), c, domain=lambda z: abs(z) > abs(z0), z0=z0,
                               label=f"U{i}inf", ode=ode, singular_points=sing, domain_text="|z| > |z0|"),
        "U": SeriesSolution(pref, PhiHatBasis(a0, q.B2, k), c, z0=z0, label=f"U{i}", ode=ode,
                            singular_points=sing),
    }


# ------------------------------------------------------------ two-sided


def _two_sided_coeffs(p: GsweParams, nu, n):
    iw = 1j * p.omega
    ie = 1j * p.eta
    ew = p.eta * p.omega
    z0 = p.z0
    h = p.B2 / 2
    r = p.r
    m = n + nu
    a = iw * z0 * (m + 2 - h) * (m + 1 - h - r) * (m + 1 - ie) / (2 * (m + 1) * (m + 1.5))
    b = -p.B3 - ew * z0 - (m + 1 - h) * (m + h) - ew * z0 * (h - 1) * (h + r) / (m * (m + 1))
    g = -iw * z0 * (m + h - 1) * (m + h + r) * (m + ie) / (2 * (m - 0.5) * m)
    return a, b, g


def two_sided_system(p: GsweParams, nu=None, free: str = "nu") -> RecurrenceSystem:
    """Two-sided recurrence; the free parameter is ν (default) or B3."""
    if free == "nu":
        def coeffs(n, x):
            return _two_sided_coeffs(p, x, n)

        return RecurrenceSystem(coeffs, two_sided=True, free_param="nu", value=complex(nu if nu is not None else 0.3),
                                scale=abs(p.omega * p.z0), label="gswe two-sided")
    check_nu(nu)

    def coeffs(n, x):
        return _two_sided_coeffs(p.replace(**{free: x}), nu, n)

    return RecurrenceSystem(coeffs, two_sided=True, free_param=free, value=getattr(p, free), nu=complex(nu),
                            scale=abs(p.omega * p.z0), label="gswe two-sided")


def nu_seed(B2, B3) -> complex:
    """Index shift solving β_0 = 0 when ω → 0: (ν + 1/2)² = (B2 − 1)²/4 − B3."""
    return -0.5 + np.sqrt(complex((B2 - 1) ** 2 / 4 - B3))


def solve_nu(p: GsweParams, guess=None, tol: float = 1e-13) -> complex:
    if guess is None:
        guess = nu_seed(p.B2, p.B3)
    return solve_characteristic(two_sided_system(p, guess), guess, tol)


def two_sided_hat_factors(p: GsweParams, nu, n_idx) -> np.ndarray:
    """(−1)^n Γ(n+ν+2−B2/2) Γ(n+ν+1−B1/z0−B2/2): b̂_n = factor · b_n."""
    h = p.B2 / 2
    out = []
    for n in n_idx:
        m = n + nu
        out.append((-1) ** int(n) * nm.gamma(m + 2 - h) * nm.gamma(m + 1 - p.r - h))
    return np.array(out, dtype=complex)


def two_sided_set(p: GsweParams, nu, n_max: int = 40) -> dict:
    """Four two-sided solutions sharing b_n (Û^∞ uses the rescaled b̂_n).

    ``nu`` must solve the two-sided characteristic equation for ``p``.
    """
    nu = complex(nu)
    check_nu(nu)
    if nm._nonpositive_integer(p.B2 + p.r, 1e-12) is not None:
        raise ConnectionUndefined("B2 + B1/z0 is a nonpositive integer")
    sys = two_sided_system(p, nu).with_value(nu)
    b = minimal_solution(sys, n_max)
    bhat_vals = two_sided_hat_factors(p, nu, b.indices) * b.values
    bhat = CoefficientSequence(bhat_vals / bhat_vals[n_max], b.n_min, 0)
    ode = ode_terms(p)
    z0 = p.z0
    sing = (0j, z0)
    e = Prefactor(lin=1j * p.omega, z0=z0)
    e_inf = Prefactor(lin=1j * p.omega, pz=1 - p.B2 / 2, z0=z0)
    h = p.B2 / 2
    k = -2j * p.omega
    inner = lambda z: abs(z - z0) < abs(z0)  # noqa: E731
    outer_f = lambda z: abs(z - z0) > abs(z0)  # noqa: E731
    far = lambda z: abs(z) > abs(z0)  # noqa: E731
    return {
        "U0": SeriesSolution(e, HypergeometricNuBasis(h, p.B2 + p.r, nu, z0), b, domain=inner, z0=z0,
                             label="U0nu", ode=ode, singular_points=sing, domain_text="|z - z0| < |z0|"),
        "Uhat_inf": SeriesSolution(e, HypergeometricInvNuBasis(h, p.r, nu, z0), bhat, domain=outer_f, z0=z0,
                                   label="Uhat_inf_nu", ode=ode, singular_points=sing,
                                   domain_text="|z - z0| > |z0|"),
        "Uinf": SeriesSolution(e_inf, ConfluentNuBasis(1 + 1j * p.eta, k, nu, "psi"), b, domain=far, z0=z0,
                               label="Uinf_nu", ode=ode, singular_points=sing, domain_text="|z| > |z0|"),
        "Utilde_inf": SeriesSolution(e_inf, ConfluentNuBasis(1 + 1j * p.eta, k, nu, "phitilde", sign=-1), b,
                                     domain=far, z0=z0, label="Utilde_inf_nu", ode=ode, singular_points=sing,
                                     domain_text="|z| > |z0|"),
    }

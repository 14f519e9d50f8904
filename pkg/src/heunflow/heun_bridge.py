"""General Heun equation and its confluence to the GSWE.

    H'' + (γ/x + δ/(x−1) + ε/(x−a)) H' + (αβx − q)/(x(x−1)(x−a)) H = 0,
    ε = α + β + 1 − γ − δ.

Only the Frobenius power series about x = 0 is built.  Letting a, β, q → ∞
with β/a → −ρ and q/a → −σ gives a GSWE in x; the substitutions
x = (z0 − z)/z0, U(z) = e^{iωz} h(x) bring it to the standard form.
:func:`confluence_check` measures how fast the finite-a Heun series
approaches the GSWE solution U₁⁰.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import IndicialClash, OutsideDomain
from .params import GsweParams, HeunParams
from .recurrence import CoefficientSequence
from .series import PowerBasis, Prefactor, SeriesSolution

__all__ = [
    "HeunParams",
    "ConfluenceMap",
    "heun_coefficients",
    "heun_series",
    "ode_terms",
    "confluence_gswe_params",
    "gswe_from_confluence",
    "heun_at",
    "confluence_check",
]


@dataclass(frozen=True)
class ConfluenceMap:
    """Parameters of the confluent equation x(x−1)h'' + [−γ + (γ+δ)x + ρx(x−1)]h' + (αρx − σ)h = 0."""

    alpha: complex
    gamma: complex
    delta: complex
    rho: complex
    sigma: complex
    z0: complex = 1 + 0j

    def x_of_z(self, z):
        return (self.z0 - z) / self.z0

    def z_of_x(self, x):
        return self.z0 * (1 - x)


def _gamma_clash(g) -> int | None:
    g = complex(g)
    if abs(g.imag) < 1e-14 and g.real <= 1e-14 and abs(g.real - round(g.real)) < 1e-14:
        return int(round(g.real))
    return None


def heun_coefficients(h: HeunParams, n_max: int = 200) -> np.ndarray:
    """d_0 … d_{n_max} of the power series about x = 0, d_0 = 1."""
    if _gamma_clash(h.gamma) is not None:
        raise IndicialClash(f"γ={h.gamma} is a nonpositive integer: no regular series at x = 0")
    a, q, al, be, ga, de = h.a, h.q, h.alpha, h.beta, h.gamma, h.delta
    d = np.zeros(n_max + 1, dtype=complex)
    d[0] = 1
    prev = 0j
    for n in range(n_max):
        mid = a * n * (n + ga + de - 1) + n * (n + al + be - de) + q
        d[n + 1] = (mid * d[n] - (n + al - 1) * (n + be - 1) * prev) / (a * (n + 1) * (n + ga))
        prev = d[n]
    return d


def ode_terms(h: HeunParams):
    """Heun equation multiplied through by x(x−1)(x−a)."""
    eps = h.epsilon

    def terms(x, u, du, d2u):
        return [
            x * (x - 1) * (x - h.a) * d2u,
            (h.gamma * (x - 1) * (x - h.a) + h.delta * x * (x - h.a) + eps * x * (x - 1)) * du,
            (h.alpha * h.beta * x - h.q) * u,
        ]

    return terms


def heun_series(h: HeunParams, n_max: int = 200) -> SeriesSolution:
    """Power-series solution about x = 0, convergent for |x| < min(1, |a|)."""
    d = heun_coefficients(h, n_max)
    rad = min(1.0, abs(h.a))
    return SeriesSolution(
        Prefactor(),
        PowerBasis(),
        CoefficientSequence(d),
        domain=lambda x: abs(x) < rad,
        z0=1 + 0j,
        label="H0",
        ode=ode_terms(h),
        singular_points=(0j, 1 + 0j, complex(h.a)),
        domain_text=f"|x| < {rad:g}",
    )


def confluence_gswe_params(p: GsweParams, a=None):
    """Heun parameters whose large-a limit is the GSWE ``p``.

    Returns the :class:`ConfluenceMap` and, when ``a`` is given, the
    :class:`HeunParams` at that a with β = −ρa and q = −σa.
    """
    if p.z0 == 0:
        raise ValueError("z0 = 0 has no Heun confluence form")
    r = p.B1 / p.z0
    cmap = ConfluenceMap(
        alpha=1j * p.eta + p.B2 / 2,
        gamma=p.B2 + r,
        delta=-r,
        rho=-2j * p.omega * p.z0,
        sigma=-1j * p.omega * p.z0 * (p.B2 + r) - p.B3,
        z0=p.z0,
    )
    if a is None:
        return cmap, None
    h = HeunParams(a=a, q=-cmap.sigma * a, alpha=cmap.alpha, beta=-cmap.rho * a, gamma=cmap.gamma,
                   delta=cmap.delta)
    return cmap, h


def gswe_from_confluence(cmap: ConfluenceMap) -> GsweParams:
    """Inverse of the parameter part of :func:`confluence_gswe_params`."""
    z0 = cmap.z0
    omega = cmap.rho / (-2j * z0)
    B1 = -cmap.delta * z0
    B2 = cmap.gamma + cmap.delta
    eta = (cmap.alpha - B2 / 2) / 1j
    B3 = -1j * omega * z0 * cmap.gamma - cmap.sigma
    return GsweParams(B1=B1, B2=B2, B3=B3, z0=z0, omega=omega, eta=eta)


def heun_at(p: GsweParams, a, z, n_max: int = 400) -> complex:
    """e^{iωz} H_a(x(z)): the finite-a approximation to U₁⁰(z)."""
    cmap, h = confluence_gswe_params(p, a)
    x = cmap.x_of_z(complex(z))
    if not abs(x) < 1:
        raise OutsideDomain(f"x={x} outside the unit disc of the Heun series")
    return np.exp(1j * p.omega * z) * heun_series(h, n_max)(x)


def confluence_check(p: GsweParams, a_values=(1e2, 1e3, 1e4), z_samples=None, U=None) -> dict:
    """Relative distance between e^{iωz}H_a(x(z)) and U₁⁰(z) along a ladder of a.

    ``U`` defaults to the set-1 power series of :mod:`heunflow.gswe`, which
    needs ``p.B3`` characteristic.  Both functions are normalized to
    e^{iωz0} at z = z0 (x = 0).  Agreement is only asymptotic: the error is
    O(1/a) and never exactly zero.
    """
    if U is None:
        from .gswe import solution_set

        U = solution_set(p, 1)["U0"]
    if z_samples is None:
        z_samples = [p.z0 / 2]
    z0 = complex(p.z0)
    u_norm = U(z0) / np.exp(1j * p.omega * z0)
    errors = []
    for a in a_values:
        worst = 0.0
        for z in z_samples:
            ref = U(z) / u_norm
            worst = max(worst, abs(heun_at(p, a, z) - ref) / abs(ref))
        errors.append(worst)
    errors = np.array(errors)
    monotone = bool(np.all(errors[1:] <= 1.1 * errors[:-1]))
    return {"a_values": list(a_values), "errors": errors, "final": float(errors[-1]), "decreasing": monotone}

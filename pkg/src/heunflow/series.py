"""Series solutions: prefactor x Σ coefficient_n · basis_n(z).

A :class:`SeriesSolution` is immutable.  Multivalued prefactors and bases
(powers of z and z − z0, √z inside Bessel arguments) are evaluated from the
logarithms log z and log(z − z0).  By default these are principal values;
callers that follow a specific sheet (the periodic equations, where z is
cos²u or e^{2iu}) pass a :class:`Branch` that fixes the logarithms at a
reference point and continues them analytically from there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import numerics as nm
from .exceptions import NonConvergence, OutsideDomain, PoleError
from .recurrence import CoefficientSequence

__all__ = [
    "Branch",
    "Prefactor",
    "PowerBasis",
    "PsiBasis",
    "PhiHatBasis",
    "BesselJBasis",
    "BesselKBasis",
    "TBesselKBasis",
    "HypergeometricNuBasis",
    "HypergeometricInvNuBasis",
    "ConfluentNuBasis",
    "SeriesSolution",
    "contour_derivatives",
    "central_derivatives",
    "normalized_residual",
]


@dataclass(frozen=True)
class Branch:
    """Logarithms of z and z − z0 pinned at a reference point ``z_ref``."""

    z_ref: complex
    log_z: complex
    log_zm: complex | None = None
    z0: complex = 0j

    def logs(self, z):
        lz = self.log_z + cmath.log(z / self.z_ref)
        lzm = None
        if self.log_zm is not None:
            lzm = self.log_zm + cmath.log((z - self.z0) / (self.z_ref - self.z0))
        return lz, lzm


def _logs(z, z0, branch):
    if branch is not None:
        lz, lzm = branch.logs(z)
        if lzm is None:
            lzm = cmath.log(z - z0) if z != z0 else -math.inf
        return lz, lzm
    lz = cmath.log(z) if z != 0 else complex(-math.inf)
    lzm = cmath.log(z - z0) if z != z0 else complex(-math.inf)
    return lz, lzm


@dataclass(frozen=True)
class Prefactor:
    """const · e^{lin·z} · e^{inv/z} · z^{pz} · (z − z0)^{pzm}."""

    lin: complex = 0j
    inv: complex = 0j
    pz: complex = 0j
    pzm: complex = 0j
    z0: complex = 0j
    const: complex = 1 + 0j

    def __call__(self, z, lz, lzm) -> complex:
        e = self.lin * z
        if self.inv != 0:
            e += self.inv / z
        for power, log in ((self.pz, lz), (self.pzm, lzm)):
            if power == 0:
                continue
            if cmath.isinf(log):
                # z (or z − z0) is zero: the power vanishes or blows up
                if power.real > 0:
                    return 0j
                raise PoleError("prefactor power with nonpositive real part at its zero")
            e += power * log
        return self.const * cmath.exp(e)


# ------------------------------------------------------------------ bases
# Each basis returns an array of basis values for the requested indices.


@dataclass(frozen=True)
class PowerBasis:
    """(scale · (z − center))^n, n ≥ 0."""

    center: complex = 0j
    scale: complex = 1 + 0j

    def values(self, z, n_idx, lz, lzm):
        w = self.scale * (z - self.center)
        return w ** n_idx.astype(float)


@dataclass(frozen=True)
class PsiBasis:
    """Ψ(a0 + n, b0 + n; k·z), n ≥ 0."""

    a0: complex
    b0: complex
    k: complex

    def values(self, z, n_idx, lz, lzm):
        return nm.psi_sequence(self.a0, self.b0, self.k * z, int(n_idx[-1]))[n_idx]


@dataclass(frozen=True)
class PhiHatBasis:
    """(−1)^n Φ(a0 + n, b0 + n; k·z)/Γ(b0 + n), n ≥ 0."""

    a0: complex
    b0: complex
    k: complex

    def values(self, z, n_idx, lz, lzm):
        return nm.phi_hat_sequence(self.a0, self.b0, self.k * z, int(n_idx[-1]))[n_idx]


@dataclass(frozen=True)
class BesselJBasis:
    """(sign·√(qz))^{−n} J_{λ0+n}(2√(qz)), n ≥ 0; √z = exp(log z / 2).

    ``sign = −1`` gives the alternating form that shares its coefficients
    with the K-series.
    """

    lam0: complex
    q: complex
    sign: complex = 1

    def values(self, z, n_idx, lz, lzm):
        x = cmath.sqrt(self.q) * cmath.exp(lz / 2)
        v = nm.scaled_bessel_j_sequence(self.lam0, x, int(n_idx[-1]))[n_idx]
        return v if self.sign == 1 else v * (1 / self.sign) ** n_idx


@dataclass(frozen=True)
class BesselKBasis:
    """(i√(qz))^{−n} K_{λ0+n}(2i√(qz)), n ≥ 0."""

    lam0: complex
    q: complex

    def values(self, z, n_idx, lz, lzm):
        x = cmath.sqrt(self.q) * cmath.exp(lz / 2)
        return nm.scaled_bessel_k_sequence(self.lam0, x, int(n_idx[-1]))[n_idx]


@dataclass(frozen=True)
class TBesselKBasis:
    """t^{−n} K_{λ0+n}(t) with t = 2i√(qz), each term from :func:`bessel_k`."""

    lam0: complex
    q: complex

    def values(self, z, n_idx, lz, lzm):
        t = 2j * cmath.sqrt(self.q) * cmath.exp(lz / 2)
        return np.array([t ** (-int(n)) * nm.bessel_k(self.lam0 + n, t) for n in n_idx])


@dataclass(frozen=True)
class HypergeometricNuBasis:
    """F(h − n − ν − 1, n + ν + h; c; (z0 − z)/z0), all integer n.

    Here h = B2/2 and c = B2 + B1/z0.
    """

    h: complex
    c: complex
    nu: complex
    z0: complex

    def values(self, z, n_idx, lz, lzm):
        x = (self.z0 - z) / self.z0
        m = n_idx + self.nu
        return np.array([nm.gauss_f(self.h - mm - 1, mm + self.h, self.c, x) for mm in m])


@dataclass(frozen=True)
class HypergeometricInvNuBasis:
    """w^{n+ν+h} F̃(n + ν + h, n + ν + 1 − h − r; 2n + 2ν + 2; w), w = z0/(z0 − z).

    Equivalent to ((z0 − z)/z0)^{−n−ν−h} F̃(...), with h = B2/2, r = B1/z0.
    """

    h: complex
    r: complex
    nu: complex
    z0: complex

    def values(self, z, n_idx, lz, lzm):
        w = self.z0 / (self.z0 - z)
        lw = cmath.log(w)
        m = n_idx + self.nu
        return np.array(
            [
                cmath.exp((mm + self.h) * lw)
                * nm.regularized_f(mm + self.h, mm + 1 - self.h - self.r, 2 * mm + 2, w)
                for mm in m
            ]
        )


@dataclass(frozen=True)
class ConfluentNuBasis:
    """(s·y)^{n+ν} G(n + ν + a_shift, 2n + 2ν + 2; y) for all integer n.

    ``y = k·z`` (``inverse=False``) or ``y = k/z``; ``G`` is Ψ
    (``kind="psi"``) or Φ̃ (``kind="phitilde"``); ``s`` is +1 or −1.
    """

    a_shift: complex
    k: complex
    nu: complex
    kind: str = "psi"
    inverse: bool = False
    sign: int = 1

    def values(self, z, n_idx, lz, lzm):
        y = self.k / z if self.inverse else self.k * z
        ly = cmath.log(self.sign * y)
        out = np.empty(len(n_idx), dtype=complex)
        for i, n in enumerate(n_idx):
            m = n + self.nu
            if self.kind == "psi":
                g = nm.tricomi_psi(m + self.a_shift, 2 * m + 2, y)
            else:
                g = nm.phi_tilde(m + self.a_shift, 2 * m + 2, y)
            out[i] = cmath.exp(m * ly) * g
        return out


# ------------------------------------------------------------- solutions


@dataclass(frozen=True)
class SeriesSolution:
    """prefactor(z) · Σ_n coeffs_n · basis_n(z).

    Parameters
    ----------
    prefactor : Prefactor
    basis : object with ``values(z, n_idx, log_z, log_zm)``
    coeffs : CoefficientSequence
    domain : callable z -> bool
        Convergence domain predicate.
    z0 : complex
        Second finite singular point (for log(z − z0)); 0 for confluent cases.
    label : str
    ode : callable or None
        ``ode(z, U, dU, d2U)`` returning the list of ODE terms; used by
        :meth:`residual`.
    singular_points : tuple
        Points the contour derivative circle must avoid.
    """

    prefactor: Prefactor
    basis: object
    coeffs: CoefficientSequence
    domain: Callable = field(default=lambda z: True, compare=False)
    z0: complex = 0j
    label: str = ""
    ode: Callable | None = field(default=None, compare=False)
    singular_points: tuple = (0j,)
    domain_text: str = "all finite z"

    def in_domain(self, z) -> bool:
        return bool(self.domain(complex(z)))

    def terms(self, z, branch: Branch | None = None) -> np.ndarray:
        """Individual series terms coeff_n · basis_n(z) (without the prefactor)."""
        z = complex(z)
        lz, lzm = _logs(z, self.z0, branch)
        c = self.coeffs.values
        keep = np.nonzero(c != 0)[0]
        if keep.size == 0:
            return np.zeros(0, dtype=complex)
        last = keep[-1]
        n_idx = self.coeffs.indices[: last + 1]
        vals = self.basis.values(z, n_idx, lz, lzm)
        return c[: last + 1] * vals

    def evaluate(self, z, branch: Branch | None = None, tol: float = 1e-15, strict: bool = True) -> complex:
        """Value of the series at ``z``.

        Raises
        ------
        OutsideDomain
            If ``z`` is outside the convergence domain.
        NonConvergence
            If the last three retained terms are not all below ``tol``
            relative to the sum (checked on both wings for two-sided series).
        """
        z = complex(z)
        if not self.in_domain(z):
            raise OutsideDomain(f"z={z} outside the domain of {self.label or 'series'} ({self.domain_text})")
        t = self.terms(z, branch)
        total = t.sum()
        scale = max(abs(total), np.abs(t).max(initial=0.0))
        nz = np.nonzero(t)[0]
        # a sum with at most three nonzero terms (e.g. a power series at its centre) is exact
        if strict and nz.size > 3 and scale > 0:
            tails = [t[nz[-3:]]]
            if self.coeffs.n_min < 0:
                tails.append(t[nz[:3]])
            for tail in tails:
                if np.any(np.abs(tail) > max(tol, 1e-13) * scale * 1e3):
                    raise NonConvergence(
                        f"{self.label or 'series'} not converged at z={z}: "
                        f"tail {np.abs(tail).max():.2e} vs sum {scale:.2e}"
                    )
        lz, lzm = _logs(z, self.z0, branch)
        return self.prefactor(z, lz, lzm) * total

    __call__ = evaluate

    def residual(self, z, branch: Branch | None = None, method: str = "contour", h: float | None = None) -> float:
        """Normalized ODE residual |Σ terms| / max|term| at ``z``."""
        if self.ode is None:
            raise ValueError("no ODE attached to this solution")
        z = complex(z)
        f = self._continued(z, branch)
        if method == "contour":
            radius = h if h is not None else safe_radius(z, self.singular_points)
            u, du, d2u = contour_derivatives(f, z, radius)
        else:
            radius = h if h is not None else 1e-3 * max(1.0, abs(z))
            u, du, d2u = central_derivatives(f, z, radius)
        return normalized_residual(self.ode(z, u, du, d2u))

    def _continued(self, z, branch):
        # analytic continuation of the logs around z
        lz, lzm = _logs(z, self.z0, branch)
        br = Branch(z, lz, lzm, self.z0)
        return lambda w: self.evaluate(w, br)


def safe_radius(z, singular_points, frac: float = 0.15, cap: float = 0.25) -> float:
    dist = min([abs(z - s) for s in singular_points] + [np.inf])
    r = frac * dist if np.isfinite(dist) else cap
    return min(r, cap * max(1.0, abs(z)))


def contour_derivatives(f, z, radius, m: int = 24, max_halvings: int = 8):
    """f, f', f'' at z from the trapezoid rule on a circle (Cauchy formula).

    The radius is halved while the Taylor coefficients near k = m/2 are not
    negligible, which happens when f oscillates many times on the circle.
    """
    theta = 2 * np.pi * np.arange(m) / m
    for _ in range(max_halvings + 1):
        pts = z + radius * np.exp(1j * theta)
        vals = np.array([f(p) for p in pts])
        coef = np.fft.fft(vals) / m  # coef[k] = f^(k)(z) r^k / k!
        tail = np.max(np.abs(coef[m // 2 - 2 : m // 2 + 3]))
        if tail <= 1e-8 * np.max(np.abs(coef)):
            break
        radius /= 2
    return coef[0], coef[1] / radius, 2 * coef[2] / radius**2


def central_derivatives(f, z, h):
    """f, f', f'' at z by fourth-order central differences."""
    fm2, fm1, f0, fp1, fp2 = (f(z + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return f0, d1, d2


def normalized_residual(terms: Sequence[complex]) -> float:
    terms = [complex(t) for t in terms]
    scale = max(abs(t) for t in terms)
    if scale == 0:
        return 0.0
    return abs(sum(terms)) / scale

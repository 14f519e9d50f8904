"""Whittaker-Hill and Mathieu equations as particular cases.

    W'' + κ²[ϑ − ξ²/8 − (p+1)ξ cos 2κu + (ξ²/8) cos 4κu]W = 0     (WHE)
    W'' + σ²[a − 2k² cos 2σu]W = 0                                  (Mathieu)

Three routes are available:

``"gswe"``
    z = cos²(κu) for the WHE, z = cos²(σu/2) for Mathieu; four sets with
    definite parity.
``"dche"``
    z = e^{2iκu}; two sets (per sign choice) without definite parity.
``"ince"``
    Mathieu only, through the Whittaker-Ince limit of the GSWE with
    z = cos²(σu); the four Lindemann-Stieltjes classes.

For the Mathieu equation the class index of :func:`characteristic_a` is
the set index of the chosen route.  Ince classes 1-4 are the usual
a_{2r}, a_{2r+1}, b_{2r+2}, b_{2r+1}.  The GSWE route folds the integer
order characteristic values into two sets (set 1 holds every a_m, set 3
every b_m) and carries the half-integer order family (period 4π) in sets
2 and 4.  The DCHE route carries only the half-integer family.
:data:`MATHIEU_CLASS_MAP` records which sets share characteristic values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import dche, gswe, ince
from .exceptions import InadmissibleFraction, NoRoot
from .params import DcheParams, GsweParams, InceGsweParams, MathieuParams, WheParams
from .recurrence import (
    RecurrenceSystem,
    characteristic_residual,
    check_nu,
    minimal_solution,
    solve_characteristic,
)
from .series import SeriesSolution, contour_derivatives, normalized_residual

__all__ = [
    "PeriodicSolutionMeta",
    "PeriodicSolution",
    "MATHIEU_CLASS_MAP",
    "whe_as_gswe",
    "whe_as_dche",
    "mathieu_routes",
    "mathieu_system",
    "characteristic_a",
    "mathieu_characteristic_values",
    "hill_oracle",
    "periodic_solution",
    "evaluate_periodic",
    "whe_period_dche",
    "ince_whe_system",
    "ince_whe_solution",
    "whe_residual",
    "mathieu_residual",
]

# (route, set) pairs with identical characteristic-value families
MATHIEU_CLASS_MAP = {
    "even_integer": [("ince", 1), ("ince", 2), ("gswe", 1)],
    "odd_integer": [("ince", 3), ("ince", 4), ("gswe", 3)],
    "half_integer": [("gswe", 2), ("gswe", 4), ("dche", 1), ("dche", 2)],
}


@dataclass(frozen=True)
class PeriodicSolutionMeta:
    parity: str | None  # "even", "odd" or None
    period: float | None  # in u; None when aperiodic (or σ, κ = i)
    route: str  # "gswe", "dche" or "ince"


# ---------------------------------------------------------------- mappings


def whe_as_gswe(w: WheParams):
    """GSWE parameters for the WHE under z = cos²(κu)."""
    p = GsweParams(
        B1=-0.5,
        B2=1,
        B3=((w.p + 1) * w.xi - w.theta) / 4,
        z0=1,
        omega=-0.5j * w.xi,
        eta=-0.5j * (w.p + 1),
    )
    return p, lambda u: cmath.cos(w.kappa * u) ** 2


def whe_as_dche(w: WheParams, sign: int = 1):
    """DCHE parameters for the WHE under z = e^{2iκu}.

    W(u) = z^{1+p/2} e^{ξ/(8z)} U(z); ``sign`` picks iω = ±ξ/8, iη = ±(p+1)/2.
    Returns ``(params, zmap, outer)`` with ``outer(u, log_z, z)`` the factor
    in front of U.
    """
    if w.xi == 0:
        raise ValueError("ξ = 0: the WHE is not a DCHE")
    p = DcheParams(
        B1=-w.xi / 4,
        B2=w.p + 3,
        B3=(w.p / 2 + 1) ** 2 + w.xi**2 / 32 - w.theta / 4,
        omega=-1j * sign * w.xi / 8,
        eta=-0.5j * sign * (w.p + 1),
    )

    def outer(u, lz, z):
        return cmath.exp((1 + w.p / 2) * lz + w.xi / (8 * z))

    return p, lambda u: cmath.exp(2j * w.kappa * u), outer


def mathieu_routes(m: MathieuParams, sign: int = 1) -> dict:
    """Parameter records for the Mathieu equation along each route.

    Keys: ``"gswe"`` (z = cos²(σu/2)), ``"whe"`` (κ = σ/2),
    ``"dche"`` (z = e^{iσu}) and ``"ince"`` (z = cos²(σu)).
    """
    if m.k == 0:
        raise ValueError("k = 0: free equation")
    k, a, s = m.k, m.a, m.sigma
    w = WheParams(p=-1, xi=sign * 8j * k, theta=4 * a - 8 * k * k, kappa=s / 2)
    return {
        "gswe": GsweParams(B1=-0.5, B2=1, B3=2 * k * k - a, z0=1, omega=sign * 4 * k, eta=0),
        "whe": w,
        "dche": whe_as_dche(w)[0],
        "ince": InceGsweParams(B1=-0.5, B2=1, B3=(2 * k * k - a) / 4, z0=1, q=k * k),
    }


def _a_from_b3(route, k, b3):
    if route == "gswe":
        return 2 * k * k - b3
    if route == "dche":
        return 0.25 - b3
    if route == "ince":
        return 2 * k * k - 4 * b3
    raise ValueError(f"unknown route {route!r}")


def mathieu_system(m: MathieuParams, cls: int, route: str, sign: int = 1) -> RecurrenceSystem:
    """Recurrence for set ``cls`` of ``route`` with the characteristic value a free."""
    if route == "dche" and cls not in (1, 2):
        raise ValueError("the DCHE route has sets 1 and 2")
    if route not in ("gswe", "dche", "ince"):
        raise ValueError(f"unknown route {route!r}")
    if cls not in (1, 2, 3, 4):
        raise ValueError("set index must be 1..4")

    def params(a):
        return mathieu_routes(m.replace(a=a), sign)[route]

    if route == "gswe":
        def coeffs(n, a):
            return gswe.c_system(params(a), cls).coeffs(n, params(a).B3)
    elif route == "dche":
        def coeffs(n, a):
            return dche.system(params(a), cls).coeffs(n, params(a).B3)
    else:
        def coeffs(n, a):
            return ince.c_system(params(a), cls).coeffs(n, params(a).B3)

    return RecurrenceSystem(coeffs, free_param="a", value=m.a, scale=4 * abs(m.k),
                            label=f"mathieu {route} set {cls}")


def _free_values(route: str, cls: int, count: int) -> list:
    """Characteristic values of the free equation (k = 0) for a route/set."""
    if route == "ince":
        start = {1: 0, 2: 1, 3: 2, 4: 1}[cls]
        return [float((start + 2 * r) ** 2) for r in range(count)]
    if route == "gswe" and cls in (1, 3):
        start = 0 if cls == 1 else 1
        return [float((start + r) ** 2) for r in range(count)]
    return [(r + 0.5) ** 2 for r in range(count)]


def _inverted(r: int):
    # the r-th free value belongs to row r of every route's recurrence
    return lambda sys, x: characteristic_residual(sys, x, inversion=r)


def mathieu_characteristic_values(m: MathieuParams, cls: int, route: str, count: int = 4,
                                  tol: float = 1e-13, sign: int = 1, step: float = 0.2) -> np.ndarray:
    """Lowest ``count`` characteristic values of a route/set, ordered by Re a.

    Each value is followed by continuation in k from the free equation
    (k = 0, where a = m² or (m + ½)²) in steps of at most ``step``, and
    polished on the continued-fraction characteristic equation.
    """
    nsteps = max(1, int(math.ceil(abs(m.k) / step)))
    values = _free_values(route, cls, count)
    for kk in np.linspace(0, 1, nsteps + 1)[1:]:
        sys = mathieu_system(m.replace(k=m.k * kk), cls, route, sign)
        values = [solve_characteristic(sys, v, tol, residual=_inverted(r)) for r, v in enumerate(values)]
    out = np.array(values)
    if len(set(np.round(out, 6))) < len(out):
        raise NoRoot("continuation merged two characteristic values; use a smaller step")
    return out[np.argsort(out.real)]


def characteristic_a(m: MathieuParams, cls: int = 1, route: str = "ince", index: int = 0,
                     guess=None, tol: float = 1e-13, sign: int = 1) -> complex:
    """Characteristic value a for set ``cls`` of ``route``.

    With ``guess`` the root nearest to it is polished; otherwise the
    ``index``-th lowest value (by real part) is returned.
    """
    sys = mathieu_system(m, cls, route, sign)
    if guess is not None:
        return solve_characteristic(sys, guess, tol)
    return complex(mathieu_characteristic_values(m, cls, route, index + 1, tol=tol, sign=sign)[index])


def hill_oracle(k: float, cls: int, count: int = 4, dim: int = 40) -> np.ndarray:
    """Eigenvalues of the 40 × 40 symmetric Fourier Hill matrix (real k).

    Independent of the series routes: a cos/sin Fourier expansion of the
    Mathieu equation in each Lindemann-Stieltjes class.
    """
    q = float(k) ** 2
    if cls == 1:  # cos 2ru
        d = np.array([(2 * r) ** 2 for r in range(dim)], dtype=float)
        off = np.full(dim - 1, q)
        off[0] = math.sqrt(2) * q
    elif cls == 2:  # cos (2r+1)u
        d = np.array([(2 * r + 1) ** 2 for r in range(dim)], dtype=float)
        d[0] += q
        off = np.full(dim - 1, q)
    elif cls == 3:  # sin (2r+2)u
        d = np.array([(2 * r + 2) ** 2 for r in range(dim)], dtype=float)
        off = np.full(dim - 1, q)
    elif cls == 4:  # sin (2r+1)u
        d = np.array([(2 * r + 1) ** 2 for r in range(dim)], dtype=float)
        d[0] -= q
        off = np.full(dim - 1, q)
    else:
        raise ValueError("class must be 1..4")
    mat = np.diag(d) + np.diag(off, 1) + np.diag(off, -1)
    return np.linalg.eigvalsh(mat)[:count]


# ---------------------------------------------------------------- solutions


@dataclass(frozen=True)
class PeriodicSolution:
    """W(u) = outer(u) · U(z(u)) with the logarithms of z fixed by u."""

    series: SeriesSolution
    logs: Callable  # u -> (z, log z, log(z − z0))
    meta: PeriodicSolutionMeta
    outer: Callable | None = None  # (u, log z, z) -> factor
    label: str = ""

    def __call__(self, u) -> complex:
        return evaluate_periodic(self, u)[0]


def _cos2_logs(c):
    """Logs for z = cos²(c·u), z0 = 1: log z = 2 log cos, log(z − 1) = 2 log sin + iπ."""

    def logs(u):
        co, si = cmath.cos(c * u), cmath.sin(c * u)
        z = co * co
        lz = 2 * cmath.log(co) if co != 0 else complex(-math.inf)
        lzm = 2 * cmath.log(si) + 1j * math.pi if si != 0 else complex(-math.inf)
        return z, lz, lzm

    return logs


def _exp_logs(c):
    def logs(u):
        lz = 1j * c * u
        return cmath.exp(lz), lz, None

    return logs


@dataclass(frozen=True)
class _FixedLogs:
    """Branch stand-in returning logs already fixed by u (valid at z = 0 too)."""

    log_z: complex
    log_zm: complex | None

    def logs(self, z):
        return self.log_z, self.log_zm


def evaluate_periodic(sol: PeriodicSolution, u):
    """(W(u), metadata).  Raises OutsideDomain where the series diverges."""
    u = complex(u)
    z, lz, lzm = sol.logs(u)
    val = sol.series.evaluate(z, _FixedLogs(lz, lzm))
    if sol.outer is not None:
        val *= sol.outer(u, lz, z)
    return val, sol.meta


def whe_period_dche(p, kappa) -> float | None:
    """Period in u of the WHE-as-DCHE solutions, following the case list.

    The solutions carry e^{i(p+2)κu} or e^{−ipκu} times a series in
    e^{2iκu}.  For κ = 1 the period is π for even integer p, 2π for odd p
    and 2mπ for p = l/m in lowest terms; other p give no period.  For real
    κ > 0 the period scales as 1/κ; imaginary κ gives None.
    """
    kappa = complex(kappa)
    if abs(kappa.imag) > 1e-12 or kappa.real <= 0:
        return None
    p = complex(p)
    if abs(p.imag) > 1e-12:
        return None
    frac = Fraction(p.real).limit_denominator(1000)
    if abs(float(frac) - p.real) > 1e-12:
        return None
    if frac.denominator == 1:
        base = math.pi if frac.numerator % 2 == 0 else 2 * math.pi
    else:
        base = 2 * frac.denominator * math.pi
    return base / kappa.real


_INCE_META = {1: ("even", 1), 2: ("even", 2), 3: ("odd", 1), 4: ("odd", 2)}


def periodic_solution(eq, route: str, i: int, member: str = "U0", n_max: int = 60, sign: int = 1,
                      b3=None) -> PeriodicSolution:
    """Series solution W(u) for a solved :class:`MathieuParams` or :class:`WheParams`.

    The characteristic value (``a`` for Mathieu, ``theta`` for the WHE)
    stored in ``eq`` must already satisfy the chosen set's equation.
    ``member`` is ``"U0"``, ``"Uinf"`` or ``"U"``.
    """
    if isinstance(eq, MathieuParams):
        routes = mathieu_routes(eq, sign)
        per_unit = math.pi if complex(eq.sigma) == 1 else None
        if route == "ince":
            p = routes["ince"]
            sset = ince.solution_set_gswe(p, i, n_max)
            parity, mult = _INCE_META[i]
            meta = PeriodicSolutionMeta(parity, mult * per_unit if per_unit else None, "ince")
            return PeriodicSolution(sset[member], _cos2_logs(eq.sigma), meta, label=f"W{i}{member}")
        if route == "gswe":
            p = routes["gswe"]
            sset = gswe.solution_set(p, i, n_max)
            parity, mult = _INCE_META[i]
            meta = PeriodicSolutionMeta(parity, 2 * mult * per_unit if per_unit else None, "gswe")
            return PeriodicSolution(sset[member], _cos2_logs(eq.sigma / 2), meta, label=f"W{i}{member}")
        if route == "dche":
            w = routes["whe"]
            return _whe_dche_solution(w, i, member, n_max, sign)
        raise ValueError(f"unknown route {route!r}")
    if isinstance(eq, WheParams):
        if route == "gswe":
            p, _ = whe_as_gswe(eq)
            sset = gswe.solution_set(p, i, n_max)
            parity, mult = _INCE_META[i]
            period = mult * math.pi if complex(eq.kappa) == 1 else None
            return PeriodicSolution(sset[member], _cos2_logs(eq.kappa), PeriodicSolutionMeta(parity, period, "gswe"),
                                    label=f"W{i}{member}")
        if route == "dche":
            return _whe_dche_solution(eq, i, member, n_max, sign)
        raise ValueError("the WHE has the gswe and dche routes")
    raise TypeError("expected MathieuParams or WheParams")


def _whe_dche_solution(w: WheParams, i, member, n_max, sign):
    if i not in (1, 2):
        raise ValueError("the DCHE route has sets 1 and 2 (per sign)")
    p, _, outer = whe_as_dche(w, sign)
    sset = dche.solution_set(p, i, n_max)
    meta = PeriodicSolutionMeta(None, whe_period_dche(w.p, w.kappa), "dche")
    return PeriodicSolution(sset[member], _exp_logs(2 * w.kappa), meta, outer=outer, label=f"W{i}{member}")


# ------------------------------------------------------------- residuals


def whe_residual(w: WheParams, f, u, radius: float = 0.05) -> float:
    """Normalized WHE residual of a function of u (contour derivatives)."""
    u = complex(u)
    v, _, d2 = contour_derivatives(f, u, radius)
    k2 = w.kappa**2
    pot = k2 * (w.theta - w.xi**2 / 8 - (w.p + 1) * w.xi * cmath.cos(2 * w.kappa * u)
                + w.xi**2 / 8 * cmath.cos(4 * w.kappa * u))
    return normalized_residual([d2, k2 * w.theta * v, pot * v - k2 * w.theta * v])


def mathieu_residual(m: MathieuParams, f, u, radius: float = 0.05) -> float:
    u = complex(u)
    v, _, d2 = contour_derivatives(f, u, radius)
    s2 = m.sigma**2
    return normalized_residual([d2, s2 * m.a * v, -2 * s2 * m.k**2 * cmath.cos(2 * m.sigma * u) * v])


# ------------------------------------------------------ two-sided Ince WHE


def _fraction_nu(l: int, m: int) -> complex:
    if not (isinstance(l, (int, np.integer)) and isinstance(m, (int, np.integer))):
        raise InadmissibleFraction("l and m must be integers")
    if m <= 1 or not 0 < l < m or math.gcd(l, m) != 1:
        raise InadmissibleFraction(f"need 0 < l < m, m > 1, gcd(l, m) = 1; got l={l}, m={m}")
    nu = (l / m - 1) / 2
    check_nu(nu)
    return complex(nu)


def ince_whe_system(w: WheParams, nu) -> RecurrenceSystem:
    """Two-sided recurrence of the even cosine series, ϑ free.

        ξ(n+ν+½−p/2) b_{n+1} + [ϑ − (2n+2ν+1)²] b_n − ξ(n+ν+½+p/2) b_{n−1} = 0
    """
    xi, p = w.xi, w.p

    def coeffs(n, theta):
        m = n + nu + 0.5
        return xi * (m - p / 2), theta - (2 * m) ** 2, -xi * (m + p / 2)

    return RecurrenceSystem(coeffs, two_sided=True, free_param="theta", value=w.theta, nu=complex(nu),
                            scale=abs(xi), label="two-sided cosine series")


@dataclass(frozen=True)
class InceWheSolution:
    theta: complex
    nu: complex
    coeffs: object
    params: WheParams
    period: float

    def __call__(self, u) -> complex:
        u = complex(u)
        n = self.coeffs.indices
        s = np.sum(self.coeffs.values * np.cos((2 * n + 2 * self.nu + 1) * u))
        return complex(cmath.exp(self.params.xi / 2 * cmath.cos(u) ** 2) * s)


def ince_whe_solution(l: int, m: int, w: WheParams, guess=None, n_max: int = 40,
                      tol: float = 1e-13) -> InceWheSolution:
    """Even WHE solution of period 2mπ from a two-sided cosine series (κ = 1).

    ν is fixed by 2ν + 1 = l/m and ϑ is solved from the two-sided
    characteristic equation, starting at ``guess`` (default (l/m)²).
    """
    if complex(w.kappa) != 1:
        raise ValueError("the cosine series solution is written for κ = 1")
    nu = _fraction_nu(l, m)
    sys = ince_whe_system(w, nu)
    if guess is None:
        guess = (l / m) ** 2
    theta = solve_characteristic(sys, guess, tol)
    coeffs = minimal_solution(sys.with_value(theta), n_max)
    return InceWheSolution(theta, nu, coeffs, w.replace(theta=theta), 2 * m * math.pi)

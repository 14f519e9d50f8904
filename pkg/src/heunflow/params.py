"""Parameter records for the equation families.

Each record is an immutable dataclass; ``replace`` returns modified copies.
The ``kind`` attribute tags the record so that the records together act as
a tagged union.
"""

from __future__ import annotations

import cmath
from dataclasses import asdict, dataclass, replace

__all__ = [
    "GsweParams",
    "DcheParams",
    "InceGsweParams",
    "InceDcheParams",
    "WheParams",
    "MathieuParams",
    "MorseParams",
    "HeunParams",
    "as_complex",
]


def as_complex(v, name="value") -> complex:
    try:
        c = complex(v)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be a number, got {v!r}") from exc
    if not cmath.isfinite(c):
        raise ValueError(f"{name} must be finite, got {v!r}")
    return c


class _Params:
    kind = "base"

    def __post_init__(self):
        for k, v in asdict(self).items():
            if isinstance(v, (int, float, complex)) and not isinstance(v, bool):
                object.__setattr__(self, k, as_complex(v, k))

    def replace(self, **kw):
        return replace(self, **kw)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GsweParams(_Params):
    """z(z−z0)U'' + (B1+B2 z)U' + [B3 − 2ηω(z−z0) + ω² z(z−z0)]U = 0."""

    B1: complex
    B2: complex
    B3: complex
    z0: complex
    omega: complex
    eta: complex
    kind = "gswe"

    @property
    def r(self) -> complex:
        """B1/z0."""
        return self.B1 / self.z0


@dataclass(frozen=True)
class DcheParams(_Params):
    """z²U'' + (B1+B2 z)U' + (B3 − 2ηωz + ω²z²)U = 0."""

    B1: complex
    B2: complex
    B3: complex
    omega: complex
    eta: complex
    kind = "dche"


@dataclass(frozen=True)
class InceGsweParams(_Params):
    """z(z−z0)U'' + (B1+B2 z)U' + [B3 + q(z−z0)]U = 0."""

    B1: complex
    B2: complex
    B3: complex
    z0: complex
    q: complex
    kind = "ince-gswe"

    @property
    def r(self) -> complex:
        return self.B1 / self.z0


@dataclass(frozen=True)
class InceDcheParams(_Params):
    """z²U'' + (B1+B2 z)U' + (B3 + qz)U = 0."""

    B1: complex
    B2: complex
    B3: complex
    q: complex
    kind = "ince-dche"


@dataclass(frozen=True)
class WheParams(_Params):
    """W'' + κ²[ϑ − ξ²/8 − (p+1)ξ cos 2κu + (ξ²/8) cos 4κu]W = 0."""

    p: complex
    xi: complex
    theta: complex = 0j
    kappa: complex = 1 + 0j
    kind = "whe"


@dataclass(frozen=True)
class MathieuParams(_Params):
    """W'' + σ²[a − 2k² cos 2σu]W = 0 (standard q = k²)."""

    k: complex
    a: complex = 0j
    sigma: complex = 1 + 0j
    kind = "mathieu"


@dataclass(frozen=True)
class MorseParams(_Params):
    """ψ'' + [E − V(u)]ψ = 0, V = (B²/4)(sinh u − C/B)² − B(s+1/2)cosh u."""

    B: complex
    C: complex
    s: complex
    E: complex = 0j
    kind = "morse"


@dataclass(frozen=True)
class HeunParams(_Params):
    """General Heun equation with singular points 0, 1, a and ∞."""

    a: complex
    q: complex
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    kind = "heun"

    def __post_init__(self):
        super().__post_init__()
        if self.a == 0 or self.a == 1:
            raise ValueError("Heun singular point a must differ from 0 and 1")

    @property
    def epsilon(self) -> complex:
        return self.alpha + self.beta + 1 - self.gamma - self.delta

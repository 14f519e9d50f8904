"""Series solutions of the generalized spheroidal wave equation (confluent
Heun equation), its Leaver and Whittaker-Ince limits, and applications to
the Mathieu, Whittaker-Hill and double-Morse problems."""

from .exceptions import HeunflowError
from .params import (
    DcheParams,
    GsweParams,
    HeunParams,
    InceDcheParams,
    InceGsweParams,
    MathieuParams,
    MorseParams,
    WheParams,
)

__version__ = "0.1.0"

__all__ = [
    "HeunflowError",
    "GsweParams",
    "DcheParams",
    "InceGsweParams",
    "InceDcheParams",
    "WheParams",
    "MathieuParams",
    "MorseParams",
    "HeunParams",
    "__version__",
]

"""Calculator for the uniform constants of the model construction.

Inputs that are only known to exist (through compactness arguments) are taken
as parameters; everything with a closed form is derived exactly in rational
arithmetic.  A derived value is ``None`` when one of its inputs is missing.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .surfaces import Surface

_INPUTS = ("epsilon", "epsilon1", "epsilon2", "K", "L", "d", "d0", "delta0", "delta1", "m0", "k")


def occupation_bound(surface: Surface) -> int:
    """Maximal number of bricks needed to occupy one brick: ``(-3 chi)^(xi - 1)``."""
    return (-3 * surface.chi) ** (surface.xi - 1)


def buffer_width(a, b, m: int) -> Fraction:
    """Spacing used by the buffered interval rule on ``[a, b]`` with ``m + 1`` entries."""
    if m < 0:
        raise DomainError("geodesic length must be non-negative")
    a, b = Fraction(a), Fraction(b)
    if b <= a:
        raise DomainError("interval must have a < b")
    return (b - a) / (2 * m + 1)


@dataclass(frozen=True)
class ConstantsLedger:
    epsilon: Optional[Fraction] = None
    epsilon1: Optional[Fraction] = None
    epsilon2: Optional[Fraction] = None
    K: Optional[Fraction] = None
    L: Optional[Fraction] = None
    d: Optional[Fraction] = None
    d0: Optional[Fraction] = None
    delta0: Optional[Fraction] = None
    delta1: Optional[Fraction] = None
    m0: Optional[Fraction] = None
    k: Optional[Fraction] = None
    n0: Optional[int] = None
    tau: Optional[Fraction] = None
    d1: Optional[Fraction] = None
    delta2_prime: Optional[Fraction] = None
    delta2: Optional[Fraction] = None
    gamma0: Optional[Fraction] = None
    a0: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                out[f.name] = str(v)
        return out


def _pos(name, v):
    if v is None:
        return None
    if isinstance(v, float):
        v = Fraction(v).limit_denominator(10 ** 12) if v == v else v
    try:
        x = Fraction(v)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be rational, got {v!r}") from exc
    if x <= 0:
        raise DomainError(f"{name} must be positive, got {x}")
    return x


def constants(surface: Optional[Surface] = None, n0=None, interval=None, m=None, **inputs) -> ConstantsLedger:
    """Fill in every derived constant whose inputs are available.

    ``n0`` may be given directly or derived from ``surface``; ``interval=(a, b)``
    with ``m`` yields the buffer spacing.
    """
    unknown = set(inputs) - set(_INPUTS)
    if unknown:
        raise DomainError(f"unknown inputs {sorted(unknown)}")
    v = {name: _pos(name, inputs.get(name)) for name in _INPUTS}
    if n0 is not None:
        if int(n0) != n0 or n0 <= 0:
            raise DomainError("n0 must be a positive integer")
        n0 = int(n0)
    elif surface is not None:
        n0 = occupation_bound(surface)
    tau = buffer_width(interval[0], interval[1], m) if interval is not None and m is not None else None

    def have(*names):
        return all(v[x] is not None for x in names)

    d1 = (v["d"] + 1) * (1 + v["L"] * v["epsilon1"] / v["epsilon"]) if have("d", "L", "epsilon1", "epsilon") else None
    spread = 2 * v["delta0"] + v["delta1"] if have("delta0", "delta1") else None
    d2p = 2 * v["d0"] * spread + 2 * v["delta0"] if spread is not None and have("d0") else None
    d2 = d2p + 2 * n0 * spread if d2p is not None and n0 is not None else None
    g0 = v["K"] * n0 * spread if spread is not None and n0 is not None and have("K") else None
    a0 = (v["m0"] + 2) * d2 if d2 is not None and have("m0") else None
    return ConstantsLedger(**v, n0=n0, tau=tau, d1=d1, delta2_prime=d2p, delta2=d2, gamma0=g0, a0=a0)


def default_ledger(surface: Surface, d0=1, delta0=1, delta1=2, **extra) -> ConstantsLedger:
    """Ledger with the small default section constants used by the bundled checks."""
    return constants(surface, d0=d0, delta0=delta0, delta1=delta1, **extra)

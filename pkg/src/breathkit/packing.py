"""Analytical model of the uniaxial swelling of a monosized disc packing.

Discs of initial radius ``R0`` swell to ``R = xi * R0`` inside a container
that forbids lateral expansion.  The packing angle ``alpha`` (between the
horizontal and the line joining two touching centres) then follows from the
swelling factor ``xi`` alone, cycling through the 60-hexagonal (alpha = 0),
30-hexagonal (alpha = pi/6) and back to 60-hexagonal (alpha -> pi/3)
arrangements every time the radius doubles.

All areas are nondimensionalised by ``4 * R0**2`` and refer to one
representative tile holding four discs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegeneratePointError, DomainError, InputValidationError

__all__ = [
    "PackingKind",
    "PackingScenario",
    "PackingState",
    "SQRT3",
    "CHI_MAX",
    "MINIMISATION_LIMIT",
    "transition_index",
    "packing_angle",
    "body_area_tilde",
    "initial_body_area_tilde",
    "solid_area_tilde",
    "breathing_bs",
    "breathing_bs_at_start",
    "solid_fraction",
    "packing_state",
    "closed_form_minima",
    "asymptotic_limits",
    "hexagonal_points",
]

SQRT3 = math.sqrt(3.0)
PI_6 = math.pi / 6
PI_3 = math.pi / 3
CHI_MAX = math.pi / math.sqrt(12.0)
MINIMISATION_LIMIT = math.sqrt(12.0) / math.pi

_DEGENERATE_TOL = 1e-12
# acos(0.5) rounds one ulp above the double nearest pi/3
_ANGLE_SLACK = 1e-14


class PackingKind(str, enum.Enum):
    SQUARE = "square"
    HEX30 = "hex30"
    HEX60 = "hex60"

    @classmethod
    def parse(cls, tag: "str | PackingKind") -> "PackingKind":
        if isinstance(tag, PackingKind):
            return tag
        try:
            return cls(str(tag).strip().lower())
        except ValueError:
            raise InputValidationError(
                f"unknown packing {tag!r}; expected square, hex30 or hex60"
            ) from None


@dataclass(frozen=True)
class PackingScenario:
    """Initial packing kind and initial packing angle ``alpha0`` (radians).

    Built through :meth:`create`, which canonicalises the three kinds onto the
    two families the model distinguishes: a 30-hexagonal start is the
    60-hexagonal family at ``alpha0 = pi/6``, and a square start with
    ``alpha0 >= pi/6`` is already hexagonal.
    """

    initial_kind: PackingKind
    alpha0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha0) and 0.0 <= self.alpha0 < PI_3):
            raise InputValidationError(f"alpha0 must lie in [0, pi/3), got {self.alpha0!r}")
        if self.initial_kind is PackingKind.HEX30:
            raise InputValidationError("use PackingScenario.create to canonicalise hex30")
        if self.initial_kind is PackingKind.SQUARE and self.alpha0 >= PI_6:
            raise InputValidationError("use PackingScenario.create for square with alpha0 >= pi/6")

    @classmethod
    def create(cls, kind: "str | PackingKind", alpha0: float | None = None) -> "PackingScenario":
        kind = PackingKind.parse(kind)
        if kind is PackingKind.HEX30:
            if alpha0 is not None and not math.isclose(alpha0, PI_6, rel_tol=0, abs_tol=1e-12):
                raise InputValidationError(
                    f"a hex30 start has alpha0 = pi/6 by definition, got {alpha0!r}"
                )
            return cls(PackingKind.HEX60, PI_6)
        alpha0 = 0.0 if alpha0 is None else float(alpha0)
        if kind is PackingKind.SQUARE and PI_6 <= alpha0 < PI_3:
            kind = PackingKind.HEX60
        return cls(kind, alpha0)

    @property
    def is_square(self) -> bool:
        return self.initial_kind is PackingKind.SQUARE


@dataclass(frozen=True)
class PackingState:
    xi: float
    n: int
    alpha: float
    a_body_tilde: float
    a_body0_tilde: float
    a_solid_tilde: float

    @property
    def solid_fraction(self) -> float:
        return self.a_solid_tilde / self.a_body_tilde

    @property
    def porosity(self) -> float:
        return 1.0 - self.solid_fraction


def _check_xi(xi: float) -> None:
    if not (math.isfinite(xi) and xi >= 1.0):
        raise DomainError(f"swelling factor must be a finite value >= 1, got {xi!r}")


def transition_index(xi: float, alpha0: float) -> int:
    """Number of times the packing has reached the 60-hexagonal arrangement.

    The angle is first reset to zero, then the remaining swelling is halved
    until it no longer exceeds 2.  The comparison is strict, so an exact
    power of two stays at ``alpha = pi/3`` of the previous index.
    """
    _check_xi(xi)
    if not 0.0 <= alpha0 < PI_3:
        raise DomainError(f"alpha0 must lie in [0, pi/3), got {alpha0!r}")
    n = 0
    x = xi / math.cos(alpha0)
    while x > 2.0:
        n += 1
        x /= 2.0
    return n


def packing_angle(xi: float, alpha0: float, n: int) -> float:
    c = (2.0**n) * math.cos(alpha0) / xi
    if not 0.0 < c <= 1.0:
        # Rounding can push an exact alpha = 0 state a hair above 1.
        if 1.0 < c <= 1.0 + 4 * 2.2e-16:
            return 0.0
        raise DomainError(f"inconsistent (xi={xi!r}, n={n!r}) pair: arccos argument {c!r}")
    return math.acos(c)


def body_area_tilde(xi: float, alpha: float, scenario: PackingScenario, n: int) -> float:
    """Tile area over ``4 R0**2`` at swelling ``xi`` and packing angle ``alpha``."""
    if not 0.0 <= alpha <= PI_3 + _ANGLE_SLACK:
        raise DomainError(f"packing angle must lie in [0, pi/3], got {alpha!r}")
    x2 = xi * xi
    if alpha < PI_6:
        if scenario.is_square and n == 0:
            return 4.0 * x2 * math.cos(alpha)
        return x2 * (SQRT3 + 2.0 * math.sin(2 * PI_3 - 2.0 * alpha))
    return 8.0 * x2 * math.cos(alpha) * math.sin(alpha)


def initial_body_area_tilde(scenario: PackingScenario) -> float:
    a0 = scenario.alpha0
    if a0 < PI_6:
        if scenario.is_square:
            return 4.0 * math.cos(a0)
        return SQRT3 + 2.0 * math.sin(2 * PI_3 - 2.0 * a0)
    return 8.0 * math.cos(a0) * math.sin(a0)


def solid_area_tilde(xi: float) -> float:
    return math.pi * xi * xi


def packing_state(xi: float, scenario: PackingScenario) -> PackingState:
    n = transition_index(xi, scenario.alpha0)
    alpha = packing_angle(xi, scenario.alpha0, n)
    return PackingState(
        xi=xi,
        n=n,
        alpha=alpha,
        a_body_tilde=body_area_tilde(xi, alpha, scenario, n),
        a_body0_tilde=initial_body_area_tilde(scenario),
        a_solid_tilde=solid_area_tilde(xi),
    )


def breathing_bs_at_start(scenario: PackingScenario) -> float:
    """One-sided limit of ``u_bs`` as ``xi -> 1+``.

    Both area variations vanish at ``xi = 1``, so the limit is the ratio of
    their slopes, ``dA_body/dxi / (2 pi)``.  Starting exactly from the
    60-hexagonal arrangement the body slope is unbounded.
    """
    a0 = scenario.alpha0
    c, s = math.cos(a0), math.sin(a0)
    if a0 >= PI_6:
        slope = 8.0 * c / s
    elif scenario.is_square:
        slope = 4.0 * c
    elif a0 == 0.0:
        return math.inf
    else:
        area0 = initial_body_area_tilde(scenario)
        slope = 2.0 * area0 - 4.0 * math.cos(2 * PI_3 - 2.0 * a0) * c / s
    return slope / (2.0 * math.pi)


def breathing_bs(xi: float, scenario: PackingScenario) -> float:
    """Breathing coefficient ``u_bs = dA_body / dA_solid`` of the swelling packing."""
    _check_xi(xi)
    if xi == 1.0:
        return breathing_bs_at_start(scenario)
    st = packing_state(xi, scenario)
    return (st.a_body_tilde - st.a_body0_tilde) / (math.pi * (xi * xi - 1.0))


def solid_fraction(xi: float, scenario: PackingScenario) -> float:
    return packing_state(xi, scenario).solid_fraction


def closed_form_minima(n: int, alpha0: float, a_body0_tilde: float) -> tuple[float, float]:
    """``u_bs`` at the 60-hexagonal point ``xi = 2**n cos(alpha0)`` and at the
    30-hexagonal point ``xi = 2**(n+1) cos(alpha0) / sqrt(3)``."""
    c2 = math.cos(alpha0) ** 2
    p = 4.0**n
    den_hex60 = p * c2 - 1.0
    den_hex30 = 4.0 * p * c2 - 3.0
    if abs(den_hex60) <= _DEGENERATE_TOL * max(1.0, p * c2):
        raise DegeneratePointError(f"alpha = 0 form degenerates at n={n}, alpha0={alpha0!r}")
    if abs(den_hex30) <= _DEGENERATE_TOL * max(1.0, 4.0 * p * c2):
        raise DegeneratePointError(f"alpha = pi/6 form degenerates at n={n}, alpha0={alpha0!r}")
    at_hex60 = (2.0 * p * SQRT3 * c2 - a_body0_tilde) / (math.pi * den_hex60)
    at_hex30 = (8.0 * p * SQRT3 * c2 - 3.0 * a_body0_tilde) / (math.pi * den_hex30)
    return at_hex60, at_hex30


def asymptotic_limits(scenario: PackingScenario, xi_large: float = 2.0**10) -> dict:
    """Values the coefficients approach once initial areas are negligible.

    ``u_bs`` tends to the inverse solid fraction, ``u_vs`` to ``1/chi - 1``
    (void over solid) and ``u_bv`` to the inverse porosity.
    """
    chi = solid_fraction(xi_large, scenario)
    return {
        "u_bs_limit": 1.0 / chi,
        "u_vs_limit": 1.0 / chi - 1.0,
        "u_bv_limit": 1.0 / (1.0 - chi),
    }


def hexagonal_points(alpha0: float, xi_start: float, xi_end: float) -> list[float]:
    """Swelling factors of the 60- and 30-hexagonal states inside a range."""
    c = math.cos(alpha0)
    out = []
    n = 0
    while True:
        hex60 = (2.0**n) * c
        hex30 = (2.0 ** (n + 1)) * c / SQRT3
        if min(hex60, hex30) > xi_end:
            break
        out.extend(x for x in (hex60, hex30) if xi_start <= x <= xi_end)
        n += 1
    return sorted(out)

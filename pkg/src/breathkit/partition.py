"""Volume-variation partition of a porous body.

A porous body holds a solid phase and a "void" phase, so any change of the
body volume splits as ``d_body = d_solid + d_void``.  The breathing
coefficient is the ratio of two of those three variations; this module
computes it in all six definitions, converts between them, classifies the
breathing regime and gates the result against a volume uncertainty.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from .errors import ClassificationError, InputValidationError

__all__ = [
    "Phase",
    "Definition",
    "Validity",
    "Configuration",
    "LimitCase",
    "VolumePartition",
    "VolumeDelta",
    "ValidityConfig",
    "CoefficientResult",
    "BreathingRegime",
    "ABACUS",
    "ABACUS_VALUES",
    "delta_partition",
    "coefficient",
    "coefficients",
    "convert",
    "classify",
    "validity_gate",
    "abacus_lookup",
]

SUM_RTOL = 1e-12


class Phase(str, enum.Enum):
    BODY = "body"
    SOLID = "solid"
    VOID = "void"


_LETTER = {"b": Phase.BODY, "s": Phase.SOLID, "v": Phase.VOID}


class Definition(str, enum.Enum):
    """The six admissible numerator/denominator pairs."""

    BS = "bs"
    VS = "vs"
    VB = "vb"
    SB = "sb"
    SV = "sv"
    BV = "bv"

    @property
    def numerator(self) -> Phase:
        return _LETTER[self.value[0]]

    @property
    def denominator(self) -> Phase:
        return _LETTER[self.value[1]]

    @classmethod
    def parse(cls, tag: "str | Definition") -> "Definition":
        if isinstance(tag, Definition):
            return tag
        text = str(tag).strip().lower()
        if text.startswith("u_"):
            text = text[2:]
        try:
            return cls(text)
        except ValueError:
            raise InputValidationError(
                f"unknown definition {tag!r}; expected one of "
                + ", ".join(d.value for d in cls)
            ) from None


class Validity(str, enum.Enum):
    VALUE_AND_SIGN = "value_and_sign"
    VALUE_ONLY = "value_only"
    INVALID = "invalid"


class Configuration(str, enum.Enum):
    OPPOSITE_SOLID = "opposite_solid"
    ORIENTED = "oriented"
    OPPOSITE_VOID = "opposite_void"


class LimitCase(str, enum.Enum):
    VOID_BREATHING = "void_breathing"
    BALANCED_BREATHING = "balanced_breathing"
    SOLID_BREATHING = "solid_breathing"
    INTERNAL_TRANSFER_SOLID_DISAPPEARANCE = "internal_transfer_solid_disappearance"
    INTERNAL_TRANSFER_VOID_DISAPPEARANCE = "internal_transfer_void_disappearance"

    @property
    def abbrev(self) -> str:
        """Short label used in the abacus (InTr covers both transfer cases)."""
        return {
            LimitCase.VOID_BREATHING: "VBr",
            LimitCase.BALANCED_BREATHING: "BalBr",
            LimitCase.SOLID_BREATHING: "SBr",
            LimitCase.INTERNAL_TRANSFER_SOLID_DISAPPEARANCE: "InTr",
            LimitCase.INTERNAL_TRANSFER_VOID_DISAPPEARANCE: "InTr",
        }[self]


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise InputValidationError(f"{name} must be finite, got {v!r}")


def _sum_consistent(total: float, a: float, b: float) -> bool:
    scale = max(abs(total), abs(a), abs(b))
    return abs(total - (a + b)) <= SUM_RTOL * scale


@dataclass(frozen=True)
class VolumePartition:
    """Body, solid and void volumes of one state of a porous body."""

    v_body: float
    v_solid: float
    v_void: float

    def __post_init__(self) -> None:
        _check_finite(v_body=self.v_body, v_solid=self.v_solid, v_void=self.v_void)
        if min(self.v_body, self.v_solid, self.v_void) < 0:
            raise InputValidationError(f"volumes must be non-negative: {self}")
        if not _sum_consistent(self.v_body, self.v_solid, self.v_void):
            raise InputValidationError(f"v_body != v_solid + v_void: {self}")

    @classmethod
    def from_phases(cls, v_solid: float, v_void: float) -> "VolumePartition":
        return cls(v_solid + v_void, v_solid, v_void)

    @property
    def solid_fraction(self) -> float:
        return self.v_solid / self.v_body

    @property
    def porosity(self) -> float:
        return self.v_void / self.v_body


@dataclass(frozen=True)
class VolumeDelta:
    """Signed variation of the three volumes between two states."""

    d_body: float
    d_solid: float
    d_void: float

    def __post_init__(self) -> None:
        _check_finite(d_body=self.d_body, d_solid=self.d_solid, d_void=self.d_void)
        if not _sum_consistent(self.d_body, self.d_solid, self.d_void):
            raise InputValidationError(f"d_body != d_solid + d_void: {self}")

    @classmethod
    def from_phases(cls, d_solid: float, d_void: float) -> "VolumeDelta":
        return cls(d_solid + d_void, d_solid, d_void)

    def component(self, phase: Phase) -> float:
        return {
            Phase.BODY: self.d_body,
            Phase.SOLID: self.d_solid,
            Phase.VOID: self.d_void,
        }[phase]

    @property
    def scale(self) -> float:
        return max(abs(self.d_body), abs(self.d_solid), abs(self.d_void))


@dataclass(frozen=True)
class ValidityConfig:
    """Volume uncertainty ``sigma`` and the factor standing for "much greater".

    A variation is trusted when ``|dV| >= threshold_factor * sigma``.
    """

    sigma: float = 0.0
    threshold_factor: float = 10.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise InputValidationError(f"sigma must be finite and >= 0, got {self.sigma!r}")
        if not (math.isfinite(self.threshold_factor) and self.threshold_factor > 1):
            raise InputValidationError(
                f"threshold_factor must be > 1, got {self.threshold_factor!r}"
            )

    @property
    def threshold(self) -> float:
        return self.threshold_factor * self.sigma


@dataclass(frozen=True)
class CoefficientResult:
    definition: Definition
    value: float
    validity: Validity

    @property
    def usable(self) -> bool:
        return self.validity is not Validity.INVALID


@dataclass(frozen=True)
class BreathingRegime:
    configuration: Configuration
    limit_case: Optional[LimitCase] = None


def delta_partition(before: VolumePartition, after: VolumePartition) -> VolumeDelta:
    """Componentwise ``after - before``."""
    for p in (before, after):
        if not isinstance(p, VolumePartition):
            raise InputValidationError(f"expected VolumePartition, got {type(p).__name__}")
    return VolumeDelta(
        after.v_body - before.v_body,
        after.v_solid - before.v_solid,
        after.v_void - before.v_void,
    )


def validity_gate(d1: float, d2: float, cfg: ValidityConfig) -> Validity:
    """Decide how much of ``d1 / d2`` survives an uncertainty ``cfg.sigma``.

    The sign is trustworthy only when the denominator clears the threshold;
    the magnitude alone survives when at least one of the two does.
    """
    if cfg.sigma == 0:
        return Validity.VALUE_AND_SIGN
    t = cfg.threshold
    if abs(d2) >= t:
        return Validity.VALUE_AND_SIGN
    if abs(d1) >= t:
        return Validity.VALUE_ONLY
    return Validity.INVALID


def _ratio(num: float, den: float) -> float:
    if den == 0:
        if num == 0:
            return math.nan
        return math.copysign(math.inf, num) * math.copysign(1.0, den)
    return num / den


def coefficient(
    delta: VolumeDelta,
    definition: "Definition | str",
    cfg: ValidityConfig = ValidityConfig(),
) -> CoefficientResult:
    definition = Definition.parse(definition)
    num = delta.component(definition.numerator)
    den = delta.component(definition.denominator)
    value = _ratio(num, den)
    if math.isnan(value):
        return CoefficientResult(definition, value, Validity.INVALID)
    return CoefficientResult(definition, value, validity_gate(num, den, cfg))


def coefficients(
    delta: VolumeDelta, cfg: ValidityConfig = ValidityConfig()
) -> Dict[Definition, CoefficientResult]:
    return {d: coefficient(delta, d, cfg) for d in Definition}


# Conversion graph.  Each edge is one of the core identities following from
# d_body = d_solid + d_void; it is a tree, so the path between two
# definitions is unique.


def _recip(x: float) -> float:
    if x == 0:
        return math.copysign(math.inf, x)
    return 1.0 / x


def _plus_one(x: float) -> float:
    return x + 1.0


def _minus_one(x: float) -> float:
    return x - 1.0


def _one_minus(x: float) -> float:
    return 1.0 - x


_EDGES: Dict[Tuple[Definition, Definition], Callable[[float], float]] = {}


def _edge(a: Definition, b: Definition, fwd, back) -> None:
    _EDGES[(a, b)] = fwd
    _EDGES[(b, a)] = back


_edge(Definition.VS, Definition.BS, _plus_one, _minus_one)  # bs = 1 + vs
_edge(Definition.BS, Definition.SB, _recip, _recip)  # sb = 1 / bs
_edge(Definition.SB, Definition.VB, _one_minus, _one_minus)  # sb + vb = 1
_edge(Definition.VS, Definition.SV, _recip, _recip)  # sv = 1 / vs
_edge(Definition.SV, Definition.BV, _plus_one, _minus_one)  # bv = 1 + sv


def _path(src: Definition, dst: Definition) -> list:
    prev = {src: None}
    queue = deque([src])
    while queue:
        node = queue.popleft()
        if node is dst:
            break
        for a, b in _EDGES:
            if a is node and b not in prev:
                prev[b] = a
                queue.append(b)
    steps = []
    node = dst
    while prev[node] is not None:
        steps.append((prev[node], node))
        node = prev[node]
    return steps[::-1]


_PATHS = {(a, b): _path(a, b) for a in Definition for b in Definition}


def convert(value: float, src: "Definition | str", dst: "Definition | str") -> float:
    """Re-express a coefficient given in ``src`` in the ``dst`` definition.

    Passing through a zero denominator yields a signed infinity (the sign
    follows the sign of the zero), and infinities map back to zero.
    """
    src, dst = Definition.parse(src), Definition.parse(dst)
    x = float(value)
    for edge in _PATHS[(src, dst)]:
        x = _EDGES[edge](x)
    return x


def _sgn(x: float, tol: float) -> int:
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1


def classify(delta: VolumeDelta, eps_class: float = 1e-9) -> BreathingRegime:
    """Breathing configuration and limit case of a volume variation.

    Components below ``eps_class`` times the largest component count as zero.
    Boundary cases (solid or void breathing) are reported as ``ORIENTED``;
    internal transfer is reported under the phase that shrinks, i.e.
    ``OPPOSITE_SOLID`` for solid disappearance and ``OPPOSITE_VOID`` for
    void disappearance.
    """
    scale = delta.scale
    if scale == 0:
        raise ClassificationError("all-zero variation: no breathing occurred")
    tol = eps_class * scale
    b = _sgn(delta.d_body, tol)
    s = _sgn(delta.d_solid, tol)
    v = _sgn(delta.d_void, tol)

    limit = None
    if b == 0:
        limit = (
            LimitCase.INTERNAL_TRANSFER_VOID_DISAPPEARANCE
            if delta.d_solid > 0
            else LimitCase.INTERNAL_TRANSFER_SOLID_DISAPPEARANCE
        )
    elif s == 0:
        limit = LimitCase.VOID_BREATHING
    elif v == 0:
        limit = LimitCase.SOLID_BREATHING
    elif abs(delta.d_solid - delta.d_void) <= tol:
        limit = LimitCase.BALANCED_BREATHING

    if b == 0:
        config = Configuration.OPPOSITE_VOID if s > 0 else Configuration.OPPOSITE_SOLID
    elif s == 0 or v == 0 or s == v:
        config = Configuration.ORIENTED
    elif s != b:
        config = Configuration.OPPOSITE_SOLID
    else:
        config = Configuration.OPPOSITE_VOID
    return BreathingRegime(config, limit)


ABACUS_VALUES = (-math.inf, 0.0, 0.5, 1.0, 2.0, math.inf)

# Named limit case for each (definition, special value); None is a blank cell.
_ABACUS_ROWS = {
    Definition.BS: ("VBr", "InTr", None, "SBr", "BalBr", "VBr"),
    Definition.VS: ("VBr", "SBr", None, "BalBr", None, "VBr"),
    Definition.VB: ("InTr", "SBr", "BalBr", "VBr", None, "InTr"),
    Definition.SB: ("InTr", "VBr", "BalBr", "SBr", None, "InTr"),
    Definition.SV: ("SBr", "VBr", None, "BalBr", None, "SBr"),
    Definition.BV: ("SBr", "InTr", None, "VBr", "BalBr", "SBr"),
}

ABACUS: Dict[Tuple[Definition, float], Optional[str]] = {
    (d, x): label
    for d, row in _ABACUS_ROWS.items()
    for x, label in zip(ABACUS_VALUES, row)
}


def abacus_lookup(
    definition: "Definition | str", value: float, rtol: float = 1e-9
) -> Optional[str]:
    """Named limit case whose abacus cell matches ``value``, if any."""
    definition = Definition.parse(definition)
    for x in ABACUS_VALUES:
        if math.isinf(x):
            if value == x:
                return ABACUS[(definition, x)]
        elif abs(value - x) <= rtol * max(1.0, abs(x)):
            return ABACUS[(definition, x)]
    return None

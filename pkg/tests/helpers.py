"""Shared constructors for the test suite."""

import math

from breathkit.partition import Definition, Phase, VolumeDelta


def realize(definition: Definition, value: float) -> VolumeDelta:
    """A variation whose ``definition`` coefficient equals ``value``."""
    definition = Definition.parse(definition)
    if math.isinf(value):
        num, den = math.copysign(1.0, value), 0.0
    else:
        num, den = float(value), 1.0
    parts = {definition.numerator: num, definition.denominator: den}
    if Phase.BODY not in parts:
        parts[Phase.BODY] = parts[Phase.SOLID] + parts[Phase.VOID]
    elif Phase.SOLID not in parts:
        parts[Phase.SOLID] = parts[Phase.BODY] - parts[Phase.VOID]
    else:
        parts[Phase.VOID] = parts[Phase.BODY] - parts[Phase.SOLID]
    return VolumeDelta(parts[Phase.BODY], parts[Phase.SOLID], parts[Phase.VOID])

"""Random network layouts: nodes in a rectangular room, IRS panels on the walls."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import InfeasibleError, InvalidInputError
from ..propagation import AtmosphereConfig, IrsPanel, RadioConfig, Scenario

PLACEMENTS = ("perimeter",)


@dataclass(frozen=True)
class ScenarioSpec:
    k: int = 3
    n: int = 4
    l: int = 3
    area_width: float = 20.0
    area_depth: float = 20.0
    source_height: float = 1.5
    dest_height: float = 1.5
    irs_height: float = 2.5
    elements_per_irs: int = 256
    element_size_wavelengths: float = 0.4
    radio: RadioConfig = field(default_factory=RadioConfig)
    atmosphere: AtmosphereConfig = field(default_factory=AtmosphereConfig)
    placement: str = "perimeter"
    idle_reflect: bool = True
    seed: int = 0

    def __post_init__(self):
        if min(self.k, self.n, self.l) < 1:
            raise InvalidInputError("k, n and l must be positive")
        if self.k != self.l or self.k > self.n:
            raise InfeasibleError(
                f"need k == l <= n for a one-to-one association, got k={self.k}, n={self.n}, l={self.l}"
            )
        if not (self.area_width > 0 and self.area_depth > 0):
            raise InvalidInputError("area dimensions must be positive")
        side = math.isqrt(self.elements_per_irs)
        if self.elements_per_irs < 1 or side * side != self.elements_per_irs:
            raise InvalidInputError("elements_per_irs must be a positive perfect square")
        if not self.element_size_wavelengths > 0:
            raise InvalidInputError("element_size_wavelengths must be positive")
        if self.placement not in PLACEMENTS:
            raise InvalidInputError(f"unknown placement {self.placement!r}; expected one of {PLACEMENTS}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError("seed must be an unsigned 64-bit integer")

    def with_value(self, swept_var: str, value) -> "ScenarioSpec":
        if swept_var == "tx_power":
            return replace(self, radio=replace(self.radio, tx_power_per_source=float(value)))
        if swept_var == "elements_per_irs":
            return replace(self, elements_per_irs=int(value))
        raise InvalidInputError(f"cannot sweep {swept_var!r}")


def _perimeter_point(t, width, depth):
    """Point and inward normal at arc length ``t`` along the room boundary, counter-clockwise from (0, 0)."""
    t = t % (2 * (width + depth))
    if t < width:
        return (t, 0.0), (0.0, 1.0)
    t -= width
    if t < depth:
        return (width, t), (-1.0, 0.0)
    t -= depth
    if t < width:
        return (width - t, depth), (0.0, -1.0)
    t -= width
    return (0.0, depth - t), (1.0, 0.0)


def generate_scenario(spec: ScenarioSpec, seed=None) -> Scenario:
    """Draw sources and destinations uniformly in the room; spread panels evenly along the walls.

    ``seed`` overrides ``spec.seed``.  The node draws do not depend on the
    panel size or radio settings, so sweeping those keeps the geometry fixed.
    """
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    w, d = spec.area_width, spec.area_depth

    def nodes(count, height):
        xy = rng.uniform((0.0, 0.0), (w, d), size=(count, 2))
        return np.column_stack([xy, np.full(count, height)])

    sources = nodes(spec.k, spec.source_height)
    destinations = nodes(spec.l, spec.dest_height)
    side = math.isqrt(spec.elements_per_irs)
    pitch = spec.element_size_wavelengths * spec.radio.wavelength
    perimeter = 2 * (w + d)
    panels = []
    for i in range(spec.n):
        (x, y), (nx, ny) = _perimeter_point((i + 0.5) * perimeter / spec.n, w, d)
        panels.append(IrsPanel.facing(i, (x, y, spec.irs_height), (nx, ny, 0.0), (side, side), pitch))
    return Scenario(sources, destinations, panels, spec.radio, spec.atmosphere, spec.idle_reflect)

"""Geometry, atmosphere and the per-element cascaded THz gain model.

Every IRS element is treated as a small flat scatterer of area ``A``.  Its
cascaded (incident x scattered) gain is

    G(psi_i, psi_s, phi_s) = (4 pi A / lambda^2 * eta)^2,
    eta^2 = cos^2 psi_i * (cos^2 phi_s * cos^2 psi_s + sin^2 phi_s),

and a source -> element -> destination hop has the power loss

    l = G_S G_D (lambda / 4 pi)^4 G e^{-kappa (d1 + d2)} / (d1^2 d2^2).

Angles are measured in the panel's local frame: ``psi`` is the angle from the
panel normal, ``phi`` is the azimuth from the panel's horizontal axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import GeometryError, InvalidInputError

SPEED_OF_LIGHT = 299_792_458.0

# T at which the Magnus-type denominator of the saturation formula vanishes
_SAT_POLE_K = 32.18
_GEOM_TOL = 1e-12


def wavelength(f):
    """Free-space wavelength in meters for a carrier frequency ``f`` in Hz."""
    if not f > 0:
        raise InvalidInputError(f"frequency must be positive, got {f!r}")
    return SPEED_OF_LIGHT / f


def saturation_pressure(temperature, pressure):
    """Saturation water-vapor pressure [hPa] at ``temperature`` [K] and ``pressure`` [hPa]."""
    if not temperature > _SAT_POLE_K:
        raise InvalidInputError(
            f"temperature must exceed {_SAT_POLE_K} K, got {temperature!r}"
        )
    enhancement = 1.0007 + 3.46e-6 * pressure
    return 6.1121 * enhancement * math.exp(
        17.502 * (temperature - 273.15) / (temperature - _SAT_POLE_K)
    )


@dataclass(frozen=True)
class AtmosphereConfig:
    temperature: float = 296.0  # K
    pressure: float = 1013.25  # hPa
    relative_humidity: float = 50.0  # percent

    def __post_init__(self):
        if not self.temperature > _SAT_POLE_K:
            raise InvalidInputError(f"temperature must exceed {_SAT_POLE_K} K")
        if not 0.0 <= self.relative_humidity <= 100.0:
            raise InvalidInputError("relative_humidity must lie in [0, 100]")
        if self.pressure < 0:
            raise InvalidInputError("pressure must be nonnegative")


def mixing_ratio(atm: AtmosphereConfig) -> float:
    """Volume mixing ratio of water vapor for the given atmosphere."""
    if atm.pressure == 0:
        raise InvalidInputError("mixing ratio undefined at zero pressure")
    partial = atm.relative_humidity / 100.0 * saturation_pressure(atm.temperature, atm.pressure)
    return partial / atm.pressure


#: Signature of a frequency-dependent absorption model: (frequency_hz, mixing_ratio) -> 1/m.
AbsorptionModel = Callable[[float, float], float]


def dbm_to_watt(dbm):
    return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)


@dataclass(frozen=True)
class RadioConfig:
    """Radio parameters for one network instance.

    ``absorption_model`` is an optional hook replacing the constant
    ``absorption_coeff``; it receives the carrier frequency and the water-vapor
    mixing ratio of the scenario's atmosphere.
    """

    carrier_frequency: float = 300e9
    bandwidth: float = 10e9
    absorption_coeff: float = 0.0033
    noise_density: float = -174.0  # dBm/Hz
    noise_figure: float = 10.0  # dB
    tx_power_per_source: float = 25.0  # dBm
    source_gain: float = 1.0
    dest_gain: float = 1.0
    absorption_model: Optional[AbsorptionModel] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.carrier_frequency > 0:
            raise InvalidInputError("carrier_frequency must be positive")
        if not self.bandwidth > 0:
            raise InvalidInputError("bandwidth must be positive")
        if self.absorption_coeff < 0:
            raise InvalidInputError("absorption_coeff must be nonnegative")
        if self.source_gain < 0 or self.dest_gain < 0:
            raise InvalidInputError("antenna gains must be nonnegative")

    @property
    def wavelength(self) -> float:
        return wavelength(self.carrier_frequency)

    @property
    def tx_power_watt(self) -> float:
        return float(dbm_to_watt(self.tx_power_per_source))

    def absorption(self, atm: Optional[AtmosphereConfig] = None) -> float:
        if self.absorption_model is None:
            return self.absorption_coeff
        mu = mixing_ratio(atm if atm is not None else AtmosphereConfig())
        kappa = float(self.absorption_model(self.carrier_frequency, mu))
        if kappa < 0 or not math.isfinite(kappa):
            raise InvalidInputError(f"absorption model returned {kappa!r}")
        return kappa


def _as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"expected a finite 3-vector, got {p!r}")
    return arr


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise InvalidInputError("zero-length direction")
    return v / n


@dataclass(frozen=True, eq=False)
class IrsPanel:
    """A planar IRS made of ``rows x cols`` square elements of side ``element_pitch``.

    ``axis_u`` (horizontal) and ``axis_v`` (vertical) span the panel plane and
    ``normal`` points toward the served half-space.  Element ``m`` sits at row
    ``m // cols`` and column ``m % cols``; the grid is centered on ``center``.
    """

    id: int
    center: np.ndarray
    normal: np.ndarray
    axis_u: np.ndarray
    axis_v: np.ndarray
    grid_dims: tuple
    element_pitch: float

    def __post_init__(self):
        for name in ("center", "normal", "axis_u", "axis_v"):
            object.__setattr__(self, name, _as_point(getattr(self, name)))
        triad = np.stack([self.axis_u, self.axis_v, self.normal])
        if not np.allclose(triad @ triad.T, np.eye(3), atol=1e-9, rtol=0):
            raise InvalidInputError("panel axes must form an orthonormal triad")
        rows, cols = (int(x) for x in self.grid_dims)
        if rows < 1 or cols < 1:
            raise InvalidInputError("panel needs at least one element")
        object.__setattr__(self, "grid_dims", (rows, cols))
        if not self.element_pitch > 0:
            raise InvalidInputError("element_pitch must be positive")

    @classmethod
    def facing(cls, id, center, normal, grid_dims, element_pitch):
        """Build a panel whose horizontal axis is perpendicular to both ``normal`` and +z."""
        n = _unit(normal)
        up = np.array([0.0, 0.0, 1.0])
        if abs(n @ up) > 1 - 1e-9:
            up = np.array([0.0, 1.0, 0.0])
        u = _unit(np.cross(up, n))
        v = np.cross(n, u)
        return cls(id, np.asarray(center, float), n, u, v, tuple(grid_dims), element_pitch)

    @property
    def n_elements(self) -> int:
        return self.grid_dims[0] * self.grid_dims[1]

    @property
    def element_area(self) -> float:
        return self.element_pitch ** 2

    def element_positions(self) -> np.ndarray:
        rows, cols = self.grid_dims
        r, c = np.divmod(np.arange(rows * cols), cols)
        du = (c - (cols - 1) / 2.0) * self.element_pitch
        dv = (r - (rows - 1) / 2.0) * self.element_pitch
        return self.center + du[:, None] * self.axis_u + dv[:, None] * self.axis_v

    def element_position(self, index: int) -> np.ndarray:
        if not 0 <= index < self.n_elements:
            raise InvalidInputError(f"element index {index} out of range")
        return self.element_positions()[index]


class ScatterAngles(NamedTuple):
    psi_i: float
    psi_s: float
    phi_s: float


def _local_angles(panel: IrsPanel, origin, points):
    """Elevation from the normal and azimuth from ``axis_u`` of ``points`` seen from ``origin``.

    ``origin`` has shape (..., 3) and broadcasts against ``points``.
    Returns (psi, phi, distance).
    """
    delta = points - origin
    dist = np.linalg.norm(delta, axis=-1)
    if np.any(dist <= 0):
        raise GeometryError("node coincides with an IRS element")
    cn = (delta @ panel.normal) / dist
    if np.any(cn < -_GEOM_TOL):
        raise GeometryError(f"node lies behind IRS panel {panel.id}")
    cu = (delta @ panel.axis_u) / dist
    cv = (delta @ panel.axis_v) / dist
    psi = np.arccos(np.clip(cn, -1.0, 1.0))
    phi = np.arctan2(cv, cu)
    return psi, phi, dist


def element_angles(panel: IrsPanel, element_index: int, src, dst) -> ScatterAngles:
    """Incidence elevation toward ``src`` and scatter elevation/azimuth toward ``dst``."""
    e = panel.element_position(element_index)
    psi_i, _, _ = _local_angles(panel, e, _as_point(src))
    psi_s, phi_s, _ = _local_angles(panel, e, _as_point(dst))
    return ScatterAngles(float(psi_i), float(psi_s), float(phi_s))


def incidence_factor(psi_i):
    return np.cos(psi_i) ** 2


def scatter_factor(psi_s, phi_s):
    return np.cos(phi_s) ** 2 * np.cos(psi_s) ** 2 + np.sin(phi_s) ** 2


def element_gain(angles: ScatterAngles, area, lam):
    """Cascaded incident x scattered gain of a single element."""
    if not area > 0 or not lam > 0:
        raise InvalidInputError("area and wavelength must be positive")
    eta_sq = incidence_factor(angles.psi_i) * scatter_factor(angles.psi_s, angles.phi_s)
    return (4.0 * math.pi * area / lam ** 2) ** 2 * eta_sq


def _spreading(lam, kappa_abs, d1, d2):
    return (lam / (4.0 * math.pi)) ** 4 * np.exp(-kappa_abs * (d1 + d2)) / (d1 ** 2 * d2 ** 2)


def element_pathloss(src, panel: IrsPanel, element_index: int, dst,
                     radio: RadioConfig, atm: Optional[AtmosphereConfig] = None) -> float:
    """Power loss of the source -> element -> destination path (linear, <= 1)."""
    lam = radio.wavelength
    e = panel.element_position(element_index)
    src, dst = _as_point(src), _as_point(dst)
    d1 = float(np.linalg.norm(src - e))
    d2 = float(np.linalg.norm(dst - e))
    if d1 == 0 or d2 == 0:
        raise GeometryError("zero hop distance")
    gain = element_gain(element_angles(panel, element_index, src, dst), panel.element_area, lam)
    return float(radio.source_gain * radio.dest_gain * gain
                 * _spreading(lam, radio.absorption(atm), d1, d2))


def propagation_phase(d1, d2, lam):
    """Phase (2 pi / lambda)(d1 + d2) reduced to [0, 2 pi)."""
    if not np.all(np.asarray(lam) > 0):
        raise InvalidInputError("wavelength must be positive")
    # reduce the path length modulo lambda first; keeps precision for d >> lambda
    frac = np.mod(np.mod(d1, lam) + np.mod(d2, lam), lam) / lam
    phase = 2.0 * np.pi * frac
    return np.where(phase >= 2.0 * np.pi, 0.0, phase)


def panel_cascade(panel: IrsPanel, sources: np.ndarray, destinations: np.ndarray,
                  radio: RadioConfig, kappa_abs: float):
    """Vectorised pathloss and phase for every (source, element, destination).

    Returns two arrays of shape (K, M, L).
    """
    lam = radio.wavelength
    elems = panel.element_positions()  # (M, 3)
    psi_i, _, d1 = _local_angles(panel, elems[None, :, :], sources[:, None, :])  # (K, M)
    psi_s, phi_s, d2 = _local_angles(panel, elems[None, :, :], destinations[:, None, :])  # (L, M)
    inc = (4.0 * math.pi * panel.element_area / lam ** 2) * incidence_factor(psi_i)
    sca = (4.0 * math.pi * panel.element_area / lam ** 2) * scatter_factor(psi_s, phi_s)
    gain = inc[:, :, None] * sca.T[None, :, :]
    dd1 = d1[:, :, None]
    dd2 = d2.T[None, :, :]
    loss = radio.source_gain * radio.dest_gain * gain * _spreading(lam, kappa_abs, dd1, dd2)
    phase = propagation_phase(dd1, dd2, lam)
    return loss, phase


def incident_loss(panel: IrsPanel, sources: np.ndarray, radio: RadioConfig, kappa_abs: float):
    """Single-hop source -> element loss, shape (K, M), excluding the source antenna gain.

    Uses the incidence half of the cascaded element gain, 4 pi A / lambda^2 cos^2 psi_i.
    """
    lam = radio.wavelength
    elems = panel.element_positions()
    psi_i, _, d1 = _local_angles(panel, elems[None, :, :], sources[:, None, :])
    inc = (4.0 * math.pi * panel.element_area / lam ** 2) * incidence_factor(psi_i)
    return inc * (lam / (4.0 * math.pi)) ** 2 * np.exp(-kappa_abs * d1) / d1 ** 2


@dataclass(frozen=True, eq=False)
class Scenario:
    """Node and panel geometry plus radio configuration for one network instance."""

    sources: np.ndarray  # (K, 3)
    destinations: np.ndarray  # (L, 3)
    panels: Sequence[IrsPanel]
    radio: RadioConfig = RadioConfig()
    atmosphere: AtmosphereConfig = AtmosphereConfig()
    idle_reflect: bool = True  # unassigned IRSs still reflect (theta = 0)

    def __post_init__(self):
        src = np.atleast_2d(np.asarray(self.sources, dtype=float))
        dst = np.atleast_2d(np.asarray(self.destinations, dtype=float))
        for name, arr in (("sources", src), ("destinations", dst)):
            if arr.ndim != 2 or arr.shape[1] != 3 or not np.all(np.isfinite(arr)):
                raise InvalidInputError(f"{name} must be a finite (n, 3) array")
        object.__setattr__(self, "sources", src)
        object.__setattr__(self, "destinations", dst)
        object.__setattr__(self, "panels", tuple(self.panels))
        if not self.panels:
            raise InvalidInputError("scenario needs at least one IRS")

    @property
    def K(self) -> int:
        return len(self.sources)

    @property
    def N(self) -> int:
        return len(self.panels)

    @property
    def L(self) -> int:
        return len(self.destinations)

    @property
    def wavelength(self) -> float:
        return self.radio.wavelength

    @property
    def kappa_abs(self) -> float:
        return self.radio.absorption(self.atmosphere)

    @property
    def tx_power(self) -> np.ndarray:
        """Per-source transmit power in watts."""
        return np.full(self.K, self.radio.tx_power_watt)

    def with_radio(self, **changes) -> "Scenario":
        from dataclasses import replace
        return replace(self, radio=replace(self.radio, **changes))

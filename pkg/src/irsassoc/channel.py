"""Cascaded channel coefficients, IRS phase configuration, SINR and sum rate."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .assignment import Association3D, validate
from .errors import ContractError, InvalidInputError
from .propagation import RadioConfig, Scenario, dbm_to_watt, panel_cascade


@dataclass(frozen=True, eq=False)
class ChannelTensor:
    """Per (source, IRS, element, destination) amplitude and propagation phase.

    Amplitudes are the square roots of the element path losses, antenna gains
    included and transmit power excluded.  Panels with fewer elements than
    the largest one are zero-padded; padded entries have zero amplitude.
    """

    amplitude: np.ndarray  # (K, N, M_max, L)
    phase: np.ndarray  # (K, N, M_max, L), radians in [0, 2 pi)
    n_elements: np.ndarray  # (N,)
    tx_power: np.ndarray  # (K,), watts

    def __post_init__(self):
        for name in ("amplitude", "phase", "n_elements", "tx_power"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.amplitude.shape != self.phase.shape or self.amplitude.ndim != 4:
            raise InvalidInputError("amplitude and phase must share a (K, N, M, L) shape")
        if np.any(self.amplitude < 0) or not np.all(np.isfinite(self.amplitude)):
            raise InvalidInputError("amplitudes must be finite and nonnegative")

    @property
    def shape(self):
        K, N, _, L = self.amplitude.shape
        return K, N, L

    def coefficients(self) -> np.ndarray:
        """Complex channel a * exp(-j phase)."""
        return self.amplitude * np.exp(-1j * self.phase)

    def with_power(self, tx_power) -> "ChannelTensor":
        return replace(self, tx_power=np.broadcast_to(np.asarray(tx_power, float), self.tx_power.shape).copy())


def build_channel_tensor(scenario: Scenario) -> ChannelTensor:
    K, N, L = scenario.K, scenario.N, scenario.L
    m_max = max(p.n_elements for p in scenario.panels)
    amp = np.zeros((K, N, m_max, L))
    phase = np.zeros((K, N, m_max, L))
    kappa = scenario.kappa_abs
    for n, panel in enumerate(scenario.panels):
        loss, ph = panel_cascade(panel, scenario.sources, scenario.destinations, scenario.radio, kappa)
        amp[:, n, : panel.n_elements, :] = np.sqrt(loss)
        phase[:, n, : panel.n_elements, :] = ph
    return ChannelTensor(
        amp, phase, np.array([p.n_elements for p in scenario.panels]), scenario.tx_power
    )


def noise_power(radio: RadioConfig) -> float:
    """Thermal noise power in watts over the configured bandwidth."""
    dbm = radio.noise_density + 10.0 * math.log10(radio.bandwidth) + radio.noise_figure
    return float(dbm_to_watt(dbm))


@dataclass(frozen=True, eq=False)
class PhaseConfig:
    theta: np.ndarray  # (N, M_max) reflection phase in [0, 2 pi)
    kappa: np.ndarray  # (N, M_max) reflection amplitude in (0, 1]
    active: Optional[np.ndarray] = None  # (N,) False for an IRS that does not reflect at all

    def __post_init__(self):
        theta = np.asarray(self.theta, float)
        kappa = np.asarray(self.kappa, float)
        if np.any((theta < 0) | (theta >= 2 * np.pi)):
            raise InvalidInputError("theta must lie in [0, 2 pi)")
        if np.any((kappa <= 0) | (kappa > 1)):
            raise InvalidInputError("kappa must lie in (0, 1]")
        active = np.ones(theta.shape[0], bool) if self.active is None else np.asarray(self.active, bool)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "active", active)

    def reflection(self) -> np.ndarray:
        """Complex reflection coefficient per (IRS, element)."""
        return self.kappa * np.exp(1j * self.theta) * self.active[:, None]


def cophase(assignment: Association3D, tensor: ChannelTensor, idle_reflect: bool = True) -> PhaseConfig:
    """Align every element of each assigned IRS with its own (source, destination) path.

    Idle IRSs keep theta = 0 and reflect unless ``idle_reflect`` is False.
    """
    K, N, L = tensor.shape
    _require_valid(assignment, K, N, L)
    theta = np.zeros(tensor.phase.shape[1:3])
    active = np.full(N, idle_reflect)
    for k, n, l in assignment:
        theta[n] = tensor.phase[k, n, :, l]
        active[n] = True
    return PhaseConfig(theta, np.ones_like(theta), active)


def _require_valid(assignment, K, N, L):
    ok, violations = validate(assignment, K, N, L)
    if not ok:
        raise ContractError("invalid association: " + "; ".join(violations))


def sinr(k, n, l, assignment: Association3D, phases: PhaseConfig,
         tensor: ChannelTensor, noise: float) -> float:
    """End-to-end SINR of the triple (k, n, l) by direct complex summation.

    The desired term is source ``k`` through IRS ``n``; the interference term
    coherently sums every other source through every reflecting IRS, each
    with its own configured phases.
    """
    if (k, n, l) not in assignment.triples:
        raise ContractError(f"triple {(k, n, l)} is not part of the association")
    h = tensor.coefficients()[:, :, :, l]  # (K, N, M)
    field = (h * phases.reflection()[None]).sum(axis=2)  # (K, N)
    field *= np.sqrt(tensor.tx_power)[:, None]
    desired = field[k, n]
    others = np.delete(field, k, axis=0).sum()
    return float(abs(desired) ** 2 / (abs(others) ** 2 + noise))


def rate(gamma):
    """Achievable rate log2(1 + gamma) in bits/s/Hz."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise InvalidInputError("SINR must be nonnegative")
    out = np.log1p(g) / math.log(2.0)
    return float(out) if out.ndim == 0 else out


class SumRate(NamedTuple):
    bps_hz: float
    throughput_bps: float


class LinkEvaluator:
    """Fast SINR / sum-rate evaluation for many associations on one scenario.

    Precomputes, for every IRS, the field each source produces at each
    destination under every possible cophasing choice of that IRS, so an
    association's sum rate costs O(K N) lookups.
    """

    def __init__(self, scenario: Scenario, tensor: Optional[ChannelTensor] = None):
        self.scenario = scenario
        self.tensor = tensor if tensor is not None else build_channel_tensor(scenario)
        self.noise = noise_power(scenario.radio)
        self.bandwidth = scenario.radio.bandwidth
        self.idle_reflect = scenario.idle_reflect
        self.K, self.N, self.L = self.tensor.shape
        amp = np.ascontiguousarray(self.tensor.amplitude, dtype=np.float64)
        phase = np.ascontiguousarray(self.tensor.phase, dtype=np.float64)
        self.table, self.idle = kernels.field_table(amp, phase)
        self.sqrt_power = np.sqrt(self.tensor.tx_power)

    def fields(self, served):
        """Complex received field, shape (K, L), given ``served[i] = (k, l)`` or None.

        Entry ``[j, l]`` is source ``j``'s total contribution at destination ``l``.
        """
        total = np.zeros((self.K, self.L), dtype=complex)
        for i, pair in enumerate(served):
            if pair is not None:
                total += self.table[:, i, :, pair[0], pair[1]]
            elif self.idle_reflect:
                total += self.idle[:, i, :]
        return total * self.sqrt_power[:, None]

    def served_map(self, triples):
        served = [None] * self.N
        for k, n, l in triples:
            served[n] = (k, l)
        return served

    def sinrs(self, triples) -> np.ndarray:
        """SINR of each triple (in the given order) with all listed triples active."""
        field = self.fields(self.served_map(triples))
        out = np.empty(len(triples))
        col_sum = field.sum(axis=0)
        for t, (k, n, l) in enumerate(triples):
            desired = self.table[k, n, l, k, l] * self.sqrt_power[k]
            interf = col_sum[l] - field[k, l]
            out[t] = abs(desired) ** 2 / (abs(interf) ** 2 + self.noise)
        return out

    def sum_rate(self, triples) -> float:
        return float(np.sum(rate(self.sinrs(list(triples)))))


def sum_rate(assignment: Association3D, scenario: Scenario,
             evaluator: Optional[LinkEvaluator] = None) -> SumRate:
    """Network sum rate under cophased IRSs, plus the bandwidth-scaled throughput."""
    _require_valid(assignment, scenario.K, scenario.N, scenario.L)
    ev = evaluator if evaluator is not None else LinkEvaluator(scenario)
    value = ev.sum_rate(assignment.triples)
    return SumRate(value, value * scenario.radio.bandwidth)

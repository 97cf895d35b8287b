"""YAML experiment configuration.

Top-level keys mirror :class:`ScenarioSpec` fields; ``radio`` and
``atmosphere`` are nested mappings and ``sweep`` mirrors :class:`SweepSpec`.
Example::

    seed: 7
    k: 3
    n: 4
    l: 3
    elements_per_irs: 256
    radio:
      tx_power_per_source: 25
    sweep:
      swept_var: tx_power
      values: [5, 10, 15, 20, 25]
      trials: 100
      algorithms: [proposed, es, pes, gs, ra, pra]
"""
from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Optional

import yaml

from ..errors import InvalidInputError
from ..propagation import AtmosphereConfig, RadioConfig
from .scenario import ScenarioSpec
from .runner import SweepSpec

_INT_FIELDS = {"k", "n", "l", "elements_per_irs", "seed", "trials", "es_cap"}
_BOOL_FIELDS = {"idle_reflect"}
_STR_FIELDS = {"placement", "swept_var"}


def _coerce(name, value):
    try:
        if name in _INT_FIELDS:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if name in _BOOL_FIELDS:
            if not isinstance(value, bool):
                raise ValueError
            return value
        if name in _STR_FIELDS:
            return str(value)
        return float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"bad value for {name!r}: {value!r}") from None


def _build(cls, data: dict, where: str, skip=()):
    names = {f.name for f in dataclasses.fields(cls)} - set(skip)
    unknown = sorted(set(data) - names)
    if unknown:
        raise InvalidInputError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return {k: _coerce(k, v) for k, v in data.items()}


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioSpec
    sweep: Optional[SweepSpec]
    raw: dict


def parse_config(data: Optional[dict]) -> ExperimentConfig:
    data = dict(data or {})
    if not isinstance(data, dict):
        raise InvalidInputError("config must be a mapping")
    radio = data.pop("radio", None) or {}
    atm = data.pop("atmosphere", None) or {}
    sweep = data.pop("sweep", None)
    try:
        radio_cfg = RadioConfig(**_build(RadioConfig, radio, "radio", skip=("absorption_model",)))
        atm_cfg = AtmosphereConfig(**_build(AtmosphereConfig, atm, "atmosphere"))
        kwargs = _build(ScenarioSpec, data, "top level", skip=("radio", "atmosphere"))
        spec = ScenarioSpec(radio=radio_cfg, atmosphere=atm_cfg, **kwargs)
        sweep_spec = None
        if sweep is not None:
            sweep = dict(sweep)
            values = sweep.pop("values", None)
            algos = sweep.pop("algorithms", None)
            skw = _build(SweepSpec, sweep, "sweep", skip=("values", "algorithms"))
            if values is not None:
                skw["values"] = tuple(values)
            if algos is not None:
                skw["algorithms"] = algos
            sweep_spec = SweepSpec(**skw)
    except TypeError as exc:
        raise InvalidInputError(str(exc)) from None
    return ExperimentConfig(spec, sweep_spec, data)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read config {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InvalidInputError(f"{path} is not valid YAML: {exc}") from None
    if data is not None and not isinstance(data, dict):
        raise InvalidInputError(f"{path}: top level must be a mapping")
    return parse_config(data)

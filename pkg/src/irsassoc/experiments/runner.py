"""Seeded trials and parameter sweeps over all association schemes."""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import baselines
from ..association import associate
from ..channel import LinkEvaluator
from ..errors import IrsAssocError, InvalidInputError
from .scenario import ScenarioSpec, generate_scenario

ALGORITHMS = ("proposed", "es", "pes", "gs", "ra", "pra")
SWEEPABLE = ("tx_power", "elements_per_irs")


@dataclass(frozen=True)
class SweepSpec:
    swept_var: str = "tx_power"
    values: tuple = (5.0, 10.0, 15.0, 20.0, 25.0)
    trials: int = 100
    algorithms: tuple = ALGORITHMS
    es_cap: int = baselines.DEFAULT_CAP

    def __post_init__(self):
        if self.swept_var not in SWEEPABLE:
            raise InvalidInputError(f"swept_var must be one of {SWEEPABLE}")
        if not self.values:
            raise InvalidInputError("sweep needs at least one value")
        if self.trials < 1:
            raise InvalidInputError("trials must be >= 1")
        cast = int if self.swept_var == "elements_per_irs" else float
        object.__setattr__(self, "values", tuple(cast(v) for v in self.values))
        object.__setattr__(self, "algorithms", parse_algorithms(self.algorithms))


def parse_algorithms(algos) -> tuple:
    if isinstance(algos, str):
        algos = [a.strip() for a in algos.split(",") if a.strip()]
    algos = [a.lower() for a in algos]
    unknown = sorted(set(algos) - set(ALGORITHMS))
    if unknown or not algos:
        raise InvalidInputError(f"unknown algorithms {unknown}; choose from {ALGORITHMS}")
    return tuple(a for a in ALGORITHMS if a in algos)


@dataclass
class AlgoOutcome:
    sum_rate: float = math.nan
    throughput: float = math.nan
    proposals: int = 0
    candidates: int = 0
    wall_ms: float = 0.0
    association: Optional[tuple] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class TrialResult:
    seed: int
    swept_var: str
    swept_value: object
    outcomes: dict = field(default_factory=dict)

    def rate(self, algo) -> float:
        return self.outcomes[algo].sum_rate


def trial_seed(master: int, index: int) -> int:
    """64-bit per-trial seed derived from the master seed by counter."""
    words = np.random.SeedSequence([master, index]).generate_state(2, dtype=np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


def _algo_rng(seed: int, algo: str) -> np.random.Generator:
    return np.random.default_rng([seed, ALGORITHMS.index(algo)])


def _run_one(algo, scenario, ev, seed, es_cap):
    if algo == "proposed":
        res = associate(scenario, ev)
        return res.association, ev.sum_rate(res.association.triples), res.proposals, 0
    if algo == "es":
        r = baselines.exhaustive_search(scenario, ev, cap=es_cap)
    elif algo == "pes":
        r = baselines.partial_exhaustive(scenario, ev, cap=es_cap)
    elif algo == "gs":
        r = baselines.greedy(scenario, _algo_rng(seed, algo), ev)
    elif algo == "ra":
        r = baselines.random_assignment(scenario, _algo_rng(seed, algo), ev)
    else:
        r = baselines.partial_random(scenario, _algo_rng(seed, algo), ev)
    return r.association, r.sum_rate, r.proposals, r.candidates


def run_trial(scenario, algorithms: Sequence[str] = ALGORITHMS, seed: int = 0,
              swept_var: str = "none", swept_value="", es_cap: int = baselines.DEFAULT_CAP) -> TrialResult:
    """Run every requested scheme on one scenario and one shared channel tensor.

    A scheme that raises is recorded with its error message; the others still run.
    """
    ev = LinkEvaluator(scenario)
    result = TrialResult(seed, swept_var, swept_value)
    for algo in parse_algorithms(algorithms):
        t0 = time.perf_counter()
        try:
            assoc, value, proposals, candidates = _run_one(algo, scenario, ev, seed, es_cap)
        except IrsAssocError as exc:
            result.outcomes[algo] = AlgoOutcome(error=f"{type(exc).__name__}: {exc}",
                                                wall_ms=(time.perf_counter() - t0) * 1e3)
            continue
        result.outcomes[algo] = AlgoOutcome(
            sum_rate=value,
            throughput=value * scenario.radio.bandwidth,
            proposals=proposals,
            candidates=candidates,
            wall_ms=(time.perf_counter() - t0) * 1e3,
            association=assoc.triples,
        )
    return result


def _sweep_job(args):
    spec, swept_var, value, seed, algorithms, es_cap = args
    scenario = generate_scenario(spec.with_value(swept_var, value), seed)
    return run_trial(scenario, algorithms, seed, swept_var, value, es_cap)


def sweep(sweep_spec: SweepSpec, scenario_spec: ScenarioSpec, workers: int = 1) -> list:
    """Trials for every swept value; trial ``t`` reuses the same seed (and geometry) at every value.

    Results come back in (value, trial) order whatever the worker count.
    """
    jobs = [
        (scenario_spec, sweep_spec.swept_var, v, trial_seed(scenario_spec.seed, t),
         sweep_spec.algorithms, sweep_spec.es_cap)
        for v in sweep_spec.values
        for t in range(sweep_spec.trials)
    ]
    if workers <= 1:
        return [_sweep_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


@dataclass(frozen=True)
class PointSummary:
    swept_value: object
    algorithm: str
    mean: float
    stderr: float
    n_ok: int
    n_failed: int


def aggregate(results: Sequence[TrialResult]) -> list:
    """Mean and standard error of the sum rate per (swept value, algorithm); failures are counted and skipped."""
    groups: dict = {}
    for r in results:
        for algo, out in r.outcomes.items():
            groups.setdefault((r.swept_value, algo), []).append(out)
    values = list(dict.fromkeys(r.swept_value for r in results))
    summary = []
    for v in values:
        for algo in ALGORITHMS:
            outs = groups.get((v, algo))
            if outs is None:
                continue
            rates = np.array([o.sum_rate for o in outs if o.ok])
            n = len(rates)
            mean = float(rates.mean()) if n else math.nan
            se = float(rates.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0 if n else math.nan
            summary.append(PointSummary(v, algo, mean, se, n, len(outs) - n))
    return summary

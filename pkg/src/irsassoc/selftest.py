"""Quick built-in oracle checks, runnable without the test suite (``irsassoc selftest``)."""
from __future__ import annotations

import math
from itertools import permutations

import numpy as np

from . import _kernels_py, kernels
from .assignment import Association3D
from .channel import LinkEvaluator, build_channel_tensor, cophase, noise_power
from .experiments import ScenarioSpec, generate_scenario, run_trial
from .matching import is_stable, match_scores, proposal_bound_check
from .propagation import RadioConfig, ScatterAngles, element_gain, saturation_pressure


def _golden():
    lam = 1e-3
    g = element_gain(ScatterAngles(0.0, 0.0, 0.0), (0.4 * lam) ** 2, lam)
    assert abs(g - (0.64 * math.pi) ** 2) <= 1e-9, g
    # closed form with T = 296 K, p = 1013.25 hPa
    ref = 6.1121 * (1.0007 + 3.46e-6 * 1013.25) * math.exp(17.502 * 22.85 / 263.82)
    assert abs(saturation_pressure(296.0, 1013.25) / ref - 1) < 5e-3
    n0 = noise_power(RadioConfig(noise_density=-174, bandwidth=10e9, noise_figure=10))
    assert abs(n0 / 3.981e-10 - 1) < 1e-3, n0


def _stability():
    rng = np.random.default_rng(1)
    for _ in range(300):
        P, R = rng.integers(1, 7), rng.integers(1, 9)
        sp, sr = rng.random((P, R)), rng.random((R, P))
        m = match_scores(sp, sr)
        assert is_stable(m, sp, sr)[0]
        assert proposal_bound_check(m, P, R)


def _cophase_optimal():
    spec = ScenarioSpec(k=1, n=1, l=1, elements_per_irs=16, seed=3)
    sc = generate_scenario(spec)
    t = build_channel_tensor(sc)
    a = Association3D([(0, 0, 0)])
    h = t.coefficients()[0, 0, :, 0]
    best = abs(np.sum(h * np.exp(1j * cophase(a, t).theta[0]))) ** 2
    rng = np.random.default_rng(0)
    for _ in range(200):
        assert abs(np.sum(h * np.exp(1j * rng.uniform(0, 2 * np.pi, h.shape)))) ** 2 <= best


def _es_dominance():
    for seed in range(5):
        sc = generate_scenario(ScenarioSpec(k=2, n=3, l=2, elements_per_irs=16, seed=seed))
        r = run_trial(sc, seed=seed)
        es = r.rate("es")
        assert all(o.sum_rate <= es for o in r.outcomes.values())


def _kernels_agree():
    rng = np.random.default_rng(5)
    amp, ph = rng.random((2, 3, 9, 2)), rng.uniform(0, 2 * np.pi, (2, 3, 9, 2))
    a, a0 = kernels.field_table(amp, ph)
    b, b0 = _kernels_py.field_table(amp, ph)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14) and np.allclose(a0, b0)
    prio = np.array([list(p) for p in permutations(range(3))][:3], dtype=np.int64)
    ranks = np.argsort(prio, axis=1)
    assert np.array_equal(kernels.deferred_acceptance(prio, ranks)[0],
                          _kernels_py.deferred_acceptance(prio, ranks)[0])


CHECKS = [
    ("golden channel values", _golden),
    ("deferred acceptance stability + proposal bound", _stability),
    ("cophasing beats random phases", _cophase_optimal),
    ("exhaustive search dominates", _es_dominance),
    (f"kernel backend '{kernels.BACKEND}' agrees with fallback", _kernels_agree),
]


def run_selftest(stream=None) -> bool:
    ok = True
    for name, check in CHECKS:
        try:
            check()
            print(f"PASS  {name}", file=stream)
        except AssertionError as exc:
            ok = False
            print(f"FAIL  {name}: {exc}", file=stream)
    return ok

"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Timings are the best of
several repeats; both backends are checked to agree before timing.
"""
import argparse
import timeit

import numpy as np

from irsassoc import _kernels_py, kernels
from irsassoc.channel import build_channel_tensor
from irsassoc.experiments import ScenarioSpec, generate_scenario
from irsassoc.matching import build_priorities, priority_ranks


def _best(fn, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_field_table(m, repeat):
    t = build_channel_tensor(generate_scenario(ScenarioSpec(elements_per_irs=m, seed=0)))
    amp, phase = np.ascontiguousarray(t.amplitude), np.ascontiguousarray(t.phase)
    a, b = kernels.field_table(amp, phase), _kernels_py.field_table(amp, phase)
    assert np.allclose(np.asarray(a[0]), b[0], rtol=1e-9, atol=1e-9 * np.abs(b[0]).max())
    return (_best(lambda: kernels.field_table(amp, phase), repeat),
            _best(lambda: _kernels_py.field_table(amp, phase), repeat))


def bench_matching(size, repeat):
    rng = np.random.default_rng(0)
    prio_p = build_priorities(rng.random((size, size)))
    ranks = priority_ranks(build_priorities(rng.random((size, size))))
    a, b = kernels.deferred_acceptance(prio_p, ranks), _kernels_py.deferred_acceptance(prio_p, ranks)
    assert np.array_equal(np.asarray(a[0]), b[0]) and a[1] == b[1]
    return (_best(lambda: kernels.deferred_acceptance(prio_p, ranks), repeat),
            _best(lambda: _kernels_py.deferred_acceptance(prio_p, ranks), repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'kernel':<28}{'selected [ms]':>15}{'python [ms]':>14}{'speedup':>10}")
    rows = [(f"field_table K=L=3 N=4 M={m}", bench_field_table(m, args.repeat)) for m in (64, 256, 1024)]
    rows += [(f"deferred_acceptance {n}x{n}", bench_matching(n, args.repeat)) for n in (8, 64, 512)]
    for name, (fast, slow) in rows:
        print(f"{name:<28}{fast * 1e3:>15.4f}{slow * 1e3:>14.4f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()

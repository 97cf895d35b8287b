"""Command-line interface.

Exit codes: 0 success, 1 selftest failure, 2 invalid configuration,
3 infeasible instance, 4 exhaustive-search cap exceeded.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .baselines import es_candidate_count
from .errors import CapExceededError, InfeasibleError, InvalidInputError
from .experiments import (
    SweepSpec,
    aggregate,
    emit_csv,
    emit_plot,
    generate_scenario,
    load_config,
    parse_algorithms,
    parse_config,
    run_trial,
    sweep,
)

EXIT_OK, EXIT_SELFTEST, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_CAP = 0, 1, 2, 3, 4

_SWEEP_DEFAULTS = {
    "sweep-power": ("tx_power", (5.0, 10.0, 15.0, 20.0, 25.0)),
    "sweep-elements": ("elements_per_irs", (16, 64, 256, 1024)),
}


def _common(p):
    p.add_argument("--config", type=Path, help="YAML experiment configuration")
    p.add_argument("--seed", type=int, help="master seed (overrides config key 'seed')")
    p.add_argument("--algos", help="comma-separated subset of proposed,es,pes,gs,ra,pra")
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    p.add_argument("--format", choices=("csv", "csv+plot"), default="csv")
    p.add_argument("--timing", action="store_true", help="record wall_ms in the CSV (breaks byte-reproducibility)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irsassoc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run every requested scheme on one seeded scenario")
    _common(p)

    for name, (var, _) in _SWEEP_DEFAULTS.items():
        p = sub.add_parser(name, help=f"Monte-Carlo sweep over {var}")
        _common(p)
        p.add_argument("--values", help="comma-separated swept values")
        p.add_argument("--trials", type=int, help="trials per swept value")
        p.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p = sub.add_parser("validate-config", help="parse and check a configuration file")
    p.add_argument("config_path", type=Path, nargs="?")
    p.add_argument("--config", type=Path)

    sub.add_parser("selftest", help="run the built-in oracle checks")
    return parser


def _load(args):
    cfg = load_config(args.config) if getattr(args, "config", None) else parse_config({})
    spec = cfg.scenario
    if getattr(args, "seed", None) is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    return cfg, spec


def _check_cap(spec, algorithms, cap):
    if "es" in algorithms:
        count = es_candidate_count(spec.k, spec.n, spec.l)
        if count > cap:
            raise CapExceededError(count, cap)


def _emit(results, args, stem):
    csv_path = emit_csv(results, args.out / f"{stem}.csv", timing=args.timing)
    print(f"wrote {csv_path}")
    if args.format == "csv+plot":
        plot_path = args.out / f"{stem}.svg"
        emit_plot(results, plot_path)
        print(f"wrote {plot_path}")


def cmd_run(args):
    cfg, spec = _load(args)
    algos = parse_algorithms(args.algos) if args.algos else (
        cfg.sweep.algorithms if cfg.sweep else parse_algorithms("proposed,es,pes,gs,ra,pra"))
    cap = cfg.sweep.es_cap if cfg.sweep else SweepSpec().es_cap
    _check_cap(spec, algos, cap)
    result = run_trial(generate_scenario(spec), algos, spec.seed, es_cap=cap)
    for algo, out in result.outcomes.items():
        status = f"{out.sum_rate:.6e} bit/s/Hz" if out.ok else out.error
        print(f"{algo:>8}: {status}  {out.association or ''}")
    _emit([result], args, "trial")
    return EXIT_OK


def cmd_sweep(args):
    cfg, spec = _load(args)
    var, default_values = _SWEEP_DEFAULTS[args.command]
    base = cfg.sweep if cfg.sweep is not None else SweepSpec(swept_var=var, values=default_values)
    values = tuple(float(v) for v in args.values.split(",")) if args.values else (
        base.values if base.swept_var == var else default_values)
    sweep_spec = SweepSpec(
        swept_var=var,
        values=values,
        trials=args.trials if args.trials is not None else base.trials,
        algorithms=parse_algorithms(args.algos) if args.algos else base.algorithms,
        es_cap=base.es_cap,
    )
    _check_cap(spec, sweep_spec.algorithms, sweep_spec.es_cap)
    results = sweep(sweep_spec, spec, workers=args.workers)
    for s in aggregate(results):
        print(f"{var}={s.swept_value!s:>8} {s.algorithm:>8}: mean {s.mean:.6e} +/- {s.stderr:.2e}"
              + (f" ({s.n_failed} failed)" if s.n_failed else ""))
    _emit(results, args, args.command.replace("-", "_"))
    return EXIT_OK


def cmd_validate(args):
    path = args.config_path or args.config
    if path is None:
        raise InvalidInputError("validate-config needs a config path")
    cfg = load_config(path)
    print(f"{path}: ok")
    print(f"  scenario: K={cfg.scenario.k} N={cfg.scenario.n} L={cfg.scenario.l} "
          f"M={cfg.scenario.elements_per_irs} seed={cfg.scenario.seed}")
    if cfg.sweep is not None:
        print(f"  sweep: {cfg.sweep.swept_var} over {list(cfg.sweep.values)}, "
              f"{cfg.sweep.trials} trials, algorithms {','.join(cfg.sweep.algorithms)}")
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run_selftest

    return EXIT_OK if run_selftest() else EXIT_SELFTEST


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {
        "run": cmd_run,
        "sweep-power": cmd_sweep,
        "sweep-elements": cmd_sweep,
        "validate-config": cmd_validate,
        "selftest": cmd_selftest,
    }[args.command]
    try:
        return handler(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InfeasibleError as exc:
        print(f"error: infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InvalidInputError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

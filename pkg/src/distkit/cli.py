"""Command-line interface: simulate, test, sweep, gramian, sigma.

All commands are deterministic for a fixed config and seed; reruns produce
byte-identical files. Verdicts are reported in the output, never in the
exit code, so pipelines can tell "ran fine, not distinguishable" from
"failed".
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig
from .gramian import empirical_gramian
from .io import TrajectoryFormatError, load_sample_set_csv, save_sample_set_csv
from .kernels import DegenerateDataError, KernelConfig, sigma_meta_heuristic
from .mmd import two_sample_test
from .simulate import derive_seeds, sample_output_set, simulate_deterministic
from .sweep import grid_sweep, indistinguishability_class, save_class_points, save_sweep_result


def _resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get("DISTKIT_THREADS", "0")
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"DISTKIT_THREADS must be an integer, got {env!r}") from None
    if value < 0:
        raise ConfigError(f"thread count must be nonnegative, got {value}")
    return value if value > 0 else (os.cpu_count() or 1)


def _load_config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("this command requires --config PATH")
    return ExperimentConfig.from_file(args.config)


def _out_dir(args, config: ExperimentConfig | None = None) -> Path:
    out = args.out or (config.output_dir if config else ".")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _format_float(x: float) -> str:
    return format(x, ".17g")


def cmd_simulate(args) -> int:
    config = _load_config(args)
    model = config.build_model()
    sim = config.sim_config(args.seed)
    out = _out_dir(args, config)
    for index, (state, label) in enumerate(config.states_with_labels):
        # each set gets its own derived seed so sets are independent
        set_seed = derive_seeds(sim.seed, index, 1)[0]
        sample = sample_output_set(model, np.asarray(state), config.m, replace(sim, seed=set_seed), label=label)
        path = out / f"{label}.csv"
        save_sample_set_csv(path, sample)
        print(f"wrote {sample.size} trajectories x {sample.n_steps + 1} steps to {path}")
    return 0


def cmd_test(args) -> int:
    config = _load_config(args)
    set_a = load_sample_set_csv(args.set_a, label=Path(args.set_a).stem)
    set_b = load_sample_set_csv(args.set_b, label=Path(args.set_b).stem)
    if set_a.size != set_b.size:
        raise ConfigError(f"the test requires m = n, got {set_a.size} trajectories in A and {set_b.size} in B")
    kcfg = config.kernel_config()
    if kcfg is None:
        sigma = sigma_meta_heuristic([(set_a, set_b)])
        kcfg = KernelConfig(sigma, bound=config.data["kernel"]["bound"])
    tcfg = config.test_config(args.seed)
    result = two_sample_test(set_a, set_b, kcfg, tcfg)
    verdict = "distinguishable" if result.trigger else "not distinguishable"
    print(f"mmd_hat = {result.mmd_hat:.6g}")
    print(f"kappa   = {result.kappa:.6g}  ({result.method}, alpha = {result.alpha})")
    print(f"ratio   = {result.ratio:.6g}")
    print(f"trigger = {str(result.trigger).lower()}  ->  {verdict} at confidence {1 - result.alpha:g}")
    if args.out:
        payload = {
            "mmd_hat": result.mmd_hat,
            "mmd_sq_hat": result.mmd_sq_hat,
            "kappa": result.kappa,
            "ratio": result.ratio,
            "trigger": result.trigger,
            "m": result.m,
            "n": result.n,
            "alpha": result.alpha,
            "method": result.method,
            "sigma": kcfg.sigma,
            "degenerate": result.degenerate,
        }
        path = _out_dir(args) / "test_result.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    config = _load_config(args)
    model = config.build_model()
    sim = config.sim_config(args.seed)
    threads = _resolve_threads(args.threads)
    result = grid_sweep(
        model,
        np.asarray(config.x_a),
        config.grid_spec(),
        config.m,
        sim,
        config.test_config(args.seed),
        kcfg=config.kernel_config(),
        sigma_subsample=config.sigma_subsample,
        threads=threads,
    )
    out = _out_dir(args, config)
    prefix = config.output_prefix
    header_path = out / f"{prefix}_header.json"
    table_path = out / f"{prefix}_table.csv"
    class_path = out / f"{prefix}_class.json"
    nominal_path = out / f"{prefix}_nominal.csv"
    save_sweep_result(result, header_path, table_path)
    save_class_points(indistinguishability_class(result), class_path)
    states, _ = simulate_deterministic(model.nominal(), np.asarray(config.x_a), sim)
    with open(nominal_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(["t"] + [f"x{k + 1}" for k in range(model.n_x)]) + "\n")
        for step, row in enumerate(states):
            fh.write(",".join([_format_float(step * sim.dt)] + [_format_float(v) for v in row]) + "\n")
    n_trigger = sum(1 for c in result.cells if c.status == "ok" and c.trigger)
    n_error = sum(1 for c in result.cells if c.status != "ok")
    print(f"sigma = {result.sigma:.6g}")
    print(f"{len(result.cells)} cells: {n_trigger} trigger, "
          f"{len(result.cells) - n_trigger - n_error} silent, {n_error} errors")
    for path in (header_path, table_path, class_path, nominal_path):
        print(f"wrote {path}")
    return 0


def cmd_gramian(args) -> int:
    config = _load_config(args)
    model = config.build_model()
    result = empirical_gramian(model, np.asarray(config.x_a), config.gramian_epsilon, config.sim_config(args.seed))
    payload = {
        "gramian": result.gramian.tolist(),
        "eigenvalues": result.eigenvalues.tolist(),
        "null_direction": result.null_direction.tolist(),
        "epsilon": result.epsilon,
        "degenerate": result.degenerate,
        "x0": list(config.x_a),
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.out:
        path = _out_dir(args) / "gramian.json"
        path.write_text(text + "\n", encoding="utf-8")
        print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_sigma(args) -> int:
    if args.paths:
        if len(args.paths) % 2 != 0:
            raise ConfigError(f"sigma expects an even number of CSV paths (pairs), got {len(args.paths)}")
        pairs = []
        for first, second in zip(args.paths[::2], args.paths[1::2]):
            pairs.append((load_sample_set_csv(first), load_sample_set_csv(second)))
        sigma = sigma_meta_heuristic(pairs)
    else:
        config = _load_config(args)
        model = config.build_model()
        sim = config.sim_config(args.seed)
        # reuse the sweep's bandwidth pass: reference vs every (subsampled) cell
        result = grid_sweep(
            model,
            np.asarray(config.x_a),
            config.grid_spec(),
            config.m,
            sim,
            config.test_config(args.seed),
            kcfg=None,
            sigma_subsample=config.sigma_subsample,
            threads=_resolve_threads(args.threads),
        )
        sigma = result.sigma
    print(_format_float(sigma))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distkit",
        description="Distinguishability analysis of stochastic systems from output-trajectory data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, threads=False):
        p.add_argument("--config", help="experiment config (JSON)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--out", default=None, help="output directory")
        if threads:
            p.add_argument("--threads", type=int, default=None,
                           help="worker threads (0 = auto; default from DISTKIT_THREADS)")

    p_sim = sub.add_parser("simulate", help="simulate sample sets and write trajectory CSVs")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_test = sub.add_parser("test", help="two-sample distinguishability test between two CSVs")
    p_test.add_argument("set_a", help="trajectory CSV of the first sample set")
    p_test.add_argument("set_b", help="trajectory CSV of the second sample set")
    add_common(p_test)
    p_test.set_defaults(func=cmd_test)

    p_sweep = sub.add_parser("sweep", help="grid sweep of the test over initial states")
    add_common(p_sweep, threads=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_gram = sub.add_parser("gramian", help="empirical observability Gramian of the nominal system")
    add_common(p_gram)
    p_gram.set_defaults(func=cmd_gramian)

    p_sigma = sub.add_parser("sigma", help="kernel bandwidth from data files or a sweep config")
    p_sigma.add_argument("paths", nargs="*", help="trajectory CSVs, consumed in pairs")
    add_common(p_sigma, threads=True)
    p_sigma.set_defaults(func=cmd_sigma)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, TrajectoryFormatError, DegenerateDataError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

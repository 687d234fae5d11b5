"""Command-line interface: run tubes, validate them, benchmark.

Exit codes: 0 success; 2 the engine aborted (a partial tube is still written,
with a truncation marker); 3 validation found a containment violation (the
report is still written).  REACH_LOG selects the log level (error/info/debug).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

import numpy as np

from .engine import ReachError, rkmk_reach
from .experiment import build_case, load_config
from .kernels import active_backend, set_backend
from .tubeio import read_tube, write_report, write_tube
from .validation import mc_validate

log = logging.getLogger("liereach")


def _setup_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("REACH_LOG", "error").lower(), logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.recenter is not None:
        cfg["recenter"] = args.recenter
    case = build_case(cfg)
    t0 = time.perf_counter()
    try:
        tube = rkmk_reach(case.system, case.config, case.init)
    except ReachError as err:
        write_tube(args.out, err.partial)
        log.error("run aborted at step %s: %s", err.step, err)
        print(f"aborted: {type(err).__name__} at step {err.step}; "
              f"partial tube written to {args.out}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - t0
    write_tube(args.out, tube)
    log.info("run %s: %d steps in %.3f s -> %s", case.name, case.config.n_steps,
             elapsed, args.out)
    return 0


def cmd_validate(args) -> int:
    tube = read_tube(args.tube)
    case = build_case(load_config(args.config))
    report = mc_validate(case.system, tube, seed=args.seed, n_uniform=args.samples,
                         meshgrid_k=args.meshgrid, n_checkpoints=args.checkpoints,
                         slack=args.slack, substeps=args.substeps)
    write_report(args.out, report)
    log.info("validate %s: %d samples, min fraction %s", case.name, report.n_samples,
             min(report.fractions) if report.fractions else "n/a")
    if not report.passed:
        fv = report.first_violation
        print(f"containment violation: first at t={fv['t']} (step {fv['step']}, "
              f"sample {fv['sample']}, margin {fv['margin']:.3g}); "
              f"report written to {args.out}", file=sys.stderr)
        return 3
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    case = build_case(cfg)

    def timed_run():
        t0 = time.perf_counter()
        try:
            tube = rkmk_reach(case.system, case.config, case.init)
        except ReachError as err:
            return time.perf_counter() - t0, err.partial
        return time.perf_counter() - t0, tube

    times = []
    for _ in range(args.repeats):
        elapsed, tube = timed_run()
        times.append(elapsed)
    times = np.asarray(times)
    note = f" (aborted: {tube.failure} at step {tube.failed_step})" if tube.truncated else ""
    print(f"reach {case.name}: {times.mean():.4f} +/- {times.std():.4f} s "
          f"(min {times.min():.4f}, {args.repeats} repeats){note}")

    if args.validate_samples > 0:
        for backend in ("numba", "numpy"):
            try:
                set_backend(backend)
            except RuntimeError:
                print(f"validate [{backend}]: unavailable")
                continue
            # warm-up outside the timed repeats (JIT compilation)
            mc_validate(case.system, tube, seed=0, n_uniform=min(args.validate_samples, 4))
            vt = []
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                mc_validate(case.system, tube, seed=0, n_uniform=args.validate_samples)
                vt.append(time.perf_counter() - t0)
            vt = np.asarray(vt)
            print(f"validate [{backend}] {args.validate_samples} samples: "
                  f"{vt.mean():.4f} +/- {vt.std():.4f} s (min {vt.min():.4f})")
        set_backend("auto")
    return 0


def main(argv=None) -> int:
    _setup_logging()
    parser = argparse.ArgumentParser(
        prog="reach",
        description="Interval reachability on matrix Lie groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a reach tube to a JSONL file")
    p_run.add_argument("--config", required=True,
                       help="config file path or bundled name (torus, so3)")
    p_run.add_argument("--out", required=True, help="tube output path (JSON Lines)")
    p_run.add_argument("--recenter", default=None,
                       help="override the recentering policy (always, never, width:X)")
    p_run.set_defaults(fn=cmd_run)

    p_val = sub.add_parser("validate", help="Monte-Carlo check of a tube file")
    p_val.add_argument("--tube", required=True, help="tube file to check")
    p_val.add_argument("--config", required=True, help="config the tube was run from")
    p_val.add_argument("--samples", type=int, required=True,
                       help="number of uniformly sampled initial states")
    p_val.add_argument("--seed", type=int, required=True)
    p_val.add_argument("--out", required=True, help="report output path (JSON)")
    p_val.add_argument("--meshgrid", type=int, default=0,
                       help="additional k-per-axis grid of initial states")
    p_val.add_argument("--slack", type=float, default=1e-6)
    p_val.add_argument("--checkpoints", type=int, default=10)
    p_val.add_argument("--substeps", type=int, default=10,
                       help="reference substeps per tube step")
    p_val.set_defaults(fn=cmd_validate)

    p_bench = sub.add_parser("bench", help="time tube runs (and optionally validation)")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--repeats", type=int, required=True)
    p_bench.add_argument("--validate-samples", type=int, default=0,
                         help="also time mc validation with this many samples per backend")
    p_bench.set_defaults(fn=cmd_bench)

    args = parser.parse_args(argv)
    log.debug("backend: %s", active_backend())
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

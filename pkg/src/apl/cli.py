"""Command-line interface.

Subcommands map onto the library surface: `constants` and `series` expose
the analytic layer, `trial` and `oracle-validate` the explicit hypercube
route, `seqmodel` the update-sequence sampler and clause checker, `sweep`
and `window` the Monte Carlo harness, and `nk` the NK-landscape tools.

Every flag can also come from a --config file of flat key = value lines
(keys are flag names with underscores); explicit flags win.  Exit codes:
0 on success, 1 when a run or validation fails, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analytic, harness, hypercube, nk, seqmeasure

log = logging.getLogger(__name__)

DEFAULT_SEED = 1


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


class _Options:
    """Merged view of CLI flags over config-file defaults."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: dict[str, str] = {}
        if getattr(args, "config", None):
            self.config = harness.parse_config(args.config)

    def get(self, name: str, conv, default=None):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        if name in self.config:
            raw = self.config[name]
            if conv is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return conv(raw)
        return default


def _common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None, help="master seed (default 1)")
    sub.add_argument("--threads", type=int, default=None, help="worker threads (default: APL_THREADS or CPU count)")
    sub.add_argument("--out", type=str, default=None, help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default=None, help="output format (default csv)")
    sub.add_argument("--config", type=str, default=None, help="key = value config file; flags override it")
    sub.add_argument("-v", "--verbose", action="store_true", help="log cell timings to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apl",
        description="Accessibility percolation and NK landscape experiments.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("constants", help="threshold constants as JSON")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--eps", type=float, default=None, help="base epsilon of the tolerance ladder")
    p.add_argument("--N", type=int, default=None, help="also report the finite-N threshold x_c(N)")
    _common_flags(p)

    p = subs.add_parser("series", help="parity-constrained sequence counts as CSV")
    p.add_argument("--n", type=int, required=True, help="odd-block size")
    p.add_argument("--N", type=int, required=True, help="number of coordinates")
    p.add_argument("--ell-max", type=int, default=None, help="largest sequence length (default 12)")
    _common_flags(p)

    p = subs.add_parser("trial", help="one conditioned field; accessibility result as JSON")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="target distance (default N, antipodal)")
    p.add_argument("--x", type=float, required=True, help="conditioned value at the target")
    _common_flags(p)

    p = subs.add_parser("oracle-validate", help="cross-module exact checks; nonzero exit on failure")
    _common_flags(p)

    p = subs.add_parser("seqmodel", help="sample update sequences and score goodness")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--n", type=int, required=True, help="hypercube dimension")
    p.add_argument("--x", type=float, default=None, help="gap value (default: the threshold root x0)")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--mode", choices=("antipodal", "general"), default=None)
    _common_flags(p)

    p = subs.add_parser("sweep", help="Monte Carlo accessibility sweep over (N, offset)")
    p.add_argument("--n-list", type=str, default=None, help="comma-separated dimensions")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--offsets", type=str, default=None, help="comma-separated offsets (use --offsets=-1,0,1)")
    p.add_argument("--offset-mode", choices=("scaled", "absolute"), default=None)
    p.add_argument("--trials", type=int, default=None)
    _common_flags(p)

    p = subs.add_parser("window", help="probe the critical window x_c +- Delta/N")
    p.add_argument("--n-list", type=str, default=None, help="comma-separated dimensions")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--trials", type=int, default=None)
    _common_flags(p)

    p = subs.add_parser("nk", help="NK landscape experiments")
    p.add_argument("--n", type=int, required=True, help="genome length")
    p.add_argument("--k", type=int, required=True, help="interaction range")
    p.add_argument("--seeds", type=int, default=None, help="number of seeds (default 10)")
    p.add_argument("--mode", choices=("exhaustive", "greedy", "walk", "iidcheck"), default=None)
    p.add_argument("--rule", choices=("random", "steepest"), default=None, help="walk rule")
    _common_flags(p)

    return parser


def cmd_constants(opt: _Options) -> int:
    beta = opt.get("beta", float, 1.0)
    eps = opt.get("eps", float, 0.05)
    N = opt.get("N", int)
    c = analytic.phase_constants(beta=beta, epsilon=eps)
    doc = {
        "beta": c.beta,
        "x0": c.x0,
        "f_prime_x0": c.f_prime_x0,
        "alpha": c.alpha,
        "gamma": c.gamma,
        "epsilon": c.epsilon,
        "epsilon1": c.epsilon1,
        "epsilon2": c.epsilon2,
        "epsilon3": c.epsilon3,
        "epsilon4": c.epsilon4,
        "delta": c.delta,
    }
    if N is not None:
        doc["N"] = N
        doc["x_c"] = analytic.critical_x(N, beta)
    _write_output(json.dumps(doc, indent=2) + "\n", opt.get("out", str))
    return 0


def cmd_series(opt: _Options) -> int:
    n = opt.get("n", int)
    N = opt.get("N", int)
    ell_max = opt.get("ell_max", int, 12)
    lines = ["n,N,ell,count"]
    for ell in range(ell_max + 1):
        lines.append(f"{n},{N},{ell},{analytic.m_coefficient(n, N, ell)}")
    _write_output("\n".join(lines) + "\n", opt.get("out", str))
    return 0


def cmd_trial(opt: _Options) -> int:
    N = opt.get("N", int)
    n = opt.get("n", int, N)
    x = opt.get("x", float)
    seed = opt.get("seed", int, DEFAULT_SEED)
    fld = hypercube.sample_field(N, n, x, seed)
    res = hypercube.is_accessible(fld)
    doc = {
        "N": N,
        "n": n,
        "x": x,
        "seed": seed,
        "accessible": res.accessible,
        "visited_count": res.visited_count,
        "path_witness": res.path_witness,
    }
    _write_output(json.dumps(doc, indent=2) + "\n", opt.get("out", str))
    return 0


def cmd_oracle_validate(opt: _Options) -> int:
    report = harness.run_oracle_validation()
    lines = []
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"{status} {check.name}: {check.detail}")
    _write_output("\n".join(lines) + "\n", opt.get("out", str))
    return 0 if report.all_passed else 1


def cmd_seqmodel(opt: _Options) -> int:
    beta = opt.get("beta", float, 1.0)
    N = opt.get("n", int)
    eps = opt.get("eps", float, 0.05)
    trials = opt.get("trials", int, 100)
    mode = opt.get("mode", str, "antipodal" if beta == 1.0 else "general")
    constants = analytic.phase_constants(beta=beta, epsilon=eps)
    x = opt.get("x", float, constants.x0)
    seed = opt.get("seed", int, DEFAULT_SEED)
    cfg = seqmeasure.GoodnessConfig(constants=constants, mode=mode, N=N)
    rng = np.random.default_rng(seed)
    lines = ["trial,L,good,first_violated_clause,T_half,O_half"]
    for t in range(trials):
        seq = seqmeasure.sample_continuous(N, cfg.n, x, rng)
        good, clause = seqmeasure.is_good(seq, cfg)
        t_half, o_half, _ = seqmeasure.interval_stats(seq, (0.0, 0.5))
        lines.append(f"{t},{seq.L},{int(good)},{clause or ''},{t_half},{o_half}")
    _write_output("\n".join(lines) + "\n", opt.get("out", str))
    return 0


def _emit_sweep(result: harness.SweepResult, opt: _Options) -> None:
    fmt = opt.get("format", str, "csv")
    out = opt.get("out", str)
    if out:
        harness.emit(result, fmt, out)
    else:
        sys.stdout.write(harness.render_sweep(result, fmt))


def cmd_sweep(opt: _Options) -> int:
    N_list = opt.get("n_list", _ints)
    if not N_list:
        raise ValueError("sweep needs --n-list")
    if isinstance(N_list, str):
        N_list = _ints(N_list)
    offsets = opt.get("offsets", _floats, [-2.0, -1.0, 0.0, 1.0, 2.0])
    if isinstance(offsets, str):
        offsets = _floats(offsets)
    plan = harness.ExperimentPlan(
        kind="transition_sweep",
        N_list=tuple(N_list),
        beta=opt.get("beta", float, 1.0),
        offsets=tuple(offsets),
        trials=opt.get("trials", int, 1000),
        master_seed=opt.get("seed", int, DEFAULT_SEED),
        thread_count=opt.get("threads", int),
        offset_mode=opt.get("offset_mode", str, "scaled"),
    )
    result = harness.run_transition_sweep(plan, partial_path=opt.get("out", str))
    _emit_sweep(result, opt)
    crossings = {str(k): v for k, v in result.crossings().items()}
    log.info("p=1/2 crossings: %s", json.dumps(crossings))
    return 0


def cmd_window(opt: _Options) -> int:
    N_list = opt.get("n_list", _ints)
    if not N_list:
        raise ValueError("window needs --n-list")
    if isinstance(N_list, str):
        N_list = _ints(N_list)
    result = harness.run_critical_window(
        N_list=N_list,
        beta=opt.get("beta", float, 1.0),
        Delta=opt.get("delta", float, 1.0),
        trials=opt.get("trials", int, 1000),
        seed=opt.get("seed", int, DEFAULT_SEED),
        thread_count=opt.get("threads", int),
        partial_path=opt.get("out", str),
    )
    _emit_sweep(result, opt)
    ok, _ = result.window_report()
    log.info("all estimates strictly inside (0,1) with CI margin: %s", ok)
    return 0


def cmd_nk(opt: _Options) -> int:
    N = opt.get("n", int)
    K = opt.get("k", int)
    seeds = opt.get("seeds", int, 10)
    mode = opt.get("mode", str, "exhaustive")
    rule = opt.get("rule", str, "steepest")
    base_seed = opt.get("seed", int, DEFAULT_SEED)
    lines = ["seed,N,K,value,normalized_value,steps"]
    for s in range(seeds):
        seed = base_seed + s
        steps = 0
        if mode == "iidcheck":
            rng = np.random.default_rng(seed)
            value = float(rng.standard_normal(1 << N).max() * math.sqrt(N))
        else:
            land = nk.build_landscape(N, K, seed)
            if mode == "exhaustive":
                _, value = nk.exhaustive_max(land)
            elif mode == "greedy":
                _, value = nk.greedy_block_max(land)
            else:
                rng = np.random.default_rng(seed)
                start = int(rng.integers(1 << N))
                walk = nk.adaptive_walk(land, start, rule, rng)
                value = walk.final_fitness
                steps = walk.steps
        lines.append(f"{s},{N},{K},{value:.17g},{value / N:.17g},{steps}")
    _write_output("\n".join(lines) + "\n", opt.get("out", str))
    return 0


_COMMANDS = {
    "constants": cmd_constants,
    "series": cmd_series,
    "trial": cmd_trial,
    "oracle-validate": cmd_oracle_validate,
    "seqmodel": cmd_seqmodel,
    "sweep": cmd_sweep,
    "window": cmd_window,
    "nk": cmd_nk,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        opt = _Options(args)
        return _COMMANDS[args.command](opt)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

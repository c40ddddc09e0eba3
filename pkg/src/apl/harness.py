"""Reproducible Monte Carlo sweeps for accessibility estimates.

Each (N, offset) cell of a plan runs its trials on a private key chain:
cell key = derive_key(master_seed, N, offset_index), per-trial key =
derive_key(cell_key, trial).  Trial fields are evaluated lazily inside
the compiled bidirectional search, so no 2^N array is ever built; the
same keys fed to ``rng.uniform_array`` reproduce the exact fields, which
is how the tests cross-check the two routes bit for bit.

Cells are distributed over a thread pool (the kernels release the GIL)
and merged in plan order, so results are byte-identical for any thread
count.  The wall_time column reports deterministic work units
(trials * 2^N * 1e-9) rather than measured seconds, keeping emitted
files stable across machines and schedules; real durations go to the
module logger.
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels, analytic, hypercube, nk, seqmeasure
from .rng import derive_key

log = logging.getLogger(__name__)

MAX_SWEEP_N = 30
WILSON_Z = 1.96
_QUEUE_CAP_BITS = 24

VALID_KINDS = ("transition_sweep", "critical_window", "nk_experiment", "oracle_validation")

CSV_HEADER = "N,beta,x,offset,trials,successes,p_hat,ci_low,ci_high,seed,wall_time"


def wilson_ci(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval; exact 0/1 endpoints at the boundary counts."""
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError(f"need 0 <= successes <= trials, got {successes}/{trials}")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def _xbits(x: float) -> int:
    """Integer gap on the 53-bit hash scale; exact for any float in (0,1]."""
    return int(x * (1 << 53))


def _scratch(N: int):
    size = 1 << N
    cap = 1 << min(N, _QUEUE_CAP_BITS)
    words = (size + 63) >> 6
    return (
        np.empty(words, dtype=np.uint64),
        np.empty(words, dtype=np.uint64),
        np.empty(cap, dtype=np.int32),
        np.empty(cap, dtype=np.int32),
    )


def _run_cell_trials(N: int, n: int, x: float, trials: int, cell_key: int) -> int:
    seen_f, seen_b, queue_f, queue_b = _scratch(N)
    t0 = time.perf_counter()
    successes = _kernels.run_trials(
        N, n, np.uint64(_xbits(x)), np.uint64(cell_key), trials, seen_f, seen_b, queue_f, queue_b
    )
    if successes < 0:
        raise RuntimeError(
            f"trial frontier exceeded the scratch queue capacity at N={N}, x={x}; "
            "this regime needs more than 2^24 queued vertices per trial"
        )
    log.info(
        "cell N=%d n=%d x=%.6f trials=%d: %d successes in %.2fs",
        N, n, x, trials, successes, time.perf_counter() - t0,
    )
    return int(successes)


def estimate_accessibility(
    N: int, n: int, x: float, trials: int, seed: int
) -> tuple[float, tuple[float, float]]:
    """Fraction of independent conditioned fields where the target is reachable.

    Runs the lazy bidirectional search per trial under the key chain
    (seed, N, n) -> trial; returns the point estimate and its Wilson CI.
    """
    if not 1 <= n <= N <= MAX_SWEEP_N:
        raise ValueError(f"need 1 <= n <= N <= {MAX_SWEEP_N}, got n={n}, N={N}")
    if not 0.0 < x <= 1.0:
        raise ValueError(f"gap must lie in (0, 1], got {x}")
    if trials < 1:
        raise ValueError("trials must be positive")
    successes = _run_cell_trials(N, n, x, trials, derive_key(seed, N, n))
    return successes / trials, wilson_ci(successes, trials)


# --- plans and results --------------------------------------------------------


@dataclass(frozen=True)
class ExperimentPlan:
    """Grid description for a sweep: which cells, how hard, which stream."""

    kind: str
    N_list: tuple[int, ...]
    beta: float
    offsets: tuple[float, ...]
    trials: int
    master_seed: int
    thread_count: int | None = None
    offset_mode: str = "scaled"

    def __post_init__(self) -> None:
        if self.kind not in VALID_KINDS:
            raise ValueError(f"unknown plan kind {self.kind!r}")
        object.__setattr__(self, "N_list", tuple(int(v) for v in self.N_list))
        object.__setattr__(self, "offsets", tuple(float(v) for v in self.offsets))
        if not self.N_list:
            raise ValueError("N_list must be nonempty")
        for N in self.N_list:
            if not 2 <= N <= MAX_SWEEP_N:
                raise ValueError(f"every N must lie in 2..{MAX_SWEEP_N}, got {N}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if not self.offsets:
            raise ValueError("offsets must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.thread_count is not None and self.thread_count < 1:
            raise ValueError("thread_count must be positive when given")
        if self.offset_mode not in ("scaled", "absolute"):
            raise ValueError(f"offset_mode must be 'scaled' or 'absolute', got {self.offset_mode!r}")


@dataclass(frozen=True)
class SweepRow:
    N: int
    beta: float
    x: float
    offset: float
    trials: int
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float
    seed: int
    wall_time: float


@dataclass
class SweepResult:
    """Ordered per-cell estimates; kind is carried but not compared.

    Equality is row-wise so a CSV round trip (which stores only rows)
    compares equal to the original result.
    """

    rows: list[SweepRow]
    kind: str = field(default="transition_sweep", compare=False)

    def crossings(self) -> dict[int, float | None]:
        """Per-N gap where the estimate crosses 1/2, by linear interpolation.

        Scans rows in increasing x and interpolates inside the first
        bracketing pair; None when no bracket exists.
        """
        out: dict[int, float | None] = {}
        for N in sorted({r.N for r in self.rows}):
            pts = sorted((r.x, r.p_hat) for r in self.rows if r.N == N)
            out[N] = None
            for (x0, p0), (x1, p1) in zip(pts, pts[1:]):
                if p0 == 0.5:
                    out[N] = x0
                    break
                if p0 < 0.5 < p1:
                    if p1 == p0 or x1 == x0:
                        out[N] = x0
                    else:
                        out[N] = x0 + (0.5 - p0) * (x1 - x0) / (p1 - p0)
                    break
            else:
                if pts and pts[-1][1] == 0.5:
                    out[N] = pts[-1][0]
        return out

    def window_report(self) -> tuple[bool, list[tuple[int, float, bool]]]:
        """Whether every estimate sits strictly inside (0,1) with CI margin."""
        details = [
            (r.N, r.p_hat, r.ci_low > 0.0 and r.ci_high < 1.0) for r in self.rows
        ]
        return all(d[2] for d in details), details


def _effective_n(beta: float, N: int) -> int:
    return max(1, math.floor(beta * N + 1e-9))


def _clamp_gap(x: float) -> float:
    return min(max(x, 2.0**-53), 1.0)


def _plan_cells(plan: ExperimentPlan) -> list[tuple[int, int, float, float, int]]:
    """(N, n, x, offset, cell_key) per grid cell, in plan order."""
    cells = []
    for N in plan.N_list:
        xc = analytic.critical_x(N, plan.beta)
        n = _effective_n(plan.beta, N)
        for idx, off in enumerate(plan.offsets):
            shift = off / N if plan.offset_mode == "scaled" else off
            x = _clamp_gap(xc + shift)
            cells.append((N, n, x, off, derive_key(plan.master_seed, N, idx)))
    return cells


def resolve_thread_count(requested: int | None) -> int:
    if requested is not None:
        if requested < 1:
            raise ValueError("thread_count must be positive")
        return requested
    env = os.environ.get("APL_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_plan(plan: ExperimentPlan, partial_path: str | Path | None) -> SweepResult:
    cells = _plan_cells(plan)
    threads = resolve_thread_count(plan.thread_count)
    rows: dict[int, SweepRow] = {}

    def one(i: int) -> SweepRow:
        N, n, x, off, cell_key = cells[i]
        successes = _run_cell_trials(N, n, x, plan.trials, cell_key)
        lo, hi = wilson_ci(successes, plan.trials)
        return SweepRow(
            N=N,
            beta=plan.beta,
            x=x,
            offset=off,
            trials=plan.trials,
            successes=successes,
            p_hat=successes / plan.trials,
            ci_low=lo,
            ci_high=hi,
            seed=cells[i][4],
            wall_time=plan.trials * (1 << N) * 1e-9,
        )

    try:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {i: pool.submit(one, i) for i in range(len(cells))}
            for i, fut in futures.items():
                rows[i] = fut.result()
    except Exception:
        done = [rows[i] for i in sorted(rows)]
        if partial_path is not None and done:
            partial = SweepResult(rows=_sorted_rows(done), kind=plan.kind)
            emit(partial, "csv", partial_path)
            log.warning("flushed %d completed cells to %s", len(done), partial_path)
        raise
    ordered = [rows[i] for i in range(len(cells))]
    return SweepResult(rows=_sorted_rows(ordered), kind=plan.kind)


def _sorted_rows(rows: list[SweepRow]) -> list[SweepRow]:
    return sorted(rows, key=lambda r: (r.N, r.x, r.offset))


def run_transition_sweep(
    plan: ExperimentPlan, partial_path: str | Path | None = None
) -> SweepResult:
    """Estimate accessibility over the plan's full (N, offset) grid.

    Rows come back sorted by (N, x); crossings() then locates the
    empirical transition point per N.  If a cell fails, completed rows
    are flushed to partial_path (when given) before the error surfaces.
    """
    if plan.kind != "transition_sweep":
        raise ValueError(f"plan kind must be transition_sweep, got {plan.kind!r}")
    return _run_plan(plan, partial_path)


def run_critical_window(
    N_list: list[int] | tuple[int, ...],
    beta: float,
    Delta: float,
    trials: int,
    seed: int,
    thread_count: int | None = None,
    partial_path: str | Path | None = None,
) -> SweepResult:
    """Probe the window x_c(N) +- Delta/N for non-degenerate estimates.

    Delta=0 degenerates to a single offset at the threshold itself.
    window_report() on the result checks that every CI stays strictly
    inside (0, 1).
    """
    if Delta < 0:
        raise ValueError(f"Delta must be nonnegative, got {Delta}")
    offsets = (0.0,) if Delta == 0 else (-Delta, Delta)
    plan = ExperimentPlan(
        kind="critical_window",
        N_list=tuple(N_list),
        beta=beta,
        offsets=offsets,
        trials=trials,
        master_seed=seed,
        thread_count=thread_count,
    )
    return _run_plan(plan, partial_path)


# --- oracle validation --------------------------------------------------------


@dataclass(frozen=True)
class OracleCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class OracleReport:
    checks: list[OracleCheck]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check_enumeration() -> OracleCheck:
    for N in range(1, 5):
        for n in range(0, N + 1):
            for ell in range(0, 9):
                got = analytic.m_coefficient(n, N, ell)
                want = len(hypercube.enumerate_sequences(n, N, ell))
                if got != want:
                    return OracleCheck(
                        "enumeration vs coefficient",
                        False,
                        f"mismatch at n={n}, N={N}, ell={ell}: coefficient {got}, enumeration {want}",
                    )
    return OracleCheck("enumeration vs coefficient", True, "all 0<=n<=N<=4, ell<=8 agree exactly")


def _check_count_vs_access() -> OracleCheck:
    rng = np.random.default_rng(20260816)
    for trial in range(2000):
        N = int(rng.integers(2, 9))
        n = int(rng.integers(1, N + 1))
        x = float(rng.uniform(0.2, 1.0))
        fld = hypercube.sample_field(N, n, x, int(rng.integers(1 << 62)))
        cnt = hypercube.count_accessible_paths(fld)
        acc = hypercube.is_accessible(fld, want_witness=False).accessible
        if (cnt > 0) != acc:
            return OracleCheck(
                "count vs accessibility",
                False,
                f"count={cnt} but accessible={acc} at N={N}, n={n}, x={x:.4f}, trial={trial}",
            )
    return OracleCheck("count vs accessibility", True, "count>0 iff accessible on 2000 random fields")


def _check_pmf_normalization() -> OracleCheck:
    for x in (0.3, 0.88137, 1.5):
        for pmf, parity in ((seqmeasure.pmf_F1, 1), (seqmeasure.pmf_F2, 0)):
            total = sum(pmf(j, x) for j in range(parity, 200, 2))
            if abs(total - 1.0) > 1e-12:
                return OracleCheck(
                    "occurrence-law normalization",
                    False,
                    f"law with parity {parity} sums to {total!r} at x={x}",
                )
    return OracleCheck("occurrence-law normalization", True, "both laws sum to 1 within 1e-12")


def _check_profile_vs_xor() -> OracleCheck:
    rng = np.random.default_rng(7)
    for case in range(200):
        N = 6
        L = int(rng.integers(1, 21))
        entries = rng.integers(1, N + 1, size=L).astype(np.int32)
        seq = seqmeasure.UpdateSequence(entries=entries, N=N, n=N)
        prof = seqmeasure.hamming_profile(seq)
        verts = hypercube.apply_sequence(tuple(int(a) for a in entries))
        for i in range(L + 1):
            for j in range(L + 1):
                want = (verts[i] ^ verts[j]).bit_count()
                if prof.H(i, j) != want:
                    return OracleCheck(
                        "profile vs xor simulation",
                        False,
                        f"H({i},{j})={prof.H(i, j)} but xor gives {want} on case {case}",
                    )
    return OracleCheck("profile vs xor simulation", True, "200 random sequences agree on all pairs")


def _check_nk_k1() -> OracleCheck:
    for seed in range(50):
        land = nk.build_landscape(8, 1, seed)
        _, value = nk.exhaustive_max(land)
        want = float(np.maximum(land.Y[:, 0], land.Y[:, 1]).sum())
        if abs(value - want) > 1e-12:
            return OracleCheck(
                "nk K=1 decomposition",
                False,
                f"exhaustive {value!r} vs coordinatewise {want!r} at seed={seed}",
            )
    return OracleCheck("nk K=1 decomposition", True, "exhaustive equals coordinatewise max on 50 seeds")


def run_oracle_validation() -> OracleReport:
    """Cross-module exact checks; every failure names its counterexample."""
    return OracleReport(
        checks=[
            _check_enumeration(),
            _check_count_vs_access(),
            _check_pmf_normalization(),
            _check_profile_vs_xor(),
            _check_nk_k1(),
        ]
    )


# --- serialization ------------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _row_csv(r: SweepRow) -> str:
    return ",".join(
        (
            str(r.N),
            _fmt(r.beta),
            _fmt(r.x),
            _fmt(r.offset),
            str(r.trials),
            str(r.successes),
            _fmt(r.p_hat),
            _fmt(r.ci_low),
            _fmt(r.ci_high),
            str(r.seed),
            _fmt(r.wall_time),
        )
    )


def render_sweep(results: SweepResult, format: str) -> str:
    """Bit-stable text: 17-significant-digit floats, sorted rows, newline-terminated."""
    rows = _sorted_rows(results.rows)
    if format == "csv":
        return CSV_HEADER + "\n" + "".join(_row_csv(r) + "\n" for r in rows)
    if format == "json":
        parts = []
        for r in rows:
            parts.append(
                "{"
                + f'"N": {r.N}, "beta": {_fmt(r.beta)}, "x": {_fmt(r.x)}, '
                + f'"offset": {_fmt(r.offset)}, "trials": {r.trials}, '
                + f'"successes": {r.successes}, "p_hat": {_fmt(r.p_hat)}, '
                + f'"ci_low": {_fmt(r.ci_low)}, "ci_high": {_fmt(r.ci_high)}, '
                + f'"seed": {r.seed}, "wall_time": {_fmt(r.wall_time)}'
                + "}"
            )
        return '{"kind": "' + results.kind + '", "rows": [\n' + ",\n".join(parts) + "\n]}\n"
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def emit(results: SweepResult, format: str, path: str | Path) -> None:
    """Write render_sweep output to path; identical results give identical bytes."""
    path = Path(path)
    text = render_sweep(results, format)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def _row_from_record(rec: dict) -> SweepRow:
    return SweepRow(
        N=int(rec["N"]),
        beta=float(rec["beta"]),
        x=float(rec["x"]),
        offset=float(rec["offset"]),
        trials=int(rec["trials"]),
        successes=int(rec["successes"]),
        p_hat=float(rec["p_hat"]),
        ci_low=float(rec["ci_low"]),
        ci_high=float(rec["ci_high"]),
        seed=int(rec["seed"]),
        wall_time=float(rec["wall_time"]),
    )


def parse_sweep(path: str | Path) -> SweepResult:
    """Read back an emitted result; the format is sniffed from the content."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        rows = [_row_from_record(rec) for rec in doc["rows"]]
        return SweepResult(rows=rows, kind=doc.get("kind", "transition_sweep"))
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unrecognized results file {path}")
    names = CSV_HEADER.split(",")
    rows = [_row_from_record(dict(zip(names, ln.split(",")))) for ln in lines[1:]]
    return SweepResult(rows=rows)


def parse_config(path: str | Path) -> dict[str, str]:
    """Flat key=value config; comments with #, optional quotes on values."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        value = value.split("#", 1)[0].strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        out[key.strip()] = value
    return out

"""NK fitness landscapes with Gaussian site potentials.

A landscape assigns each site i and each K-bit window value tau an
independent standard Gaussian Y[i, tau]; the fitness of a genotype is the
sum of Y over all N cyclic windows.  The module covers exhaustive
maximization (vectorized full scan), the blockwise-greedy construction
whose per-block gain is distributed exactly as the maximum of a binary
branching random walk, a direct sampler of that BRW maximum for
calibration, adaptive walks to local maxima, and the windowed partial
sums used to reason about local moves.

Window convention: the window at site i (1-based) reads genotype bits
i..i+K-1 cyclically, with bit i in the least-significant position of the
table column index.  Any fixed convention gives the same law; this one
makes the column index a rotate-and-mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Genotype = int

MAX_NK_N = 24
MAX_BRW_K = 20


@dataclass(eq=False)
class NKLandscape:
    """Potential table for one realization; immutable after build."""

    N: int
    K: int
    Y: np.ndarray
    seed: int


@dataclass(eq=False)
class WalkResult:
    path: list[Genotype]
    final_fitness: float
    steps: int


def build_landscape(N: int, K: int, seed: int) -> NKLandscape:
    if not 1 <= K <= N:
        raise ValueError(f"need 1 <= K <= N, got K={K}, N={N}")
    if N > MAX_NK_N:
        raise ValueError(f"N={N} exceeds the table cap {MAX_NK_N}")
    rng = np.random.default_rng(seed)
    Y = rng.standard_normal((N, 1 << K))
    return NKLandscape(N=N, K=K, Y=Y, seed=seed)


def _window_index(land: NKLandscape, sigma: Genotype, site: int) -> int:
    """Column index of site's window (site 1-based)."""
    N, K = land.N, land.K
    full = (1 << N) - 1
    shift = site - 1
    rot = ((sigma >> shift) | (sigma << (N - shift))) & full
    return rot & ((1 << K) - 1)


def fitness_of(land: NKLandscape, sigma: Genotype) -> float:
    """Sum of site potentials over all N cyclic windows."""
    if not 0 <= sigma < (1 << land.N):
        raise ValueError(f"genotype out of range for N={land.N}")
    total = 0.0
    for i in range(1, land.N + 1):
        total += land.Y[i - 1, _window_index(land, sigma, i)]
    return total


def _all_fitness_chunk(land: NKLandscape, sigmas: np.ndarray) -> np.ndarray:
    N, K = land.N, land.K
    full = np.uint64((1 << N) - 1)
    kmask = np.uint64((1 << K) - 1)
    out = np.zeros(sigmas.size, dtype=np.float64)
    s = sigmas.astype(np.uint64)
    for i in range(1, N + 1):
        shift = np.uint64(i - 1)
        back = np.uint64(N - (i - 1))
        rot = ((s >> shift) | (s << back)) & full
        out += land.Y[i - 1][(rot & kmask).astype(np.int64)]
    return out


def exhaustive_max(land: NKLandscape) -> tuple[Genotype, float]:
    """Global maximizer by vectorized full scan, chunked to bound memory."""
    if land.N > MAX_NK_N:
        raise ValueError(f"N={land.N} exceeds the exhaustive cap {MAX_NK_N}")
    size = 1 << land.N
    chunk = min(size, 1 << 20)
    best_v = -math.inf
    best_s = 0
    for start in range(0, size, chunk):
        sigmas = np.arange(start, min(start + chunk, size), dtype=np.uint64)
        vals = _all_fitness_chunk(land, sigmas)
        j = int(np.argmax(vals))
        if vals[j] > best_v:
            best_v = float(vals[j])
            best_s = start + j
    return best_s, best_v


def greedy_block_increments(land: NKLandscape) -> tuple[Genotype, float, list[float]]:
    """Blockwise-greedy genotype, its fitness, and per-block gains.

    The first K bits are fixed to zero.  For each subsequent block, the
    K candidate bits maximize the sum of the K site potentials whose
    windows end inside the candidate block; the t-th of those windows
    sees K-t fixed bits and the first t candidate bits, so over the 2^K
    candidates the gains form exactly a depth-K binary branching random
    walk and the chosen gain is its maximum.  Any remainder sites when K
    does not divide N are zero-filled.  Ties break toward the smallest
    bit pattern.
    """
    N, K = land.N, land.K
    blocks = N // K - 1
    sigma = 0
    gains: list[float] = []
    for j in range(1, blocks + 1):
        base = (j - 1) * K
        best_c = 0
        best_v = -math.inf
        for c in range(1 << K):
            trial = sigma | (c << (base + K))
            v = 0.0
            for s in range(base + 2, base + K + 2):
                v += land.Y[s - 1, _window_index(land, trial, s)]
            if v > best_v:
                best_v = v
                best_c = c
        sigma |= best_c << (base + K)
        gains.append(best_v)
    return sigma, fitness_of(land, sigma), gains


def greedy_block_max(land: NKLandscape) -> tuple[Genotype, float]:
    """Blockwise-greedy maximization; see greedy_block_increments."""
    sigma, value, _ = greedy_block_increments(land)
    return sigma, value


def block_brw_batch(K: int, draws: int, seed: int | np.random.Generator) -> np.ndarray:
    """Maxima of independent depth-K binary branching random walks.

    Each walk doubles its population per level with fresh standard
    Gaussian increments shared along prefixes; the result is the max
    over the 2^K leaf sums, one value per draw.
    """
    if not 1 <= K <= MAX_BRW_K:
        raise ValueError(f"need 1 <= K <= {MAX_BRW_K}, got K={K}")
    if draws < 1:
        raise ValueError("draws must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out = np.empty(draws, dtype=np.float64)
    step = max(1, (1 << 24) >> K)
    for lo in range(0, draws, step):
        m = min(step, draws - lo)
        vals = np.zeros((m, 1), dtype=np.float64)
        for level in range(1, K + 1):
            vals = np.repeat(vals, 2, axis=1) + rng.standard_normal((m, 1 << level))
        out[lo : lo + m] = vals.max(axis=1)
    return out


def block_brw_max(K: int, seed: int | np.random.Generator) -> float:
    """One BRW depth-K maximum; calibrates the greedy per-block gains."""
    return float(block_brw_batch(K, 1, seed)[0])


def adaptive_walk(
    land: NKLandscape,
    start: Genotype,
    rule: str,
    seed: int | np.random.Generator,
) -> WalkResult:
    """Climb to a local maximum by strictly-fitter single-bit moves.

    rule "random" picks uniformly among fitter neighbors, "steepest"
    picks the fittest (smallest bit index on exact ties).
    """
    if rule not in ("random", "steepest"):
        raise ValueError(f"rule must be 'random' or 'steepest', got {rule!r}")
    if not 0 <= start < (1 << land.N):
        raise ValueError(f"genotype out of range for N={land.N}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sigma = start
    value = fitness_of(land, sigma)
    path = [sigma]
    while True:
        nbs = [sigma ^ (1 << b) for b in range(land.N)]
        vals = [fitness_of(land, nb) for nb in nbs]
        fitter = [t for t in range(land.N) if vals[t] > value]
        if not fitter:
            break
        if rule == "random":
            t = fitter[int(rng.integers(len(fitter)))]
        else:
            t = max(fitter, key=lambda q: (vals[q], -q))
        sigma = nbs[t]
        value = vals[t]
        path.append(sigma)
    return WalkResult(path=path, final_fitness=value, steps=len(path) - 1)


def local_statistic_T(land: NKLandscape, sigma: Genotype, k: int) -> float:
    """Windowed partial sum over the K sites whose windows cover bit k.

    Flipping bit k changes the fitness by exactly the change in this
    statistic, since the K cyclic windows starting at sites k-K+1..k are
    the only ones reading that bit.  Analyses that need well-separated
    statistics restrict k to a 4K-spaced site grid; the computation
    itself is valid for any site.
    """
    N, K = land.N, land.K
    if not 1 <= k <= N:
        raise ValueError(f"site k={k} outside 1..{N}")
    total = 0.0
    for s in range(k - K + 1, k + 1):
        site = (s - 1) % N + 1
        total += land.Y[site - 1, _window_index(land, sigma, site)]
    return float(total)

"""Update-sequence measures and the good-path clause checker.

An update sequence records which coordinate flips at each step of a
hypercube path.  Conditioned on reaching the target, per-coordinate
occurrence counts are independent with an odd-support law for the first
block of coordinates and an even-support law for the rest:

    P(U = 2j+1) = x^(2j+1) / ((2j+1)! sinh x)   (first block)
    P(U = 2j)   = x^(2j)   / ((2j)!   cosh x)   (remaining block)

The continuous placement model drops each copy of a coordinate uniformly
on [0,1] and reads the sequence off in time order; interval statistics
(update counts, odd-parity coordinate counts) then concentrate around
analytic profiles.  The clause checker classifies a sequence as good by
occupancy windows, exact small-distance Hamming behavior, band and floor
constraints at larger distances, and (in general mode) first-block drift
bounds; it reports the first violated clause for diagnosis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import _kernels
from .analytic import PhaseConstants, p_odd

_TAIL_EPS = 1e-15


def _as_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(eq=False)
class OccupancyVector:
    """Per-coordinate occurrence counts of an update sequence."""

    U: np.ndarray
    L: int


@dataclass(eq=False)
class UpdateSequence:
    """A coordinate-flip sequence with optional continuous timestamps.

    entries holds coordinates in {1..N}; n is the size of the odd block
    (coordinates 1..n flip an odd number of times for sequences that
    reach the target).  positions, when present, are the sorted [0,1]
    timestamps of the continuous model, one per entry.
    """

    entries: np.ndarray
    N: int
    n: int
    positions: np.ndarray | None = field(default=None)

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=np.int32)
        if self.positions is not None:
            self.positions = np.asarray(self.positions, dtype=np.float64)
            if self.positions.shape != self.entries.shape:
                raise ValueError("positions and entries must have equal length")
            if np.any(np.diff(self.positions) < 0):
                raise ValueError("positions must be sorted")

    @property
    def L(self) -> int:
        return int(self.entries.size)

    def occupancy(self) -> OccupancyVector:
        U = np.bincount(self.entries, minlength=self.N + 1)[1:]
        return OccupancyVector(U=U, L=self.L)


# --- odd/even occurrence laws ------------------------------------------------


def _law_table(x: float, parity: Literal["odd", "even"]) -> tuple[np.ndarray, np.ndarray]:
    """Support values and cumulative probabilities, tail below 1e-15."""
    norm = math.sinh(x) if parity == "odd" else math.cosh(x)
    k = 1 if parity == "odd" else 0
    term = x / norm if parity == "odd" else 1.0 / norm
    support = [k]
    cum = [term]
    total = term
    while 1.0 - total > _TAIL_EPS:
        term *= x * x / ((k + 1) * (k + 2))
        k += 2
        support.append(k)
        total += term
        cum.append(total)
    return np.asarray(support, dtype=np.int64), np.asarray(cum, dtype=np.float64)


def _power_over_factorial(x: float, j: int) -> float:
    # factorial(171) no longer fits in a double; the log-space form keeps
    # the (vanishing) deep tail finite instead of overflowing.
    if j <= 170:
        return x**j / math.factorial(j)
    return math.exp(j * math.log(x) - math.lgamma(j + 1))


def pmf_F1(j: int, x: float) -> float:
    """Probability that a first-block coordinate flips j times (j odd)."""
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    if j < 0 or j % 2 == 0:
        return 0.0
    return _power_over_factorial(x, j) / math.sinh(x)


def pmf_F2(j: int, x: float) -> float:
    """Probability that a remaining-block coordinate flips j times (j even)."""
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    if j < 0 or j % 2 == 1:
        return 0.0
    return _power_over_factorial(x, j) / math.cosh(x)


def sample_F1(x: float, seed: int | np.random.Generator, size: int | None = None):
    """Draw odd occurrence counts by inverse CDF over the truncated table."""
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    rng = _as_rng(seed)
    support, cum = _law_table(x, "odd")
    idx = np.searchsorted(cum, rng.random(size=size), side="right")
    idx = np.minimum(idx, len(support) - 1)
    out = support[idx]
    return int(out) if size is None else out


def sample_F2(x: float, seed: int | np.random.Generator, size: int | None = None):
    """Draw even occurrence counts by inverse CDF over the truncated table."""
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    rng = _as_rng(seed)
    support, cum = _law_table(x, "even")
    idx = np.searchsorted(cum, rng.random(size=size), side="right")
    idx = np.minimum(idx, len(support) - 1)
    out = support[idx]
    return int(out) if size is None else out


# --- the endpoint-pinned sequence measure ------------------------------------


def _mu_parities_ok(entries: np.ndarray, n: int, N: int) -> bool:
    counts = np.bincount(entries, minlength=N + 1)[1:]
    want_odd = np.arange(1, N + 1) <= n
    return bool(np.all((counts % 2 == 1) == want_odd))


def pmf_mu_kn(seq: UpdateSequence | np.ndarray, k: int, n: int, N: int, x: float) -> float:
    """Probability of one specific sequence ending in k under the pinned law.

    The value depends on the sequence only through its length ell:
    x^(ell-1)/(ell-1)! times (sinh x)^-(n-1) (cosh x)^-(N-n+1) when the
    final coordinate lies in the first block, and with the exponents
    shifted to -(n+1), -(N-n-1) otherwise.
    """
    entries = seq.entries if isinstance(seq, UpdateSequence) else np.asarray(seq, dtype=np.int32)
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    if entries.size == 0 or int(entries[-1]) != k:
        raise ValueError("sequence must end with the pinned coordinate k")
    if np.any(entries < 1) or np.any(entries > N):
        raise ValueError("coordinates must lie in 1..N")
    if not _mu_parities_ok(entries, n, N):
        raise ValueError("occurrence parities do not match the odd/even blocks")
    ell = int(entries.size)
    log_core = (ell - 1) * math.log(x) - math.lgamma(ell)
    if k <= n:
        log_norm = -(n - 1) * math.log(math.sinh(x)) - (N - n + 1) * math.log(math.cosh(x))
    else:
        log_norm = -(n + 1) * math.log(math.sinh(x)) - (N - n - 1) * math.log(math.cosh(x))
    return math.exp(log_core + log_norm)


def sample_mu_kn(k: int, n: int, N: int, x: float, seed: int | np.random.Generator) -> UpdateSequence:
    """Draw a sequence ending in k with endpoint-pinned occurrence law.

    Every coordinate draws its count from its block's law except k itself,
    which draws from the opposite law; appending the final k then restores
    the block parities.  The prefix is a uniform arrangement of the drawn
    multiset (seeded shuffle).
    """
    if not 1 <= k <= N or not 0 <= n <= N:
        raise ValueError(f"need 1 <= k <= N and 0 <= n <= N, got k={k}, n={n}, N={N}")
    rng = _as_rng(seed)
    s_odd, c_odd = _law_table(x, "odd")
    s_even, c_even = _law_table(x, "even")
    counts = np.empty(N, dtype=np.int64)
    for i in range(1, N + 1):
        odd_block = i <= n
        if i == k:
            odd_block = not odd_block
        support, cum = (s_odd, c_odd) if odd_block else (s_even, c_even)
        idx = min(int(np.searchsorted(cum, rng.random(), side="right")), len(support) - 1)
        counts[i - 1] = support[idx]
    prefix = np.repeat(np.arange(1, N + 1, dtype=np.int32), counts)
    rng.shuffle(prefix)
    entries = np.append(prefix, np.int32(k))
    return UpdateSequence(entries=entries, N=N, n=n)


def sample_continuous(N: int, n: int, x: float, seed: int | np.random.Generator) -> UpdateSequence:
    """Draw counts per coordinate, drop copies uniformly on [0,1], sort.

    Coordinates up to n draw odd counts, the rest even counts; reading
    the copies in time order yields the update sequence together with
    its timestamps.
    """
    if not 1 <= n <= N:
        raise ValueError(f"need 1 <= n <= N, got n={n}, N={N}")
    rng = _as_rng(seed)
    s_odd, c_odd = _law_table(x, "odd")
    s_even, c_even = _law_table(x, "even")
    u = rng.random(N)
    counts = np.empty(N, dtype=np.int64)
    idx = np.minimum(np.searchsorted(c_odd, u[:n], side="right"), len(s_odd) - 1)
    counts[:n] = s_odd[idx]
    idx = np.minimum(np.searchsorted(c_even, u[n:], side="right"), len(s_even) - 1)
    counts[n:] = s_even[idx]
    entries = np.repeat(np.arange(1, N + 1, dtype=np.int32), counts)
    times = rng.random(entries.size)
    order = np.argsort(times, kind="stable")
    return UpdateSequence(entries=entries[order], N=N, n=n, positions=times[order])


def interval_stats(seq: UpdateSequence, interval: tuple[float, float]) -> tuple[int, int, int]:
    """Update count, odd-coordinate count, and first-block odd count in I.

    Returns (T_I, O_I, O_I_prime) for the closed interval I = [a, b];
    an empty interval (a > b) gives (0, 0, 0).
    """
    if seq.positions is None:
        raise ValueError("interval statistics need continuous-model positions")
    a, b = interval
    if a > b:
        return 0, 0, 0
    lo = int(np.searchsorted(seq.positions, a, side="left"))
    hi = int(np.searchsorted(seq.positions, b, side="right"))
    window = seq.entries[lo:hi]
    counts = np.bincount(window, minlength=seq.N + 1)[1:]
    odd = counts % 2 == 1
    return hi - lo, int(np.count_nonzero(odd)), int(np.count_nonzero(odd[: seq.n]))


# --- Hamming profiles --------------------------------------------------------


@dataclass(eq=False)
class HammingProfile:
    """Pairwise Hamming data of the path induced by an update sequence.

    Backed by prefix parity words: H(i, j) pops the XOR of two prefixes,
    so each query is O(N/64) after O(L N/64) setup.  Hprime restricts to
    the first-block coordinates; D counts raw first-block updates in
    prefix and suffix windows.
    """

    L: int
    N: int
    n: int
    _prefix: np.ndarray = field(repr=False)
    _first_counts: np.ndarray = field(repr=False)

    def _pair_words(self, i: int, j: int) -> np.ndarray:
        if not (0 <= i <= self.L and 0 <= j <= self.L):
            raise IndexError(f"vertex indices must lie in 0..{self.L}")
        return self._prefix[i] ^ self._prefix[j]

    def H(self, i: int, j: int) -> int:
        return int(np.bitwise_count(self._pair_words(i, j)).sum())

    def Hprime(self, i: int, j: int) -> int:
        words = self._pair_words(i, j).copy()
        full, rem = divmod(self.n, 64)
        words[full + 1 :] = 0
        if full < words.size:
            mask = np.uint64((1 << rem) - 1) if rem else np.uint64(0)
            words[full] &= mask
        return int(np.bitwise_count(words).sum())

    def D_prefix(self, i: int) -> int:
        """First-block updates among the first i steps."""
        return int(self._first_counts[i])

    def D_suffix(self, i: int) -> int:
        """First-block updates among the last i steps."""
        return int(self._first_counts[self.L] - self._first_counts[self.L - i])


def hamming_profile(seq: UpdateSequence) -> HammingProfile:
    """Precompute prefix parities so pairwise distances are cheap."""
    entries = seq.entries
    if entries.size and (entries.min() < 1 or entries.max() > seq.N):
        raise ValueError("coordinates must lie in 1..N")
    L = seq.L
    nwords = (seq.N + 63) // 64
    prefix = np.zeros((L + 1, nwords), dtype=np.uint64)
    word = (entries.astype(np.int64) - 1) >> 6
    bit = np.uint64(1) << ((entries.astype(np.int64) - 1) & 63).astype(np.uint64)
    for t in range(L):
        row = prefix[t].copy()
        row[word[t]] ^= bit[t]
        prefix[t + 1] = row
    first = np.zeros(L + 1, dtype=np.int64)
    np.cumsum(entries <= seq.n, out=first[1:])
    return HammingProfile(L=L, N=seq.N, n=seq.n, _prefix=prefix, _first_counts=first)


# --- goodness ----------------------------------------------------------------


@dataclass(frozen=True)
class GoodnessConfig:
    """Threshold bundle for the clause checker.

    mode "antipodal" applies the full-distance clause set (odd block = all
    coordinates); mode "general" applies the occupancy, first-block, and
    drift clauses.  All real thresholds are floored to integers once here,
    and a boundary distance always belongs to the lower regime.
    """

    constants: PhaseConstants
    mode: Literal["antipodal", "general"]
    N: int

    def __post_init__(self) -> None:
        if self.mode not in ("antipodal", "general"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")

    @property
    def n(self) -> int:
        if self.mode == "antipodal":
            return self.N
        return max(1, math.floor(self.constants.beta * self.N))

    def thresholds(self) -> dict[str, float | int]:
        c = self.constants
        N = self.N
        scale = c.alpha if self.mode == "antipodal" else c.gamma
        out: dict[str, float | int] = {
            "pair_max": max(3, math.floor(N ** (1 / 5))),
            "mid_max": math.floor(scale * (0.5 + c.epsilon) * N),
            "upper_max": math.floor(scale * (0.5 + c.epsilon2) * N),
        }
        if self.mode == "antipodal":
            out["len_lo"] = math.floor(c.alpha * (1 - c.epsilon) * N)
            out["len_hi"] = math.floor(c.alpha * (1 + c.epsilon) * N)
            out["h_cap"] = math.floor((0.5 + c.epsilon1) * N)
            out["slope"] = 1.0 / (c.alpha + c.epsilon3)
        else:
            beta = c.beta
            first = beta * c.x0 / math.tanh(c.x0)
            second = (1 - beta) * c.x0 * math.tanh(c.x0)
            out["occ1_lo"] = math.floor(first * (1 - c.epsilon) * N)
            out["occ1_hi"] = math.floor(first * (1 + c.epsilon) * N)
            out["occ2_lo"] = math.floor(second * (1 - c.epsilon) * N)
            out["occ2_hi"] = math.floor(second * (1 + c.epsilon) * N)
            out["hp_cap"] = math.floor((0.5 + c.epsilon1) * beta * N)
            out["slope_g"] = 2.0 * g_half(c) / (c.gamma + c.epsilon3)
            out["delta"] = c.delta
        return out


def g_half(constants: PhaseConstants) -> float:
    """Expected Hamming-fraction profile at t = 1/2."""
    c = constants
    return c.beta * p_odd(0.5, c.x0, "odd") + (1 - c.beta) * p_odd(0.5, c.x0, "even")


_KERNEL_CLAUSE_NAMES = {
    _kernels.CLAUSE_PAIR: "pair d/d-2",
    _kernels.CLAUSE_MID_LOW: "H lower mid",
    _kernels.CLAUSE_MID_HIGH: "H upper mid",
    _kernels.CLAUSE_UPPER_LOW: "H lower upper-mid",
    _kernels.CLAUSE_FAR_LOW: "H lower far",
    _kernels.CLAUSE_HP_HIGH: "Hprime upper",
    _kernels.CLAUSE_HP_LOW: "Hprime lower",
    _kernels.CLAUSE_G_LOW: "H lower general",
}


def is_good(seq: UpdateSequence, cfg: GoodnessConfig) -> tuple[bool, str | None]:
    """Check the good-path clauses, reporting the first violation.

    Clauses run in definition order: length or occupancy windows first,
    then all vertex pairs in (i, j) lexicographic order via the compiled
    incremental scan, then (general mode) the prefix/suffix drift bounds.
    The clause id for an exact-distance failure names the distance, e.g.
    "|i-j|=2" for an immediate repeat.
    """
    th = cfg.thresholds()
    entries = seq.entries
    L = seq.L
    n = cfg.n
    if cfg.mode == "antipodal":
        if not th["len_lo"] <= L <= th["len_hi"]:
            return False, "length window"
    else:
        occ_first = int(np.count_nonzero(entries <= n))
        occ_second = L - occ_first
        if not th["occ1_lo"] <= occ_first <= th["occ1_hi"]:
            return False, "occupancy first block"
        if not th["occ2_lo"] <= occ_second <= th["occ2_hi"]:
            return False, "occupancy second block"
    general = cfg.mode == "general"
    parity_scratch = np.zeros((cfg.N + 63) >> 6, dtype=np.uint64)
    code, i, j = _kernels.good_pair_scan(
        np.ascontiguousarray(entries, dtype=np.int32) - 1,
        n,
        cfg.N,
        int(th["pair_max"]),
        int(th["mid_max"]),
        int(th["upper_max"]),
        int(th.get("h_cap", 0)),
        int(th.get("hp_cap", 0)),
        float(th.get("slope", 0.0)),
        float(th.get("slope_g", 0.0)),
        general,
        parity_scratch,
    )
    if code != _kernels.CLAUSE_OK:
        if code == _kernels.CLAUSE_EXACT:
            return False, f"|i-j|={j - i}"
        return False, _KERNEL_CLAUSE_NAMES[int(code)]
    if general:
        first = np.cumsum(entries <= n)
        delta = float(th["delta"])
        half = L // 2
        if half:
            steps = np.arange(1, half + 1, dtype=np.float64)
            if np.any(first[:half] > delta * steps):
                return False, "drift prefix"
            suffix = first[-1] - np.concatenate(([0], first))[L - half : L][::-1]
            if np.any(suffix > delta * steps):
                return False, "drift suffix"
    return True, None

"""Compiled kernels for the hot loops.

Three jobs live here, all numba-compiled with explicit signatures:

* breadth-first reachability over strictly-increasing-fitness steps on the
  hypercube, in two flavors: an explicit-array version used by the library
  entry points (keeps a parent tree for path witnesses) and a lazy version
  that evaluates vertex fitness on demand from a 64-bit counter-based hash,
  never materializing the field;
* a bidirectional variant of the lazy search (forward increasing from the
  source, backward decreasing from the target, meet in the middle).  It
  decides exactly the same predicate and is typically several times faster
  near the threshold, so the Monte Carlo harness uses it;
* an incremental pair scan for the good-path clauses: sweeping j upward for
  fixed i updates the Hamming distance H(i,j) by +-1 per step via a parity
  toggle, so the full O(L^2) clause check needs no per-pair popcounts.

The hash constants must match ``rng``; tests assert bit-for-bit agreement
between the lazy kernels and explicit fields built by ``uniform_array``.
"""

from __future__ import annotations

import numpy as np
from numba import boolean, float64, int32, int64, njit, uint64
from numba.types import Tuple, UniTuple

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_KEY_INIT = np.uint64(0x243F6A8885A308D3)


@njit(uint64(uint64, uint64), inline="always", cache=True)
def _mix_chain(acc, part):
    z = acc + _GAMMA * part
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    return z ^ (z >> np.uint64(31))


@njit(uint64(uint64, uint64), inline="always", cache=True)
def _bits53(key, v):
    """53-bit hash output for vertex v under a stream key."""
    z = key + (v + np.uint64(1)) * _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    z = z ^ (z >> np.uint64(31))
    return z >> np.uint64(11)


@njit(Tuple((boolean, int64, int64))(float64[::1], int64, int64, uint64[::1], int32[::1], int32[::1], boolean), cache=True, nogil=True)
def bfs_field(values, N, w, seen, queue, parent, want_parent):
    """Forward reachability over an explicit fitness array.

    Expands from vertex 0 to strictly larger fitness values below values[w];
    returns (accessible, visited_count, predecessor of w if accessible).
    `seen` is a bitset of 2^N bits, cleared here; `parent` is only written
    when want_parent is set.
    """
    x = values[w]
    nwords = ((1 << N) + 63) >> 6
    for i in range(nwords):
        seen[i] = np.uint64(0)
    head = 0
    tail = 0
    queue[0] = 0
    tail += 1
    seen[0] = np.uint64(1)
    if want_parent:
        parent[0] = -1
    nvis = 1
    while head < tail:
        v = np.int64(queue[head])
        head += 1
        fv = values[v]
        if fv >= x:
            continue
        for i in range(N):
            nb = v ^ (np.int64(1) << np.int64(i))
            if nb == w:
                return True, nvis, v
            word = nb >> 6
            bit = np.uint64(1) << np.uint64(nb & 63)
            if seen[word] & bit:
                continue
            fnb = values[nb]
            if fnb > fv and fnb < x:
                seen[word] |= bit
                if want_parent:
                    parent[nb] = np.int32(v)
                queue[tail] = np.int32(nb)
                tail += 1
                nvis += 1
    return False, nvis, -1


@njit(UniTuple(int64, 2)(int64, int64, uint64, uint64, uint64[::1], int32[::1]), cache=True, nogil=True)
def bfs_lazy(N, n, xbits, key, seen, queue):
    """Forward reachability with hash-evaluated fitness (no field array).

    Vertex fitness is _bits53(key, v) on a 53-bit integer scale; the source
    (vertex 0) is pinned to 0 and the target (low n bits set) to xbits.
    Returns (1 if accessible else 0, visited_count); (-1, count) signals the
    queue capacity was exhausted before the search resolved.
    """
    cap = queue.shape[0]
    w = (np.int64(1) << np.int64(n)) - 1
    nwords = ((1 << N) + 63) >> 6
    for i in range(nwords):
        seen[i] = np.uint64(0)
    head = 0
    tail = 0
    queue[0] = 0
    tail += 1
    seen[0] = np.uint64(1)
    nvis = 1
    while head < tail:
        v = np.int64(queue[head])
        head += 1
        fv = np.uint64(0)
        if v != 0:
            fv = _bits53(key, np.uint64(v))
            if fv >= xbits:
                continue
        for i in range(N):
            nb = v ^ (np.int64(1) << np.int64(i))
            if nb == w:
                return 1, nvis
            word = nb >> 6
            bit = np.uint64(1) << np.uint64(nb & 63)
            if seen[word] & bit:
                continue
            fnb = _bits53(key, np.uint64(nb))
            if fnb > fv and fnb < xbits:
                if tail >= cap:
                    return -1, nvis
                seen[word] |= bit
                queue[tail] = np.int32(nb)
                tail += 1
                nvis += 1
    return 0, nvis


@njit(int64(int64, int64, uint64, uint64, uint64[::1], uint64[::1], int32[::1], int32[::1]), cache=True, nogil=True)
def bidir_lazy(N, n, xbits, key, seen_f, seen_b, queue_f, queue_b):
    """Bidirectional version of bfs_lazy deciding the same predicate.

    A vertex set reachable forward from the source (strictly increasing
    fitness) and one reachable backward from the target (strictly decreasing)
    grow alternately, smaller frontier first; the target is accessible iff
    they touch.  Concatenating the forward path into v with the increasing
    path from v to the target stays strictly increasing, so touching is
    exactly accessibility.  Returns 1/0, or -1 if a queue filled up.
    """
    cap_f = queue_f.shape[0]
    cap_b = queue_b.shape[0]
    w = (np.int64(1) << np.int64(n)) - 1
    nwords = ((1 << N) + 63) >> 6
    for i in range(nwords):
        seen_f[i] = np.uint64(0)
        seen_b[i] = np.uint64(0)
    fh = 0
    ft = 0
    bh = 0
    bt = 0
    queue_f[0] = 0
    ft += 1
    seen_f[0] = np.uint64(1)
    queue_b[0] = np.int32(w)
    bt += 1
    seen_b[w >> 6] |= np.uint64(1) << np.uint64(w & 63)
    while fh < ft and bh < bt:
        if (ft - fh) <= (bt - bh):
            v = np.int64(queue_f[fh])
            fh += 1
            fv = np.uint64(0)
            if v != 0:
                fv = _bits53(key, np.uint64(v))
                if fv >= xbits:
                    continue
            for i in range(N):
                nb = v ^ (np.int64(1) << np.int64(i))
                if nb == w:
                    return 1
                word = nb >> 6
                bit = np.uint64(1) << np.uint64(nb & 63)
                if seen_f[word] & bit:
                    continue
                fnb = _bits53(key, np.uint64(nb))
                if fnb > fv and fnb < xbits:
                    if seen_b[word] & bit:
                        return 1
                    if ft >= cap_f:
                        return -1
                    seen_f[word] |= bit
                    queue_f[ft] = np.int32(nb)
                    ft += 1
        else:
            v = np.int64(queue_b[bh])
            bh += 1
            fv = xbits
            if v != w:
                fv = _bits53(key, np.uint64(v))
            for i in range(N):
                nb = v ^ (np.int64(1) << np.int64(i))
                if nb == 0:
                    # the source's fitness 0 is below every interior value
                    return 1
                if nb == w:
                    continue
                word = nb >> 6
                bit = np.uint64(1) << np.uint64(nb & 63)
                if seen_b[word] & bit:
                    continue
                fnb = _bits53(key, np.uint64(nb))
                if fnb < fv:
                    if seen_f[word] & bit:
                        return 1
                    if bt >= cap_b:
                        return -1
                    seen_b[word] |= bit
                    queue_b[bt] = np.int32(nb)
                    bt += 1
    return 0


@njit(int64(int64, int64, uint64, uint64, int64, uint64[::1], uint64[::1], int32[::1], int32[::1]), cache=True, nogil=True)
def run_trials(N, n, xbits, cell_key, trials, seen_f, seen_b, queue_f, queue_b):
    """Count accessible trials for one Monte Carlo cell.

    Trial t runs bidir_lazy under the key chain(cell_key, t), matching
    rng.derive_key(cell_key, t) bit for bit, so any sharding of trials over
    workers reproduces the same per-trial fields.  Returns -1 if any trial
    overran its queue capacity.
    """
    successes = 0
    for t in range(trials):
        key = _mix_chain(_mix_chain(_KEY_INIT, cell_key), np.uint64(t))
        r = bidir_lazy(N, n, xbits, key, seen_f, seen_b, queue_f, queue_b)
        if r < 0:
            return -1
        successes += r
    return successes


# good-path clause codes shared with seqmeasure (kernel return value)
CLAUSE_OK = 0
CLAUSE_EXACT = 1       # H must equal |i-j| (|i-j| <= 3)
CLAUSE_PAIR = 2        # H in {|i-j|, |i-j|-2} (4 <= |i-j| <= N^(1/5))
CLAUSE_MID_LOW = 3     # H >= |i-j|/(alpha+eps3) in the mid band
CLAUSE_MID_HIGH = 4    # H <= (1/2+eps1)N in the mid band
CLAUSE_UPPER_LOW = 5   # H >= |i-j|/(alpha+eps3) above the mid band
CLAUSE_FAR_LOW = 6     # H >= (1/2+eps1)N beyond
CLAUSE_HP_HIGH = 7     # H' <= (1/2+eps1)beta*N for |i-j| <= gamma(1/2+eps)N
CLAUSE_HP_LOW = 8      # H' >= (1/2+eps1)beta*N for |i-j| > gamma(1/2+eps2)N
CLAUSE_G_LOW = 9       # H >= 2g(1/2)|i-j|/(gamma+eps3) in the general mid range


@njit(Tuple((int64, int64, int64))(int32[::1], int64, int64, int64, int64, int64, int64, int64, float64, float64, boolean, uint64[::1]), cache=True, nogil=True)
def good_pair_scan(entries, n, N, t2, t3, t4, h_cap, hp_cap, slope, slope_g, general, parity):
    """First violated pairwise clause over all vertex pairs of a path.

    entries holds 0-based coordinates; pair (i, j) covers steps i+1..j, and
    H(i,j) is maintained incrementally by toggling per-coordinate parities.
    Pairs are scanned in (i, j) lexicographic order and the first violation
    is returned as (clause code, i, j); (0, -1, -1) means all clauses hold.

    Antipodal mode (general=False) regimes on d = j-i, with integer
    thresholds t2 = floor(N^(1/5)), t3 = floor(alpha(1/2+eps)N),
    t4 = floor(alpha(1/2+eps2)N) and boundaries in the lower regime:
    d <= 3 exact; 4 <= d <= t2 pair; t2 < d <= t3 band [d*slope, h_cap];
    t3 < d <= t4 floor d*slope; d > t4 floor h_cap.  Real-valued bounds
    are floored to integers before comparison, and the caller clamps t2
    to at least 3 so the regimes never overlap the exact clause.

    General mode adds the first-block distance H' (coordinates below n) with
    cap hp_cap for d <= t3, floor hp_cap for d > t4, and the mid-range floor
    H >= d*slope_g for t2 < d <= t4.
    """
    L = entries.shape[0]
    nwords = (N + 63) >> 6
    for i in range(L):
        for k in range(nwords):
            parity[k] = np.uint64(0)
        h = 0
        hp = 0
        for j in range(i + 1, L + 1):
            c = np.int64(entries[j - 1])
            word = c >> 6
            bit = np.uint64(1) << np.uint64(c & 63)
            if parity[word] & bit:
                parity[word] &= ~bit
                h -= 1
                if c < n:
                    hp -= 1
            else:
                parity[word] |= bit
                h += 1
                if c < n:
                    hp += 1
            d = j - i
            if d <= 3:
                if h != d:
                    return CLAUSE_EXACT, i, j
            elif d <= t2:
                if h != d and h != d - 2:
                    return CLAUSE_PAIR, i, j
            if not general:
                if d > t2:
                    if d <= t3:
                        if h < np.int64(d * slope):
                            return CLAUSE_MID_LOW, i, j
                        if h > h_cap:
                            return CLAUSE_MID_HIGH, i, j
                    elif d <= t4:
                        if h < np.int64(d * slope):
                            return CLAUSE_UPPER_LOW, i, j
                    else:
                        if h < h_cap:
                            return CLAUSE_FAR_LOW, i, j
            else:
                if d > 3:
                    if d <= t3 and hp > hp_cap:
                        return CLAUSE_HP_HIGH, i, j
                    if d > t4 and hp < hp_cap:
                        return CLAUSE_HP_LOW, i, j
                    if d > t2 and d <= t4 and h < np.int64(d * slope_g):
                        return CLAUSE_G_LOW, i, j
    return CLAUSE_OK, np.int64(-1), np.int64(-1)

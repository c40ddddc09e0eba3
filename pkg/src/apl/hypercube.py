"""Conditioned fitness fields on the hypercube and accessibility checks.

A field assigns i.i.d. uniform[0,1] values to the vertices of {0,1}^N,
conditioned so the source (all-zeros) carries 0 and the target (first n
bits set) carries x.  A path is accessible when fitness strictly increases
along it; strict increase forbids revisits, so such paths are self-avoiding
even though steps may flip any coordinate in either direction.

The module offers the explicit-field route: materialize the 2^N values,
decide accessibility by BFS over strictly-increasing steps, count open
paths exactly, and enumerate small flip-sequence families for oracle use.
The Monte Carlo harness in ``harness`` re-derives the same values lazily
from the hash stream instead; tests pin the two routes against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .rng import derive_key, uniform_array

VertexId = int

MAX_FIELD_N = 26
MAX_COUNT_N = 12
MAX_ENUM_N = 4
MAX_ENUM_ELL = 8


@dataclass(eq=False)
class FitnessField:
    """One realization of the conditioned fitness landscape.

    values is indexed by vertex bit label; values[u] == 0.0 and
    values[w] == x by construction.  Treat instances as immutable: the
    array may be shared across threads by the accessibility routines.
    """

    N: int
    values: np.ndarray
    u: VertexId
    w: VertexId
    x: float

    def with_gap(self, x: float) -> "FitnessField":
        """Same interior realization with the target value moved to x."""
        if not 0.0 < x <= 1.0:
            raise ValueError(f"gap must lie in (0, 1], got {x}")
        values = self.values.copy()
        values[self.w] = x
        return FitnessField(N=self.N, values=values, u=self.u, w=self.w, x=x)


@dataclass(eq=False)
class AccessResult:
    accessible: bool
    visited_count: int
    path_witness: list[VertexId] | None = field(default=None)


def sample_field(N: int, n: int, x: float, seed: int) -> FitnessField:
    """Draw a conditioned field with target at Hamming distance n.

    The interior values come from a counter-based stream keyed by
    (seed, N, n) only, so two fields differing in x share interiors;
    that is what makes accessibility monotone in x realization-wise.
    """
    if not 1 <= n <= N:
        raise ValueError(f"need 1 <= n <= N, got n={n}, N={N}")
    if not 0.0 < x <= 1.0:
        raise ValueError(f"gap must lie in (0, 1], got {x}")
    if N > MAX_FIELD_N:
        raise ValueError(
            f"N={N} exceeds the explicit-field cap {MAX_FIELD_N}; "
            "use harness.estimate_accessibility for large dimensions"
        )
    key = derive_key(seed, N, n)
    values = uniform_array(key, 1 << N)
    u = 0
    w = (1 << n) - 1
    values[u] = 0.0
    values[w] = x
    distinct = np.unique(values).size == values.size
    assert distinct, "fitness values collided; resample with another seed"
    return FitnessField(N=N, values=values, u=u, w=w, x=x)


def is_accessible(fld: FitnessField, want_witness: bool = True) -> AccessResult:
    """Decide whether a strictly-increasing path runs from u to w.

    BFS from the source, expanding only to strictly larger values below
    the gap; every vertex enters the frontier at most once, so the cost
    is O(2^N * N) with a bitset visited marker.  When a path exists and
    want_witness is set, the witness lists the vertices from u to w.
    """
    size = 1 << fld.N
    values = np.ascontiguousarray(fld.values, dtype=np.float64)
    seen = np.empty((size + 63) >> 6, dtype=np.uint64)
    queue = np.empty(size, dtype=np.int32)
    parent = np.empty(size if want_witness else 1, dtype=np.int32)
    ok, nvis, pred = _kernels.bfs_field(
        values, fld.N, fld.w, seen, queue, parent, want_witness
    )
    witness: list[VertexId] | None = None
    if ok and want_witness:
        witness = [fld.w]
        v = int(pred)
        while v != -1:
            witness.append(v)
            v = int(parent[v]) if v != fld.u else -1
        witness.reverse()
    return AccessResult(accessible=bool(ok), visited_count=int(nvis), path_witness=witness)


def count_accessible_paths(fld: FitnessField) -> int:
    """Exact number of strictly-increasing u-to-w paths.

    Equivalent to depth-first enumeration over increasing neighbors with
    shared subpath counts: processing vertices in decreasing fitness order
    makes every neighbor count final before it is consumed, and Python
    integers keep the result exact at any magnitude.
    """
    if fld.N > MAX_COUNT_N:
        raise ValueError(f"N={fld.N} exceeds the exact-count cap {MAX_COUNT_N}")
    N = fld.N
    size = 1 << N
    vals = fld.values.tolist()
    x = vals[fld.w]
    order = np.argsort(fld.values)[::-1]
    cnt = [0] * size
    cnt[fld.w] = 1
    for vv in order.tolist():
        if vv == fld.w:
            continue
        fv = vals[vv]
        if fv >= x and vv != fld.u:
            continue
        total = 0
        for i in range(N):
            nb = vv ^ (1 << i)
            if vals[nb] > fv:
                total += cnt[nb]
        cnt[vv] = total
    return cnt[fld.u]


def enumerate_sequences(n: int, N: int, ell: int) -> list[tuple[int, ...]]:
    """All flip sequences in {1..N}^ell whose endpoint has first n bits set.

    A sequence qualifies when each coordinate k <= n appears an odd number
    of times and each coordinate k > n an even number.  Exhaustive filter,
    meant as a small-scale oracle; the returned list has M(n, ell) entries.
    """
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    if N > MAX_ENUM_N or ell > MAX_ENUM_ELL:
        raise ValueError(
            f"enumeration capped at N <= {MAX_ENUM_N}, ell <= {MAX_ENUM_ELL}"
        )
    out: list[tuple[int, ...]] = []
    for seq in itertools.product(range(1, N + 1), repeat=ell):
        ok = True
        for k in range(1, N + 1):
            c = seq.count(k)
            if (c % 2 == 1) != (k <= n):
                ok = False
                break
        if ok:
            out.append(seq)
    return out


def apply_sequence(seq: tuple[int, ...], start: VertexId = 0) -> list[VertexId]:
    """Vertex trajectory of a flip sequence (1-based coordinates)."""
    path = [start]
    v = start
    for a in seq:
        v ^= 1 << (a - 1)
        path.append(v)
    return path

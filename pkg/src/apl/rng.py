"""Counter-based splittable randomness.

Monte Carlo reproducibility here rests on a 64-bit finalizer (the splitmix64
mixing function) used in two roles:

* ``derive_key`` chains the mixer over integer tuples such as
  (master seed, dimension, offset index, trial index), yielding one
  independent 64-bit stream key per Monte Carlo cell or trial.  Keys are
  order-independent: the work can be sharded across any number of threads
  and the results merge identically.
* ``uniform_from_key`` / ``uniform_array`` turn (key, counter) pairs into
  uniform variates on [0, 1) with 53-bit resolution, giving random access
  into a virtual random field without materializing it.

The same constants are used by the numba kernels in ``_kernels``; tests
assert the two implementations agree bit for bit.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB
KEY_INIT = 0x243F6A8885A308D3  # first 64 fractional bits of pi
INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a Python integer, mod 2**64."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * MIX_B) & MASK64
    return z ^ (z >> 31)


def derive_key(*parts: int) -> int:
    """Hash an integer tuple into a 64-bit stream key.

    Chaining the mixer over the parts keeps distinct tuples on distinct
    streams; negative ints are folded into the 64-bit ring first.
    """
    acc = KEY_INIT
    for p in parts:
        acc = mix64((acc + GOLDEN_GAMMA * (int(p) & MASK64)) & MASK64)
    return acc


def bits53_from_key(key: int, counter: int) -> int:
    """53-bit output for (key, counter); matches the numba kernel exactly."""
    z = (key + ((counter + 1) & MASK64) * GOLDEN_GAMMA) & MASK64
    return mix64(z) >> 11


def uniform_from_key(key: int, counter: int) -> float:
    """Uniform [0,1) variate at a given counter position of a keyed stream."""
    return bits53_from_key(key, counter) * INV_2_53


def uniform_array(key: int, n: int) -> np.ndarray:
    """Vectorized uniforms for counters 0..n-1 of a keyed stream.

    numpy unsigned arithmetic wraps silently, which is exactly the mod-2**64
    semantics the scalar path uses.
    """
    ctr = np.arange(1, n + 1, dtype=np.uint64)
    z = np.uint64(key) + ctr * np.uint64(GOLDEN_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_A)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_B)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)) * INV_2_53

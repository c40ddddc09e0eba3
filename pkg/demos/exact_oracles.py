"""
Exact cross-checks between independent routes
=============================================

Every statistical claim in this package is anchored somewhere exact:
integer sequence counts against brute enumeration, a series derivative
against a closed form, order-statistic moments against the Dirichlet
formula, and the mean number of increasing paths against its bound.
This script runs small versions of each anchor and prints both sides.
"""

import itertools
import math
from collections import Counter

import numpy as np

from apl import analytic, hypercube, rng

# 1. Sequence counts.  m_coefficient(n, N, ell) counts length-ell update
# sequences over N coordinates whose odd-count coordinates are exactly
# the first n.  Brute force agrees integer-for-integer.
print("coefficient extraction vs enumeration (N=3):")
for n in (1, 2, 3):
    for ell in (n, n + 2, n + 4):
        brute = 0
        for seq in itertools.product((1, 2, 3), repeat=ell):
            c = Counter(seq)
            if {j for j in (1, 2, 3) if c[j] % 2 == 1} == set(range(1, n + 1)):
                brute += 1
        lib = analytic.m_coefficient(n, 3, ell)
        tag = "ok" if brute == lib else "MISMATCH"
        print(f"  n={n} ell={ell}: enumeration {brute:6d}  coefficient {lib:6d}  {tag}")
print()

# 2. The mean path count has a closed form; the term-by-term series it
# differentiates must land on the same number.
n, N, x = 4, 6, 0.7
series = sum(
    analytic.m_coefficient(n, N, ell) * x ** (ell - 1) / math.factorial(ell - 1)
    for ell in range(1, 60)
)
closed = analytic.first_moment_upper(n, N, x)
print(f"series {series:.12f} vs closed form {closed:.12f}")
print()

# 3. Order-statistic moments.  The i-th of L-1 sorted uniforms on [0,x]
# is x * Beta(i, L-i); simulate and compare a third moment.
gen = np.random.default_rng(5)
L, i1, b1 = 40, 7, 3.0
u = np.sort(gen.random((200_000, L - 1)), axis=1)
mc = float((u[:, i1 - 1] ** b1).mean())
exact = analytic.spacing_moment_exact(analytic.SpacingQuery(L=L, x=1.0, i1=i1, beta1=b1))
print(f"E X_({i1})^{b1:.0f} with L={L}: monte carlo {mc:.6f}, dirichlet formula {exact:.6f}")
print()

# 4. Mean number of accessible increasing paths across random fields,
# against the analytic first-moment bound.
N, x = 6, 0.8
counts = [
    hypercube.count_accessible_paths(hypercube.sample_field(N, N, x, seed=rng.derive_key(42, t)))
    for t in range(4000)
]
mean = float(np.mean(counts))
se = float(np.std(counts, ddof=1) / math.sqrt(len(counts)))
bound = analytic.first_moment_upper(N, N, x)
print(f"mean accessible-path count {mean:.3f} +/- {se:.3f}, first-moment bound {bound:.3f}")

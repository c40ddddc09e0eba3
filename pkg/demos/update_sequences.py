"""
Conditioned update sequences and the goodness filter
====================================================

A path on the hypercube is a sequence of coordinate flips.  Conditioning
the walk to end at a target turns the per-coordinate flip counts into
tilted Poisson laws (odd counts for coordinates the target flips, even
for the rest).  This script samples those laws, inspects one sequence
closely, and then measures how often a sampled sequence passes the
structural goodness checks used in the second-moment argument.
"""

from collections import Counter

import numpy as np

from apl import analytic, seqmeasure

x0 = analytic.solve_x0(1.0)
rng = np.random.default_rng(11)

# Flip-count laws.  At the threshold gap, an odd coordinate flips once
# with probability ~0.88; the expected count is x*coth(x) = alpha.
print("odd-count pmf at x0 :", [round(seqmeasure.pmf_F1(j, x0), 5) for j in (1, 3, 5)])
print("even-count pmf at x0:", [round(seqmeasure.pmf_F2(j, x0), 5) for j in (0, 2, 4)])
draws = seqmeasure.sample_F1(x0, rng, size=200_000)
print(f"mean odd count {draws.mean():.5f} vs alpha {x0 / np.tanh(x0):.5f}")
print()

# One continuous-model draw in moderate dimension, up close.
N = 12
seq = seqmeasure.sample_continuous(N, N, x0, rng)
print(f"N={N} sequence of length {seq.L}: {seq.entries.tolist()}")
T, O, O1 = seqmeasure.interval_stats(seq, (0.0, 0.5))
print(f"first half: {T} updates, {O} coordinates odd so far")
profile = seqmeasure.hamming_profile(seq)
print("distance from start after each update:", [profile.H(0, i) for i in range(seq.L + 1)])
print()

# The goodness checker: a battery of clauses on length, pair structure,
# occupancy and drift.  At the threshold roughly a quarter of draws in
# high dimension pass; the rest mostly die on close pairs of positions
# that revisit a neighborhood.
N = 3000
cfg = seqmeasure.GoodnessConfig(
    constants=analytic.phase_constants(beta=1.0, epsilon=0.05), mode="antipodal", N=N
)
verdicts = Counter()
for _ in range(300):
    seq = seqmeasure.sample_continuous(N, N, x0, rng)
    good, clause = seqmeasure.is_good(seq, cfg)
    verdicts["pass" if good else clause] += 1
print(f"goodness verdicts over 300 draws at N={N}:")
for clause, count in verdicts.most_common():
    print(f"  {count:4d}  {clause}")

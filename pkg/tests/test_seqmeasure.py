"""Occurrence laws, pinned-sequence measure, profiles, and the clause checker."""

import itertools
import math
from collections import Counter

import numpy as np
import pytest
import scipy.stats

from apl import analytic, seqmeasure
from apl.seqmeasure import GoodnessConfig, UpdateSequence

X0 = math.asinh(1.0)


def antipodal_config(N, epsilon=0.05):
    return GoodnessConfig(
        constants=analytic.phase_constants(1.0, epsilon=epsilon),
        mode="antipodal",
        N=N,
    )


# --------------------------------------------------------- occurrence laws


def test_pmf_f1_values_and_support():
    assert seqmeasure.pmf_F1(1, X0) == pytest.approx(X0, rel=1e-12)  # sinh(x0) = 1
    assert seqmeasure.pmf_F1(2, 0.7) == 0.0
    assert seqmeasure.pmf_F1(-1, 0.7) == 0.0
    assert seqmeasure.pmf_F1(3, 0.5) == pytest.approx(0.5**3 / (6 * math.sinh(0.5)))


def test_pmf_f2_values_and_support():
    assert seqmeasure.pmf_F2(0, X0) == pytest.approx(1 / math.sqrt(2.0), rel=1e-12)
    assert seqmeasure.pmf_F2(1, 0.7) == 0.0
    assert seqmeasure.pmf_F2(2, 0.5) == pytest.approx(0.5**2 / (2 * math.cosh(0.5)))


@pytest.mark.parametrize("x", [0.1, 0.5, X0, 1.5])
def test_pmf_normalization(x):
    assert sum(seqmeasure.pmf_F1(j, x) for j in range(1, 60, 2)) == pytest.approx(
        1.0, abs=1e-12
    )
    assert sum(seqmeasure.pmf_F2(j, x) for j in range(0, 60, 2)) == pytest.approx(
        1.0, abs=1e-12
    )


def test_sample_f1_matches_pmf_chi_square():
    x = 0.88137
    draws = seqmeasure.sample_F1(x, seed=42, size=100_000)
    assert np.all(draws % 2 == 1)
    support = [1, 3, 5]
    observed = [np.count_nonzero(draws == v) for v in support]
    observed.append(len(draws) - sum(observed))
    expected = [seqmeasure.pmf_F1(v, x) * len(draws) for v in support]
    expected.append(len(draws) - sum(expected))
    stat, p = scipy.stats.chisquare(observed, expected)
    assert p > 1e-3


def test_sample_f2_mean():
    # E U = x tanh x for the even law
    x = 0.5
    draws = seqmeasure.sample_F2(x, seed=7, size=1_000_000)
    assert np.all(draws % 2 == 0)
    want = x * math.tanh(x)
    sd = float(np.std(draws, ddof=1))
    assert abs(draws.mean() - want) < 3 * sd / math.sqrt(len(draws))
    assert want == pytest.approx(0.23105, abs=1e-5)


def test_sample_scalar_mode_and_determinism():
    a = seqmeasure.sample_F1(0.9, seed=5)
    assert isinstance(a, int) and a % 2 == 1
    assert seqmeasure.sample_F2(0.9, seed=5) % 2 == 0
    assert np.array_equal(
        seqmeasure.sample_F1(0.9, seed=11, size=64),
        seqmeasure.sample_F1(0.9, seed=11, size=64),
    )


def test_law_domain_errors():
    with pytest.raises(ValueError):
        seqmeasure.pmf_F1(1, 0.0)
    with pytest.raises(ValueError):
        seqmeasure.sample_F2(-0.2, seed=1)


# ------------------------------------------------- endpoint-pinned measure


def test_pmf_mu_single_flip():
    seq = UpdateSequence(entries=[1], N=1, n=1)
    assert seqmeasure.pmf_mu_kn(seq, k=1, n=1, N=1, x=0.5) == pytest.approx(
        1.0 / math.cosh(0.5)
    )


def test_pmf_mu_depends_only_on_length():
    a = seqmeasure.pmf_mu_kn([1, 2, 2, 2, 1, 1], k=1, n=2, N=2, x=0.4)
    b = seqmeasure.pmf_mu_kn([2, 1, 1, 2, 2, 1], k=1, n=2, N=2, x=0.4)
    assert a == b


def test_pmf_mu_validation():
    with pytest.raises(ValueError):
        seqmeasure.pmf_mu_kn([1, 2], k=1, n=2, N=2, x=0.4)  # ends with 2, not k
    with pytest.raises(ValueError):
        seqmeasure.pmf_mu_kn([2, 2], k=2, n=2, N=2, x=0.4)  # coord 1 missing (parity)
    with pytest.raises(ValueError):
        seqmeasure.pmf_mu_kn([1, 3], k=3, n=1, N=2, x=0.4)  # coordinate out of range
    with pytest.raises(ValueError):
        seqmeasure.pmf_mu_kn([1], k=0, n=1, N=1, x=0.4)


def _valid_sequences_ending_in_k(k, n, N, ell):
    """Brute-force list of parity-valid sequences of length ell ending in k."""
    out = []
    for prefix in itertools.product(range(1, N + 1), repeat=ell - 1):
        seq = prefix + (k,)
        c = Counter(seq)
        if all((c[i] % 2 == 1) == (i <= n) for i in range(1, N + 1)):
            out.append(seq)
    return out


@pytest.mark.parametrize("k,n", [(1, 1), (2, 1), (1, 2)])
def test_pmf_mu_total_mass_with_analytic_tail(k, n):
    # enumerated mass up to length 6 plus the generating-function tail is 1
    N, x = 2, 0.4
    if k <= n:
        norm = math.sinh(x) ** (n - 1) * math.cosh(x) ** (N - n + 1)
    else:
        norm = math.sinh(x) ** (n + 1) * math.cosh(x) ** (N - n - 1)
    enumerated = 0.0
    series_head = 0.0
    for ell in range(1, 7):
        seqs = _valid_sequences_ending_in_k(k, n, N, ell)
        for seq in seqs:
            enumerated += seqmeasure.pmf_mu_kn(np.array(seq), k=k, n=n, N=N, x=x)
        series_head += len(seqs) * x ** (ell - 1) / math.factorial(ell - 1)
    tail = (norm - series_head) / norm
    assert tail >= 0.0
    assert enumerated + tail == pytest.approx(1.0, abs=1e-9)


def test_sample_mu_structure():
    for seed in range(50):
        seq = seqmeasure.sample_mu_kn(k=2, n=3, N=5, x=0.7, seed=seed)
        assert seq.entries[-1] == 2
        c = Counter(seq.entries.tolist())
        for i in range(1, 6):
            assert (c[i] % 2 == 1) == (i <= 3)


def test_sample_mu_matches_pmf_frequency():
    # frequency of the one-flip sequence at N=1 is the pmf value 1/cosh(x)
    x, draws = 0.5, 10_000
    rng = np.random.default_rng(314)
    hits = sum(
        seqmeasure.sample_mu_kn(k=1, n=1, N=1, x=x, seed=rng).L == 1
        for _ in range(draws)
    )
    want = 1.0 / math.cosh(x)
    se = math.sqrt(want * (1 - want) / draws)
    assert abs(hits / draws - want) < 3.5 * se


def test_sample_mu_validation():
    with pytest.raises(ValueError):
        seqmeasure.sample_mu_kn(k=3, n=1, N=2, x=0.4, seed=0)


# ----------------------------------------------------- continuous placement


def test_sample_continuous_structure():
    seq = seqmeasure.sample_continuous(30, 12, 0.8, seed=2)
    assert seq.N == 30 and seq.n == 12
    assert seq.positions is not None and seq.positions.shape == seq.entries.shape
    assert np.all(np.diff(seq.positions) >= 0)
    occ = seq.occupancy()
    assert np.all(occ.U[:12] % 2 == 1)
    assert np.all(occ.U[12:] % 2 == 0)
    assert occ.L == seq.L == occ.U.sum()


def test_sample_continuous_mean_length():
    # each antipodal coordinate contributes x0*coth(x0) flips on average
    N, draws = 100, 10_000
    rng = np.random.default_rng(77)
    alpha = analytic.phase_constants(1.0).alpha
    lengths = np.array(
        [seqmeasure.sample_continuous(N, N, X0, seed=rng).L for _ in range(draws)]
    )
    se = lengths.std(ddof=1) / math.sqrt(draws)
    assert abs(lengths.mean() - alpha * N) < 3 * se


def test_interval_stats_full_and_empty():
    seq = seqmeasure.sample_continuous(20, 20, X0, seed=8)
    T, O, Op = seqmeasure.interval_stats(seq, (0.0, 1.0))
    assert T == seq.L
    assert O == 20 and Op == 20  # every antipodal coordinate ends odd
    assert seqmeasure.interval_stats(seq, (0.7, 0.2)) == (0, 0, 0)


def test_interval_stats_split_is_consistent():
    seq = seqmeasure.sample_continuous(25, 10, 0.9, seed=3)
    t1, _, _ = seqmeasure.interval_stats(seq, (0.0, 0.37))
    eps = 1e-12  # closed intervals: nudge past the boundary
    t2, _, _ = seqmeasure.interval_stats(seq, (0.37 + eps, 1.0))
    assert t1 + t2 == seq.L


def test_interval_stats_needs_positions():
    seq = UpdateSequence(entries=[1, 2, 1], N=2, n=1)
    with pytest.raises(ValueError):
        seqmeasure.interval_stats(seq, (0.0, 0.5))


def test_interval_odd_fraction_tracks_profile():
    # fraction of odd coordinates on [0, t] concentrates on the p_odd curve
    N, draws, t = 200, 2_000, 0.5
    rng = np.random.default_rng(123)
    fracs = np.empty(draws)
    for i in range(draws):
        seq = seqmeasure.sample_continuous(N, N, X0, seed=rng)
        _, O, _ = seqmeasure.interval_stats(seq, (0.0, t))
        fracs[i] = O / N
    want = analytic.p_odd(t, X0, "odd")  # exactly 1/2 at the root gap
    assert want == pytest.approx(0.5, rel=1e-12)
    se = fracs.std(ddof=1) / math.sqrt(draws)
    assert abs(fracs.mean() - want) < 3 * se


def test_concentration_of_interval_counts():
    # 99th percentile of |T/(Lt) - 1| stays under the pinned bounds
    draws = 1000
    rng = np.random.default_rng(123)
    bounds = {0.1: 0.12, 0.3: 0.065, 0.5: 0.045}
    devs = {t: np.empty(draws) for t in bounds}
    for i in range(draws):
        seq = seqmeasure.sample_continuous(5000, 5000, X0, seed=rng)
        for t in bounds:
            T, _, _ = seqmeasure.interval_stats(seq, (0.0, t))
            devs[t][i] = abs(T / (seq.L * t) - 1.0)
    for t, bound in bounds.items():
        assert np.quantile(devs[t], 0.99) <= bound, t


# ---------------------------------------------------------------- profiles


def xor_profile_oracle(entries, N, n):
    """Direct vertex simulation: XOR accumulate, then compare bit sets."""
    verts = [0]
    for a in entries:
        verts.append(verts[-1] ^ (1 << (a - 1)))

    def H(i, j):
        return bin(verts[i] ^ verts[j]).count("1")

    def Hp(i, j):
        return bin((verts[i] ^ verts[j]) & ((1 << n) - 1)).count("1")

    return verts, H, Hp


def test_profile_matches_xor_simulation():
    rng = np.random.default_rng(11)
    for _ in range(60):
        L = int(rng.integers(1, 21))
        n = int(rng.integers(1, 7))
        entries = rng.integers(1, 7, size=L).astype(np.int32)
        seq = UpdateSequence(entries=entries, N=6, n=n)
        prof = seqmeasure.hamming_profile(seq)
        _, H, Hp = xor_profile_oracle(entries.tolist(), 6, n)
        for i in range(L + 1):
            for j in range(i, L + 1):
                assert prof.H(i, j) == H(i, j)
                assert prof.Hprime(i, j) == Hp(i, j)


def test_profile_wide_coordinates():
    # more than 64 coordinates exercises the multi-word parity path
    rng = np.random.default_rng(12)
    entries = rng.integers(1, 201, size=300).astype(np.int32)
    seq = UpdateSequence(entries=entries, N=200, n=70)
    prof = seqmeasure.hamming_profile(seq)
    _, H, Hp = xor_profile_oracle(entries.tolist(), 200, 70)
    for i, j in [(0, 300), (0, 150), (17, 290), (100, 101), (42, 42)]:
        assert prof.H(i, j) == H(i, j)
        assert prof.Hprime(i, j) == Hp(i, j)


def test_profile_parity_invariant():
    rng = np.random.default_rng(13)
    entries = rng.integers(1, 9, size=40).astype(np.int32)
    prof = seqmeasure.hamming_profile(UpdateSequence(entries=entries, N=8, n=8))
    for i in range(41):
        for j in range(i, 41):
            assert prof.H(i, j) % 2 == (j - i) % 2
            assert prof.H(i, j) <= j - i


def test_profile_single_step_and_cancel():
    seq = UpdateSequence(entries=[4, 4], N=6, n=6)
    prof = seqmeasure.hamming_profile(seq)
    assert prof.H(0, 1) == 1
    assert prof.H(1, 2) == 1
    assert prof.H(0, 2) == 0


def test_profile_drift_counts():
    entries = [1, 5, 2, 5, 1, 3]
    prof = seqmeasure.hamming_profile(UpdateSequence(entries=entries, N=5, n=3))
    # first-block (coords 1..3) raw update counts, multiplicity included
    assert [prof.D_prefix(i) for i in range(7)] == [0, 1, 1, 2, 2, 3, 4]
    assert prof.D_suffix(1) == 1
    assert prof.D_suffix(3) == 2
    assert prof.D_suffix(6) == 4


def test_profile_index_errors():
    prof = seqmeasure.hamming_profile(UpdateSequence(entries=[1, 2], N=2, n=2))
    with pytest.raises(IndexError):
        prof.H(0, 3)


# ----------------------------------------------------------------- goodness


def test_thresholds_antipodal_n5000():
    cfg = antipodal_config(5000)
    th = cfg.thresholds()
    assert cfg.n == 5000
    assert th["pair_max"] == 5  # floor(5000^(1/5))
    assert th["len_lo"] == 5920 and th["len_hi"] == 6543
    assert th["h_cap"] == 3618
    assert th["mid_max"] == 3427 and th["upper_max"] == 6063
    assert th["slope"] == pytest.approx(1.0 / (1.2464504 + 0.05**0.125), rel=1e-5)


def test_thresholds_pair_max_floor():
    # tiny N keeps the exact-distance window at the minimum width 3
    assert antipodal_config(6).thresholds()["pair_max"] == 3


def test_good_rejects_shortest_path():
    # flipping each coordinate exactly once is below the length window
    N = 100
    seq = UpdateSequence(entries=np.arange(1, N + 1, dtype=np.int32), N=N, n=N)
    ok, clause = seqmeasure.is_good(seq, antipodal_config(N))
    assert not ok and clause == "length window"


def test_good_rejects_leading_repeat():
    # valid length, immediate repeat at the head: first scanned pair is (0, 2)
    N = 100
    cfg = antipodal_config(N)
    lo = cfg.thresholds()["len_lo"]  # 118
    body = [k % N + 1 for k in range(3, lo + 1)]
    entries = np.array([7, 7, 1] + body, dtype=np.int32)
    assert lo <= len(entries) <= cfg.thresholds()["len_hi"]
    ok, clause = seqmeasure.is_good(UpdateSequence(entries=entries, N=N, n=N), cfg)
    assert not ok and clause == "|i-j|=2"


def test_good_interior_repeat_reports_distance_three():
    # an interior adjacent repeat is first caught by the window one step
    # earlier, so the reported clause is the distance-3 pair
    N = 100
    cfg = antipodal_config(N)
    entries = [k % N + 1 for k in range(120)]
    entries[50] = entries[51] = 33
    entries = np.array(entries, dtype=np.int32)
    ok, clause = seqmeasure.is_good(UpdateSequence(entries=entries, N=N, n=N), cfg)
    assert not ok and clause == "|i-j|=3"


def test_good_accepts_pilot_rate_of_continuous_draws():
    # pinned by a 1000-draw pilot at rate 0.264 (se 0.014); 300 fresh draws
    # must stay above 0.15
    cfg = antipodal_config(5000)
    rng = np.random.default_rng(20260816)
    draws = 300
    hits = 0
    for _ in range(draws):
        seq = seqmeasure.sample_continuous(5000, 5000, X0, seed=rng)
        ok, _ = seqmeasure.is_good(seq, cfg)
        hits += ok
    assert hits / draws >= 0.15


def test_good_passes_are_self_avoiding():
    # a good sequence induces a path visiting distinct vertices
    cfg = antipodal_config(300)
    rng = np.random.default_rng(6)
    checked = 0
    for _ in range(400):
        seq = seqmeasure.sample_continuous(300, 300, X0, seed=rng)
        ok, _ = seqmeasure.is_good(seq, cfg)
        if not ok:
            continue
        verts, _, _ = xor_profile_oracle(seq.entries.tolist(), 300, 300)
        assert len(set(verts)) == len(verts)
        checked += 1
    assert checked > 0


def test_good_drift_prefix_violation():
    # beta=1/2 with a tiny epsilon activates the drift clause: three
    # first-block updates at the head exceed delta*i at i=1
    c = analytic.phase_constants(0.5, epsilon=1e-9)
    cfg = GoodnessConfig(constants=c, mode="general", N=6)
    assert cfg.n == 3
    th = cfg.thresholds()
    assert th["occ1_lo"] == th["occ1_hi"] == 3
    assert th["occ2_lo"] == th["occ2_hi"] == 1
    assert th["delta"] < 1.0
    seq = UpdateSequence(entries=[1, 2, 3, 4], N=6, n=3)
    ok, clause = seqmeasure.is_good(seq, cfg)
    assert not ok and clause == "drift prefix"


def test_good_drift_suffix_violation():
    c = analytic.phase_constants(0.5, epsilon=1e-9)
    cfg = GoodnessConfig(constants=c, mode="general", N=6)
    seq = UpdateSequence(entries=[4, 3, 2, 1], N=6, n=3)
    ok, clause = seqmeasure.is_good(seq, cfg)
    assert not ok and clause == "drift suffix"


def test_good_general_occupancy_violation():
    c = analytic.phase_constants(0.5, epsilon=0.05)
    cfg = GoodnessConfig(constants=c, mode="general", N=40)
    # all updates in the first block: second-block occupancy window fails
    seq = UpdateSequence(entries=[1] * 25, N=40, n=20)
    ok, clause = seqmeasure.is_good(seq, cfg)
    assert not ok
    assert clause in ("occupancy first block", "occupancy second block")


def test_good_general_mode_on_continuous_draws():
    # the checker runs end to end at beta=1/2 and the drift clause is
    # vacuous at practical epsilon (delta > 1), so failures are the usual
    # pair clauses or occupancy
    c = analytic.phase_constants(0.5, epsilon=0.05)
    cfg = GoodnessConfig(constants=c, mode="general", N=2000)
    assert cfg.thresholds()["delta"] > 1.0
    rng = np.random.default_rng(55)
    results = Counter()
    for _ in range(100):
        seq = seqmeasure.sample_continuous(2000, cfg.n, c.x0, seed=rng)
        ok, clause = seqmeasure.is_good(seq, cfg)
        results[clause if not ok else "pass"] += 1
    assert results["drift prefix"] == 0 and results["drift suffix"] == 0
    assert results["pass"] > 0


def test_goodness_config_validation():
    c = analytic.phase_constants(1.0)
    with pytest.raises(ValueError):
        GoodnessConfig(constants=c, mode="weird", N=10)
    with pytest.raises(ValueError):
        GoodnessConfig(constants=c, mode="antipodal", N=0)


def test_update_sequence_validation():
    with pytest.raises(ValueError):
        UpdateSequence(entries=[1, 2], N=2, n=1, positions=[0.2])
    with pytest.raises(ValueError):
        UpdateSequence(entries=[1, 2], N=2, n=1, positions=[0.9, 0.2])
    seq = UpdateSequence(entries=[3, 1], N=3, n=1)
    with pytest.raises(ValueError):
        seqmeasure.hamming_profile(UpdateSequence(entries=[9], N=3, n=1))
    assert seq.L == 2

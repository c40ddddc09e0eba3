"""Closed-form quantities behind the accessibility threshold.

Everything in this module is a pure, deterministic function: the threshold
constants for strictly-increasing-fitness percolation on the hypercube, the
parity-constrained sequence counts and their generating-function sums, the
odd-occupancy probabilities of the continuous placement model, and the
moments of uniform order-statistic spacings.

Conventions: the hypercube is {0,1}^N, the two marked vertices sit at Hamming
distance n, and the fitness gap between them is x.  The threshold machinery
is driven by f(x) = (sinh x)^beta (cosh x)^(1-beta) where beta = n/N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

_X0_BRACKET_HI = 3.0
_X0_BRACKET_LO = 1e-6
_MAX_NEWTON_ITERS = 200


def eval_f(x: float, beta: float) -> float:
    """(sinh x)^beta * (cosh x)^(1-beta); strictly increasing in x > 0."""
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    _check_beta(beta)
    return math.sinh(x) ** beta * math.cosh(x) ** (1.0 - beta)


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")


def _f_log_derivative(x: float, beta: float) -> float:
    """d/dx log f = beta*coth(x) + (1-beta)*tanh(x)."""
    return beta / math.tanh(x) + (1.0 - beta) * math.tanh(x)


def solve_x0(beta: float, tol: float = 1e-12) -> float:
    """Root of f(x) = 1 on (0, 3].

    Bisection brackets the unique root (f increases from 0 through 1), then
    Newton polishes it.  For beta = 1 the root is asinh(1) = ln(1 + sqrt 2).
    """
    _check_beta(beta)
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    lo, hi = _X0_BRACKET_LO, _X0_BRACKET_HI
    if eval_f(hi, beta) < 1.0:
        raise RuntimeError("root bracket (0, 3] does not contain f(x)=1")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if eval_f(mid, beta) < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6:
            break
    x = 0.5 * (lo + hi)
    for _ in range(_MAX_NEWTON_ITERS):
        fx = eval_f(x, beta)
        step = (fx - 1.0) / (fx * _f_log_derivative(x, beta))
        x -= step
        if abs(eval_f(x, beta) - 1.0) <= tol:
            return x
    raise RuntimeError(
        f"x0 solve did not reach |f(x)-1| <= {tol} after {_MAX_NEWTON_ITERS} Newton steps"
    )


def critical_x(N: int, beta: float = 1.0) -> float:
    """Finite-size threshold gap: x0 - (1/f'(x0)) * ln(N)/N.

    Since f(x0) = 1, f'(x0) = beta*coth(x0) + (1-beta)*tanh(x0); at beta = 1
    that is coth(asinh 1) = sqrt 2, so the correction is (sqrt 2/2) ln(N)/N.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    x0 = solve_x0(beta)
    f_prime = _f_log_derivative(x0, beta)  # times f(x0) = 1
    return x0 - math.log(N) / (f_prime * N)


@dataclass(frozen=True)
class PhaseConstants:
    """The analytic constants of the threshold, bundled.

    alpha is the expected path-length-per-distance ratio in the antipodal
    case (x0*coth x0); gamma generalizes it to arbitrary beta as x0*f'(x0).
    The epsilon ladder (eps1 = eps^(1/2), eps2 = eps^(1/4),
    eps3 = eps4 = eps^(1/8)) parameterizes the good-path clauses, and delta
    bounds the fraction of first-block updates in a path prefix.
    """

    beta: float
    x0: float
    f_prime_x0: float
    alpha: float
    gamma: float
    epsilon: float
    epsilon1: float
    epsilon2: float
    epsilon3: float
    epsilon4: float
    delta: float


def phase_constants(beta: float = 1.0, epsilon: float = 0.05) -> PhaseConstants:
    """Solve for x0 and assemble every derived constant for this beta."""
    _check_beta(beta)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    x0 = solve_x0(beta)
    f_prime = _f_log_derivative(x0, beta)
    coth_x0 = 1.0 / math.tanh(x0)
    tanh_x0 = math.tanh(x0)
    eps4 = epsilon ** 0.125
    return PhaseConstants(
        beta=beta,
        x0=x0,
        f_prime_x0=f_prime,
        alpha=x0 * coth_x0,
        gamma=x0 * f_prime,
        epsilon=epsilon,
        epsilon1=epsilon**0.5,
        epsilon2=epsilon**0.25,
        epsilon3=epsilon**0.125,
        epsilon4=eps4,
        delta=beta * coth_x0 / (beta * coth_x0 + (1.0 - beta) * tanh_x0) + eps4,
    )


def m_coefficient(n: int, N: int, ell: int) -> int:
    """Exact count of sequences in {1..N}^ell whose first n coordinates
    appear an odd number of times each and the rest an even number.

    Integer dynamic programming over (coordinate, used length): coordinate c
    contributes binomial(l, k) arrangements for each parity-admissible count
    k, which is the ell!-normalized convolution of the per-coordinate parity
    series.  Python integers are unbounded, so the count is always exact.
    """
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    if ell < n or (ell - n) % 2:
        return 0
    # dp[l] = count of parity-valid arrangements of length l over the
    # coordinates processed so far, divided into the first l slots.
    dp = [0] * (ell + 1)
    dp[0] = 1
    for c in range(1, N + 1):
        start = 1 if c <= n else 0
        new = [0] * (ell + 1)
        for l in range(ell + 1):
            d = dp[l]
            if not d:
                continue
            for k in range(start, ell - l + 1, 2):
                new[l + k] += d * math.comb(l + k, k)
        dp = new
    return dp[ell]


def m_series_sum(n: int, N: int, x: float) -> float:
    """Closed form of sum_ell M(n,ell) x^ell / ell! = (sinh x)^n (cosh x)^(N-n)."""
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    return math.sinh(x) ** n * math.cosh(x) ** (N - n)


def first_moment_upper(n: int, N: int, x: float) -> float:
    """Upper bound on the expected number of increasing paths between the
    marked vertices: the x-derivative of (sinh x)^n (cosh x)^(N-n),

        (sinh x)^(n-1) (cosh x)^(N-n-1) (n cosh^2 x + (N-n) sinh^2 x),

    which for n = N reduces to N (sinh x)^(N-1) cosh x.
    """
    if not 1 <= n <= N:
        raise ValueError(f"need 1 <= n <= N, got n={n}, N={N}")
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    sh, ch = math.sinh(x), math.cosh(x)
    return sh ** (n - 1) * ch ** (N - n - 1) * (n * ch * ch + (N - n) * sh * sh)


def path_open_probability(ell: int, x: float) -> float:
    """Probability a fixed path of length ell is increasing inside gap x.

    The ell-1 interior values are i.i.d. uniform on [0,1]; they must fall in
    (0, x) in increasing order: x^(ell-1)/(ell-1)!.
    """
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    if not 0 < x <= 1:
        raise ValueError(f"x must lie in (0, 1], got {x}")
    return x ** (ell - 1) / math.factorial(ell - 1)


def p_odd(t: float, x: float, parity: str = "odd") -> float:
    """Probability that a coordinate has been flipped an odd number of times
    by time t in the continuous placement model.

    parity='odd': a coordinate whose total flip count is odd,
        sinh(x t) cosh(x (1-t)) / sinh(x).
    parity='even': a coordinate whose total flip count is even,
        sinh(x t) sinh(x (1-t)) / cosh(x).
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    if parity == "odd":
        return math.sinh(x * t) * math.cosh(x * (1.0 - t)) / math.sinh(x)
    if parity == "even":
        return math.sinh(x * t) * math.sinh(x * (1.0 - t)) / math.cosh(x)
    raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")


def g_profile(t: float, constants: PhaseConstants) -> float:
    """Expected odd-coordinate fraction profile at time t:
    beta*p_odd(t, x0, odd) + (1-beta)*p_odd(t, x0, even).

    g(0) = 0 and g(1) = beta.
    """
    b = constants.beta
    return b * p_odd(t, constants.x0, "odd") + (1.0 - b) * p_odd(t, constants.x0, "even")


@dataclass(frozen=True)
class SpacingQuery:
    """Moment query for the i1-th order statistic of L-1 uniforms on [0, x].

    t is the moment-to-index ratio used by the closed-form bound, which is
    valid when beta1 <= t*(i1 - 1).
    """

    L: int
    i1: int
    beta1: int
    x: float
    t: float = 1.0

    def __post_init__(self):
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if not 1 <= self.i1 < self.L:
            raise ValueError(f"need 1 <= i1 < L, got i1={self.i1}, L={self.L}")
        if self.beta1 < 0:
            raise ValueError(f"beta1 must be >= 0, got {self.beta1}")
        if self.x <= 0:
            raise ValueError(f"x must be positive, got {self.x}")
        if self.t <= 0:
            raise ValueError(f"t must be positive, got {self.t}")


def spacing_moment_exact(q: SpacingQuery) -> float:
    """E (X_{(i1)})^beta1 = x^beta1 * Gamma(L)/Gamma(L+beta1) * Gamma(i1+beta1)/Gamma(i1).

    Evaluated in log space: Gamma(L + beta1) overflows doubles near L ~ 170.
    """
    logval = q.beta1 * math.log(q.x)
    logval += gammaln(q.L) - gammaln(q.L + q.beta1)
    logval += gammaln(q.i1 + q.beta1) - gammaln(q.i1)
    return math.exp(logval)


DEFAULT_SPACING_C = 3.0


def spacing_moment_bound(q: SpacingQuery, C: float = DEFAULT_SPACING_C) -> float:
    """Closed-form bound C*sqrt(1+t) * (x*(i1-1)/(L-1) * (1+t)^(1+1/t) / e)^beta1.

    Requires beta1 <= t*(i1-1) and i1 >= 2; C is a configuration constant
    (default 3.0, calibrated against spacing_moment_exact on the test grid).
    """
    if q.i1 < 2:
        raise ValueError(f"the bound needs i1 >= 2, got i1={q.i1}")
    if q.beta1 > q.t * (q.i1 - 1):
        raise ValueError(
            f"the bound needs beta1 <= t*(i1-1): beta1={q.beta1}, t={q.t}, i1={q.i1}"
        )
    base = q.x * (q.i1 - 1) / (q.L - 1) * (1.0 + q.t) ** (1.0 + 1.0 / q.t) / math.e
    return C * math.sqrt(1.0 + q.t) * base**q.beta1


def dirichlet_segment_moment(L: int, x: float, indices, orders) -> float:
    """Joint moment E prod_j (X_{(i_j)} - X_{(i_{j-1})})^{beta_j} for disjoint
    segments of the order statistics of L-1 uniforms on [0, x].

    The scaled spacings are jointly Dirichlet, so the moment is
    x^(sum beta) * Gamma(L)/Gamma(L+sum beta) * prod Gamma(a_j+beta_j)/Gamma(a_j)
    with a_j = i_j - i_{j-1} (i_0 = 0).
    """
    idx = list(indices)
    ords = list(orders)
    if len(idx) != len(ords):
        raise ValueError("indices and orders must have equal length")
    if any(b < 0 for b in ords):
        raise ValueError("moment orders must be nonnegative")
    prev = 0
    total = sum(ords)
    logval = total * math.log(x) + gammaln(L) - gammaln(L + total)
    for i_j, b_j in zip(idx, ords):
        a_j = i_j - prev
        if a_j <= 0 or i_j >= L:
            raise ValueError(f"indices must be strictly increasing inside (0, L), got {idx}")
        logval += gammaln(a_j + b_j) - gammaln(a_j)
        prev = i_j
    return math.exp(logval)


def monotone_derivative_check(N: int, y: float, s_grid) -> bool:
    """True iff s -> d/dy[(sinh y)^s (cosh y)^(N-s)] is nonincreasing on s_grid.

    The derivative is (sinh y)^(s-1) (cosh y)^(N-s-1) (s cosh^2 y + (N-s) sinh^2 y),
    compared in log space for stability.
    """
    if N < 7:
        raise ValueError(f"N must be >= 7, got {N}")
    if y <= 0:
        raise ValueError(f"y must be positive, got {y}")
    grid = list(s_grid)
    if any(s < 1 for s in grid):
        raise ValueError("all s values must be >= 1")
    log_sh = math.log(math.sinh(y))
    log_ch = math.log(math.cosh(y))
    sh2 = math.sinh(y) ** 2
    ch2 = math.cosh(y) ** 2

    def log_deriv(s: float) -> float:
        return (s - 1) * log_sh + (N - s - 1) * log_ch + math.log(s * ch2 + (N - s) * sh2)

    vals = [log_deriv(s) for s in grid]
    return all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

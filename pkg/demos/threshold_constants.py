"""
Threshold constants for increasing-path percolation
===================================================

Where does the accessibility transition sit?  The answer is a root of a
hyperbolic equation, plus a 1/N correction that the finite-size sweeps
in this package orbit around.  This script prints the constants for a
few parameter values so you can see the shapes before running anything
expensive.
"""

import math

from apl import analytic

# The conditioned endpoint value x0 solves f(x) = 1 with
# f(x) = sinh(x)^beta * cosh(x)^(1-beta).  At beta = 1 the root is
# asinh(1) and everything has a closed form.
for beta in (1.0, 0.75, 0.5, 0.25):
    c = analytic.phase_constants(beta=beta)
    print(
        f"beta={beta:4.2f}  x0={c.x0:.9f}  f'(x0)={c.f_prime_x0:.6f}  "
        f"alpha={c.alpha:.6f}  gamma={c.gamma:.6f}"
    )

print()
print("closed forms at beta=1 :", math.asinh(1.0))
print("closed forms at beta=.5:", math.asinh(2.0) / 2.0)
print()

# The finite-size threshold backs off from x0 by (ln N / N) / f'(x0).
# The correction is still ~4% of x0 at N=100.
print(" N      x_c(N)      x0 - x_c")
for N in (10, 20, 50, 100, 1000, 10000):
    xc = analytic.critical_x(N, 1.0)
    print(f"{N:5d}  {xc:.6f}   {analytic.solve_x0(1.0) - xc:.6f}")

print()

# The goodness checker carries a ladder of tolerances derived from one
# epsilon.  The drift threshold delta only bites once epsilon is tiny;
# at everyday epsilon it sits above 1 and the drift clauses are vacuous
# for the balanced antipodal case.
for eps in (0.05, 1e-3, 1e-6):
    c = analytic.phase_constants(beta=1.0, epsilon=eps)
    print(
        f"eps={eps:7.0e}  eps1={c.epsilon1:.4f}  eps2={c.epsilon2:.4f}  "
        f"eps3={c.epsilon3:.4f}  eps4={c.epsilon4:.4f}  delta={c.delta:.4f}"
    )

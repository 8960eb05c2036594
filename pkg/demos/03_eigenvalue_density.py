"""
Counting eigenvalues in a window
================================

The fraction of eigenvalues of A_N in (alpha, beta) tends to the fraction
of the circle on which the boundary symbol lies in (alpha, beta).

For sigma(z) = |z| arg(z) on the Bergman space the boundary symbol is
theta itself, so eigenvalues spread out uniformly over [0, 2 pi).
"""

import math

from szego_lab import MomentSpace, weyl_experiment

space = MomentSpace.bergman()

for alpha, beta in [(math.pi / 2, math.pi), (1.0, 2.0), (4.0, 6.0)]:
    rep = weyl_experiment(space, "r*theta", alpha, beta, [64, 256, 1024])
    print(f"window ({alpha:.3f}, {beta:.3f})  target {rep.target:.4f}")
    for N, c, f in zip(rep.orders, rep.counts, rep.fractions):
        print(f"   N={N:5d}  {c:4d} eigenvalues  fraction {f:.4f}")

# the same thing from the command line, with an SVG of the convergence:
#   szego-lab demo-equidistribution --orders 16:1024:geometric --plot equi.svg

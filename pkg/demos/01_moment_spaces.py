"""
Moment spaces and the measures mu_n
===================================

A radial weight mu on [0, R) gives moments c_n = int r^n mu(r) dr and a
family of probability measures d mu_n = r^(2n+1) mu(r) dr / c_(2n+1).
As n grows, mu_n pushes all of its mass out to the edge r = R.
"""

import math

from szego_lab import MomentSpace, RadialMeasure, mass_below

bergman = MomentSpace.bergman()          # mu = 2 on the unit disc
fock = MomentSpace.fock()                # mu = 2 exp(-r^2) on the plane

# log-moments are exact for the two classical spaces
print("Bergman c_3 =", math.exp(bergman.log_moment(3)), "(expected 1/2)")
print("Fock    c_5 =", math.exp(fock.log_moment(5)), "(expected 2! = 2)")

# a custom weight is integrated numerically, in log domain
weighted = MomentSpace.custom("3*(1 - r^2)^2", 1.0)
print("custom  c_1 =", math.exp(weighted.log_moment(1)))

# mass escape: mu_n([0, 1/2)) shrinks like 4^-(n+1) on the Bergman space
for n in (0, 5, 10, 20):
    print(f"n={n:3d}  mass below 1/2: {mass_below(RadialMeasure(bergman, n), 0.5):.3e}")

# the moment ratio c_(2l+m+1) / sqrt(c_(2l+2m+1) c_(2l+1)) climbs to 1
for l in (0, 10, 100, 1000):
    print(f"l={l:5d}  Fock ratio m=2: {fock.moment_ratio(l, 2):.6f}")

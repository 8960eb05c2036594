"""
Trace averages of psi(A_N) approach the boundary average
========================================================

A_N is the (N+1) x (N+1) compression of the Toeplitz operator with symbol
sigma. Here sigma = cos(theta) on the Bergman space, psi(x) = x^2, and the
limit is the mean of cos(theta)^2 over the circle, 1/2.
"""

from szego_lab import MomentSpace, assemble, eigenvalues, szego_experiment

space = MomentSpace.bergman()

# one matrix, to see what is being averaged
A = assemble(space, "cos(theta)", 4)
print("A_4 (tridiagonal, from the closed-form path):")
print(A.entries.real.round(4))
print("eigenvalues:", eigenvalues(A).eigenvalues.round(4))

# the convergence study
report = szego_experiment(space, "cos(theta)", "x^2", [16, 32, 64, 128, 256, 512, 1024])
print(report.to_csv())

# a symbol that genuinely depends on r: sigma = x = r cos(theta) has the same
# boundary values, and the averaged deviation D_N from them is reported too
report = szego_experiment(space, "x", "x^2", [16, 64, 256])
for N, v, d in zip(report.orders, report.values, report.deviations):
    print(f"N={N:4d}  value {v:.6f}  target {report.target:.6f}  D_N {d:.6f}")

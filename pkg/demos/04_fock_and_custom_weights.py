"""
Unbounded domains and user-supplied weights
===========================================

On the Fock space (R = infinity) a symbol that depends on r needs its
boundary values spelled out, since there is no circle r = R to substitute.
Symbols of r alone whose limit can be detected numerically are the exception.
"""

from szego_lab import DomainError, MomentSpace, szego_experiment

fock = MomentSpace.fock()

# angle-only symbols are their own boundary values
rep = szego_experiment(fock, "cos(theta)", "x^2", [16, 64, 256])
print("Fock, cos(theta):", [round(v, 5) for v in rep.values], "->", rep.target)

# a symbol that tends to cos(theta) as r -> infinity
sym = "cos(theta) * r^2 / (1 + r^2)"
try:
    szego_experiment(fock, sym, "x^2", [16])
except DomainError as exc:
    print("without a boundary:", exc)
rep = szego_experiment(fock, sym, "x^2", [16, 64, 256], boundary="cos(theta)")
print("with boundary cos(theta):", [round(v, 5) for v in rep.values], "->", rep.target)

# a radial-only symbol whose limit is found by probing r = 2^k
rep = szego_experiment(fock, "1 - exp(-r)", "x", [16, 64, 256])
print("1 - exp(-r):", [round(v, 5) for v in rep.values], "->", rep.target,
      f"({rep.metadata['boundary_provenance']})")

# a custom weight on the disc
space = MomentSpace.custom("3*(1 - r^2)^2", 1.0)
rep = szego_experiment(space, "x + 0.5*sin(2*theta)", "x^2", [16, 64, 256])
print("custom weight:", [round(v, 5) for v in rep.values], "->", round(rep.target, 5))

"""Closed-form oracle checks behind ``szego-lab selftest``."""

from __future__ import annotations

import math

import numpy as np

from .moments import MomentSpace, RadialMeasure, mass_below
from .quad import gauss_legendre, trapezoid_periodic
from .spectra import eigenvalues
from .toeplitz import assemble


def _bergman_moments():
    sp = MomentSpace.bergman()
    L = sp.log_moments(1000)
    n = np.arange(1001)
    return float(np.max(np.abs(L - np.log(2.0 / (n + 1))))), 1e-10


def _fock_moments():
    sp = MomentSpace.fock()
    L = sp.log_moments(2001)
    n = np.arange(1001)
    ref = np.array([math.lgamma(k + 1) for k in n])
    return float(np.max(np.abs(L[2 * n + 1] - ref))), 1e-10


def _custom_moments():
    sp = MomentSpace.custom("2", 1.0)
    ref = MomentSpace.bergman().log_moments(512)
    return float(np.max(np.abs(sp.log_moments(512) - ref))), 1e-10


def _mass_escape():
    sp = MomentSpace.bergman()
    err = max(abs(mass_below(RadialMeasure(sp, n), 0.5) - 0.5 ** (2 * n + 2)) for n in range(31))
    return err, 1e-10


def _eig_2x2():
    a, b, c = 1.5, 0.25 - 0.75j, -0.5
    A = np.array([[a, b], [np.conj(b), c]])
    disc = math.sqrt(((a - c) / 2) ** 2 + abs(b) ** 2)
    ref = np.array([(a + c) / 2 - disc, (a + c) / 2 + disc])
    return float(np.max(np.abs(eigenvalues(A).eigenvalues - ref))), 1e-14


def _trapezoid_orthogonality():
    M = 64
    err = 0.0
    for j in range(-8, 9):
        for k in range(-8, 9):
            v = trapezoid_periodic(lambda t: np.exp(1j * (j - k) * t), M)
            err = max(err, abs(v - (1.0 if j == k else 0.0)))
    return err, 1e-14


def _gauss_legendre():
    r = gauss_legendre(20)
    err = max(abs(float(np.sum(r.weights * r.nodes ** (2 * k))) - 2.0 / (2 * k + 1))
              for k in range(20))
    return err, 1e-14


def _matrix_entry():
    m = assemble(MomentSpace.bergman(), "cos(theta)", 1)
    return abs(m.entries[0, 1] - math.sqrt(2) / 3), 1e-12


CHECKS = (
    ("bergman log moments, n <= 1000", _bergman_moments),
    ("fock log moments, n <= 1000", _fock_moments),
    ("custom density 2 on [0,1] vs bergman", _custom_moments),
    ("bergman mass below 1/2", _mass_escape),
    ("hermitian 2x2 eigenvalues", _eig_2x2),
    ("trapezoid orthogonality of e^{ikt}", _trapezoid_orthogonality),
    ("gauss-legendre even monomials", _gauss_legendre),
    ("bergman cos(theta) entry (0,1)", _matrix_entry),
)


def run_selftest(stream=None) -> int:
    """Run every check, print one line each to ``stream``; return the failure count."""
    failures = 0
    for name, fn in CHECKS:
        try:
            err, tol = fn()
            ok = err <= tol
            line = f"{'PASS' if ok else 'FAIL'}  {name}: error {err:.3g} (tol {tol:g})"
        except Exception as exc:  # a crash is a failed check, not a crashed run
            ok = False
            line = f"FAIL  {name}: {type(exc).__name__}: {exc}"
        failures += not ok
        if stream is not None:
            print(line, file=stream)
    return failures

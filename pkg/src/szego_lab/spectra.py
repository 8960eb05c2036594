"""Eigenvalues, functional calculus and eigenvalue counting.

Eigenvalues come from LAPACK's Hermitian driver (Householder reduction to
real tridiagonal form, then an implicit QL/QR or divide-and-conquer stage).
Each decomposition is verified on random probe vectors before it is returned.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import HermiticityError, NumericalError
from .symbol import as_test_function
from .toeplitz import CompressedMatrix

HERMITIAN_TOL = 1e-9
_PROBES = 5
_PROBE_SEED = 20170601


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    N: int
    residual: float = 0.0

    def __len__(self):
        return len(self.eigenvalues)


def _entries(matrix):
    if isinstance(matrix, CompressedMatrix):
        return matrix.entries, matrix.N
    A = np.asarray(matrix)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A, A.shape[0] - 1


def eigenvalues(matrix) -> Spectrum:
    """Sorted real spectrum of a Hermitian matrix.

    Raises :class:`HermiticityError` when ``max|A - A^H| > 1e-9 max|A|``
    rather than symmetrizing, and :class:`NumericalError` when the solver
    fails or the probe residual exceeds ``1e-10 (N+1) max|A|``.
    """
    A, N = _entries(matrix)
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    defect = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
    if defect > HERMITIAN_TOL * max(scale, np.finfo(float).tiny):
        raise HermiticityError(f"matrix is not Hermitian (defect {defect:.3g}, scale {scale:.3g})")
    try:
        lam, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver did not converge: {exc}") from None
    rng = np.random.default_rng(_PROBE_SEED)
    X = rng.standard_normal((A.shape[0], _PROBES))
    X /= np.linalg.norm(X, axis=0)
    Y = V @ X
    residual = float(np.max(np.linalg.norm(A @ Y - V @ (lam[:, None] * X), axis=0)))
    if residual > 1e-10 * (N + 1) * max(scale, 1.0):
        raise NumericalError(f"eigendecomposition residual {residual:.3g} is too large")
    lam = np.sort(lam)
    lam.setflags(write=False)
    return Spectrum(lam, N, residual)


def trace_psi(spectrum: Spectrum, psi) -> float:
    """Unnormalized ``tr psi(A) = sum_j psi(lambda_j)``."""
    vals = as_test_function(psi)(spectrum.eigenvalues)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("test function is not finite on the spectrum")
    return float(np.sum(vals))


def count_in(spectrum: Spectrum, alpha: float, beta: float):
    """Number and fraction of eigenvalues strictly inside (alpha, beta)."""
    if not alpha < beta:
        raise ValueError("window needs alpha < beta")
    lam = spectrum.eigenvalues
    count = int(np.searchsorted(lam, beta, side="left") - np.searchsorted(lam, alpha, side="right"))
    count = max(count, 0)
    return count, count / len(lam)


def write_spectrum_csv(spectrum: Spectrum, path_or_file) -> None:
    """CSV with header ``j,lambda`` and 17 significant digits."""
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "lambda"])
        for j, lam in enumerate(spectrum.eigenvalues):
            w.writerow([j, f"{lam:.17g}"])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            _write(fh)

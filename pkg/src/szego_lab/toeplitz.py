"""Truncated Toeplitz matrices in the monomial basis.

In the orthonormal basis ``e_n = z^n / sqrt(c_{2n+1})``, n = 0..N, the
compression of ``T_sigma`` has entries

    A[k, l] = <T_sigma e_l, e_k>
            = (c_{2k+1} c_{2l+1})^{-1/2} int_0^R sigma^_{k-l}(r) r^{k+l+1} mu(r) dr

where ``sigma^_m(r)`` is the m-th angular Fourier coefficient. Every entry is
computed as a product of two O(1) factors:

* the normalized expectation ``int sigma^_{k-l}(r) r^p mu(r) dr / c_p`` with
  ``p = k + l + 1``, and
* the moment factor ``c_p / sqrt(c_{2k+1} c_{2l+1})``, formed in log domain.

For symbols that depend on ``theta`` only the expectation is just the
boundary coefficient, which gives the closed-form path. Only the upper
triangle is computed; the lower triangle is its conjugate mirror.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .moments import MomentSpace
from .quad import DEFAULT_QUAD, QuadConfig, periodic_grid
from .symbol import (ANGLE, BoundarySymbol, Symbol, as_boundary, as_symbol,
                     fourier_coefficients)

CLOSED_FORM = "closed-form-angle-only"
QUADRATURE = "quadrature-general"
DIAGONAL = "diagonal-radial"
PROVENANCES = (CLOSED_FORM, QUADRATURE, DIAGONAL)

MAX_ORDER = 4096

# samples per sweep when sampling symbols on (radial node x angle) grids
_CHUNK_SAMPLES = 1 << 21


@dataclass(frozen=True)
class CompressedMatrix:
    """(N+1) x (N+1) Hermitian matrix of ``P_N T_sigma P_N``."""

    N: int
    entries: np.ndarray
    provenance: str
    space: MomentSpace | None = None
    symbol: str = ""
    angular_samples: int = 0

    @property
    def size(self):
        return self.N + 1

    def hermiticity_defect(self) -> float:
        A = self.entries
        scale = float(np.max(np.abs(A))) or 1.0
        return float(np.max(np.abs(A - A.conj().T))) / scale


def effective_samples(M: int, N: int) -> int:
    """Angular sample count used at order N.

    Coefficients up to |m| = N are needed, so M is raised to the first power
    of two >= 4 (N + 1) when the configured value is smaller.
    """
    need = 1
    while need < 4 * (N + 1):
        need *= 2
    return max(int(M), need)


def _check_order(N):
    if not isinstance(N, (int, np.integer)) or N < 0:
        raise DomainError(f"truncation order must be a non-negative integer, got {N!r}")
    if N > MAX_ORDER:
        raise DomainError(f"truncation order {N} exceeds the ceiling {MAX_ORDER}")
    return int(N)


def moment_factors(space: MomentSpace, N: int) -> np.ndarray:
    """``F[k, l] = c_{k+l+1} / sqrt(c_{2k+1} c_{2l+1})``; exactly 1 on the diagonal."""
    L = space.log_moments(2 * N + 1)
    k = np.arange(N + 1)
    half = 0.5 * L[2 * k + 1]
    return np.exp(L[k[:, None] + k[None, :] + 1] - half[:, None] - half[None, :])


def _hermitian_from_upper(U):
    """Mirror the upper triangle of U; the diagonal is taken real."""
    A = np.triu(U, 1)
    A = A + A.conj().T
    A[np.diag_indices_from(A)] = U.diagonal().real
    A.setflags(write=False)
    return A


def _upper_from_coefficients(coef, F):
    """Upper-triangle entries ``conj(coef[l - k, k + l + 1]) * F[k, l]``."""
    n = F.shape[0]
    k, l = np.triu_indices(n)
    U = np.zeros((n, n), dtype=complex)
    U[k, l] = np.conj(coef[l - k, k + l + 1]) * F[k, l]
    return U


def assemble_angle_only(space: MomentSpace, bsym, N: int,
                        quad: QuadConfig = DEFAULT_QUAD) -> CompressedMatrix:
    """Closed-form assembly ``A[k, l] = h^(k - l) * F[k, l]`` for theta-only symbols."""
    N = _check_order(N)
    bsym = as_boundary(bsym)
    M = effective_samples(quad.angular_samples, N)
    h = fourier_coefficients(bsym.samples(M), N)
    F = moment_factors(space, N)
    k, l = np.triu_indices(N + 1)
    U = np.zeros((N + 1, N + 1), dtype=complex)
    U[k, l] = np.conj(h[l - k]) * F[k, l]
    return CompressedMatrix(N, _hermitian_from_upper(U), CLOSED_FORM, space, bsym.source, M)


def _radial_samples(sym: Symbol, nodes, M, reducer):
    """Apply ``reducer`` to blocks of sym(r_i, theta_j); concatenate along nodes."""
    theta = periodic_grid(M)
    step = max(1, _CHUNK_SAMPLES // M)
    out = []
    for s in range(0, len(nodes), step):
        vals = sym(nodes[s:s + step, None], theta[None, :])
        if not np.all(np.isfinite(vals)):
            raise NumericalError(f"symbol '{sym.source}' is not finite on the disc "
                                 "(unbounded symbol?)")
        out.append(reducer(vals))
    return np.concatenate(out, axis=0)


def assemble_general(space: MomentSpace, sym, N: int,
                     quad: QuadConfig = DEFAULT_QUAD) -> CompressedMatrix:
    """Quadrature assembly for arbitrary bounded symbols.

    Angular coefficients come from one FFT per radial node; the radial
    integrals for all (m, p) pairs are a single product with the kernel table.
    """
    N = _check_order(N)
    sym = as_symbol(sym)
    sym.check_bounded(space)
    M = effective_samples(quad.angular_samples, N)
    P = 2 * N + 1
    grid = space.radial_grid(P)
    S = _radial_samples(sym, grid.nodes, M, lambda v: fourier_coefficients(v, N))  # nodes x (N+1)
    W = space.kernel(np.arange(P + 1), grid)                                      # (P+1) x nodes
    Wt = np.ascontiguousarray(W.T)
    # strided views of complex arrays bypass BLAS, hence the copies
    coef = np.ascontiguousarray(S.real.T) @ Wt + 1j * (np.ascontiguousarray(S.imag.T) @ Wt)
    U = _upper_from_coefficients(coef, moment_factors(space, N))
    return CompressedMatrix(N, _hermitian_from_upper(U), QUADRATURE, space, sym.source, M)


def diagonal_expectations(space: MomentSpace, sym, N: int,
                          quad: QuadConfig = DEFAULT_QUAD) -> np.ndarray:
    """``int_0^R sigma^_0(r) d mu_n(r)`` for n = 0..N.

    The angular mean is a plain sample average, independent of the FFT path.
    """
    N = _check_order(N)
    sym = as_symbol(sym)
    sym.check_bounded(space)
    grid = space.radial_grid(2 * N + 1)
    if sym.free <= {"r"}:
        avg = np.asarray(sym(grid.nodes, 0.0), dtype=float)
        if not np.all(np.isfinite(avg)):
            raise NumericalError(f"symbol '{sym.source}' is not finite on [0, R)")
    else:
        avg = _radial_samples(sym, grid.nodes, quad.angular_samples, lambda v: v.mean(axis=1))
    W = space.kernel(2 * np.arange(N + 1) + 1, grid)
    return W @ avg


def assemble_radial(space: MomentSpace, sym, N: int,
                    quad: QuadConfig = DEFAULT_QUAD) -> CompressedMatrix:
    """Diagonal matrix with entries ``int sigma dmu_n`` for symbols of r alone."""
    sym = as_symbol(sym)
    if not sym.free <= {"r"}:
        raise DomainError(f"symbol '{sym.source}' depends on more than r; "
                          "use assemble_general")
    d = diagonal_expectations(space, sym, N, quad)
    A = np.diag(d).astype(complex)
    A.setflags(write=False)
    return CompressedMatrix(int(N), A, DIAGONAL, space, sym.source, 0)


def assemble(space: MomentSpace, sym, N: int, quad: QuadConfig = DEFAULT_QUAD) -> CompressedMatrix:
    """Pick the cheapest exact path for the symbol's classification."""
    sym = as_symbol(sym)
    if sym.classification == ANGLE:
        return assemble_angle_only(space, BoundarySymbol(sym.body, "evaluated-at-R", sym.source),
                                   N, quad)
    if sym.free <= {"r"}:
        return assemble_radial(space, sym, N, quad)
    return assemble_general(space, sym, N, quad)


def symbol_deviation(space: MomentSpace, sym, bsym, N: int,
                     quad: QuadConfig = DEFAULT_QUAD) -> float:
    """``(1/(N+1)) sum_n int (1/2pi) int |sigma(r e^{it}) - sigma~(t)| dt d mu_n(r)``.

    This is the right-hand side of the trace-comparison bound between the
    compressions of ``sigma`` and of its boundary values, averaged over n.
    """
    N = _check_order(N)
    sym = as_symbol(sym)
    sym.check_bounded(space)
    bsym = as_boundary(bsym)
    M = quad.angular_samples
    edge = bsym.samples(M)[None, :]
    grid = space.radial_grid(2 * N + 1)
    h = _radial_samples(sym, grid.nodes, M, lambda v: np.abs(v - edge).mean(axis=1))
    W = space.kernel(2 * np.arange(N + 1) + 1, grid)
    return float(np.mean(W @ h))


# --------------------------------------------------------------------------
# Export formats

_MAGIC = b"RCTM"
_VERSION = 1


def matrix_to_json(m: CompressedMatrix) -> dict:
    A = m.entries
    return {
        "order": m.N,
        "provenance": m.provenance,
        "entries": [[float(z.real), float(z.imag)] for z in A.ravel()],
    }


def write_matrix_json(m: CompressedMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)
        fh.write("\n")


def read_matrix_json(path) -> CompressedMatrix:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    n = d["order"] + 1
    e = np.asarray(d["entries"], dtype=float).reshape(n, n, 2)
    return CompressedMatrix(d["order"], e[..., 0] + 1j * e[..., 1], d["provenance"])


def write_matrix_binary(m: CompressedMatrix, path) -> None:
    """16-byte header (magic, version, order, flags as little-endian u32)
    followed by row-major little-endian float64 (re, im) pairs."""
    flags = PROVENANCES.index(m.provenance)
    body = np.ascontiguousarray(m.entries, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(_MAGIC + struct.pack("<III", _VERSION, m.N, flags))
        fh.write(body.tobytes())


def read_matrix_binary(path) -> CompressedMatrix:
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) != 16 or head[:4] != _MAGIC:
            raise DomainError(f"{path}: not an RCTM matrix file")
        version, order, flags = struct.unpack("<III", head[4:])
        if version != _VERSION:
            raise DomainError(f"{path}: unsupported RCTM version {version}")
        data = np.frombuffer(fh.read(), dtype="<c16")
    n = order + 1
    if data.size != n * n:
        raise DomainError(f"{path}: expected {n * n} entries, found {data.size}")
    return CompressedMatrix(order, data.reshape(n, n).astype(complex), PROVENANCES[flags & 3])

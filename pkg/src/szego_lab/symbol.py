"""Symbols on the disc, their radial limits and boundary functionals.

A symbol is an expression in ``r``, ``theta``, ``x = r cos(theta)`` and
``y = r sin(theta)``; ``theta`` is always reduced to ``[0, 2pi)`` before it
is bound, so ``arg(z)`` has its branch cut on the positive real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import DomainError, EvaluationError, NumericalError
from .moments import MomentSpace
from .quad import periodic_grid

TWO_PI = 2.0 * math.pi
SYMBOL_VARS = frozenset({"r", "theta", "x", "y"})

RADIAL, ANGLE, GENERAL = "radial-only", "angle-only", "general"
EXPLICIT, AT_R, EXTRAPOLATED = "explicit", "evaluated-at-R", "extrapolated"


def _parse(body, variables, what):
    if isinstance(body, ex.Expr):
        extra = ex.free_variables(body) - variables
        if extra:
            raise DomainError(f"unknown identifier {sorted(extra)[0]!r} in {what}")
        return body
    return ex.parse(str(body), variables=variables)


def classify(tree: ex.Expr) -> str:
    fv = ex.free_variables(tree)
    if fv <= {"theta"}:
        return ANGLE
    if fv <= {"r"}:
        return RADIAL
    return GENERAL


def _bind(r, theta, need):
    theta = np.mod(theta, TWO_PI)
    b = {"r": r, "theta": theta}
    if "x" in need:
        b["x"] = r * np.cos(theta)
    if "y" in need:
        b["y"] = r * np.sin(theta)
    return b


@dataclass(frozen=True)
class Symbol:
    """Bounded real function ``sigma(r, theta)`` on the disc."""

    body: ex.Expr
    classification: str
    bounds: tuple | None = None
    source: str = ""

    @classmethod
    def from_text(cls, text, bounds=None):
        tree = _parse(text, SYMBOL_VARS, "symbol")
        src = text if isinstance(text, str) else ex.serialize(tree)
        return cls(tree, classify(tree), None if bounds is None else tuple(map(float, bounds)), src)

    @property
    def free(self):
        return ex.free_variables(self.body)

    def __call__(self, r, theta):
        """Evaluate on broadcastable arrays (or scalars) of r and theta."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        shape = np.broadcast_shapes(r.shape, theta.shape)
        out = ex.evaluate(self.body, _bind(r, theta, self.free))
        out = np.broadcast_to(np.asarray(out, dtype=float), shape)
        return float(out) if out.ndim == 0 else out

    def check_bounded(self, space: MomentSpace | None = None, angles: int = 64) -> float:
        """Reject symbols that blow up towards the edge; returns the probed sup |sigma|.

        sigma is sampled on rings accumulating at R (r = R (1 - 2^-k) for
        finite R, r = 2^k otherwise). Overflow, or ring maxima that keep
        growing well past their early values, raise :class:`DomainError`.
        """
        R = 1.0 if space is None else space.R
        k = np.arange(0, 61 if not math.isfinite(R) else 50)
        r = R * (1.0 - 2.0 ** -k) if math.isfinite(R) else 2.0 ** k
        theta = (np.arange(angles) + 0.5) * (TWO_PI / angles)
        vals = self(r[:, None], theta[None, :])
        ring = np.max(np.abs(vals), axis=1)
        if not np.all(np.isfinite(ring)):
            raise DomainError(f"symbol '{self.source}' is unbounded (overflows near r = R)")
        early = float(np.max(ring[:11]))
        if ring[-1] > 2.0 * early + 1.0 and ring[-1] >= np.max(ring[-10:]):
            raise DomainError(f"symbol '{self.source}' is unbounded (|sigma| grows from "
                              f"{early:.3g} to {ring[-1]:.3g} towards r = R)")
        return float(np.max(ring))

    def range(self, space: MomentSpace | None = None, samples: int = 256):
        """``(inf sigma, sup sigma)``: declared bounds, or a dense-sample estimate."""
        if self.bounds is not None:
            return self.bounds
        R = 1.0 if space is None else space.R
        if math.isfinite(R):
            r = np.linspace(0.0, R, samples)
        else:
            s = np.linspace(0.0, 1.0, samples, endpoint=False)
            r = s / (1.0 - s) * 4.0
        theta = periodic_grid(4 * samples)
        vals = self(r[:, None], theta[None, :])
        if not np.all(np.isfinite(vals)):
            raise NumericalError(f"symbol '{self.source}' is not finite on the disc")
        return float(vals.min()), float(vals.max())


@dataclass(frozen=True)
class BoundarySymbol:
    """The radial limit ``sigma~(theta)`` on the boundary circle."""

    body: ex.Expr
    provenance: str = EXPLICIT
    source: str = ""

    @classmethod
    def from_text(cls, text, provenance=EXPLICIT):
        tree = _parse(text, frozenset({"theta"}), "boundary symbol")
        return cls(tree, provenance, text if isinstance(text, str) else ex.serialize(tree))

    def __call__(self, theta):
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        out = np.broadcast_to(np.asarray(ex.evaluate(self.body, {"theta": theta}), dtype=float),
                              theta.shape)
        return float(out) if out.ndim == 0 else out

    def samples(self, M):
        vals = self(periodic_grid(M))
        if not np.all(np.isfinite(vals)):
            raise NumericalError(f"boundary symbol '{self.source}' is not bounded")
        return vals

    def range(self, M: int = 4096):
        v = self.samples(M)
        return float(v.min()), float(v.max())


@dataclass(frozen=True)
class TestFunction:
    """Real test function ``psi(x)`` for the functional calculus."""

    body: ex.Expr
    source: str = ""

    __test__ = False  # not a pytest class

    @classmethod
    def from_text(cls, text):
        tree = _parse(text, frozenset({"x"}), "test function")
        return cls(tree, text if isinstance(text, str) else ex.serialize(tree))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.broadcast_to(np.asarray(ex.evaluate(self.body, {"x": x}), dtype=float), x.shape)
        return float(out) if out.ndim == 0 else out


def as_symbol(s) -> Symbol:
    return s if isinstance(s, Symbol) else Symbol.from_text(s)


def as_boundary(b) -> BoundarySymbol:
    return b if isinstance(b, BoundarySymbol) else BoundarySymbol.from_text(b)


def as_test_function(p) -> TestFunction:
    return p if isinstance(p, TestFunction) else TestFunction.from_text(p)


# --------------------------------------------------------------------------

def fourier_coefficients(values: np.ndarray, m_max: int) -> np.ndarray:
    """``(1/M) sum_j f_j e^{-i m theta_j}`` for m = 0..m_max along the last axis."""
    M = values.shape[-1]
    if m_max >= M / 2:
        raise DomainError(f"aliasing guard: need |m| < M/2, got m={m_max}, M={M}")
    return np.fft.rfft(values, axis=-1)[..., : m_max + 1] / M


def angular_coefficient(sym, m: int, r: float, M: int = 512) -> complex:
    """``sigma^_m(r) = (1/2pi) int sigma(r e^{i theta}) e^{-i m theta} d theta``."""
    sym = as_symbol(sym)
    if abs(m) >= M / 2:
        raise DomainError(f"aliasing guard: need |m| < M/2, got m={m}, M={M}")
    theta = periodic_grid(M)
    vals = sym(np.full(M, float(r)), theta)
    c = np.fft.fft(vals)[m % M] / M
    return complex(c)


def radial_limit(sym, space: MomentSpace, boundary=None, probe_levels: int = 60,
                 tol: float = 1e-9) -> BoundarySymbol:
    """The boundary function ``lim_{r -> R} sigma(r e^{i theta})``.

    An explicit ``boundary`` expression always wins. Otherwise angle-only
    symbols are their own limit, finite R substitutes ``r = R``, and for
    infinite R a radial-only symbol is probed at r = 2^k until successive
    values agree within ``tol``.
    """
    sym = as_symbol(sym)
    if boundary is not None:
        return as_boundary(boundary) if not isinstance(boundary, BoundarySymbol) else boundary
    if sym.classification == ANGLE:
        return BoundarySymbol(sym.body, AT_R, sym.source)
    if space.finite:
        R = ex.Num(space.R)
        mapping = {"r": R,
                   "x": ex.BinOp("*", R, ex.Call("cos", (ex.Var("theta"),))),
                   "y": ex.BinOp("*", R, ex.Call("sin", (ex.Var("theta"),)))}
        bsym = BoundarySymbol(ex.substitute(sym.body, mapping), AT_R, sym.source)
        try:
            bsym.samples(64)
        except (EvaluationError, NumericalError) as exc:
            raise DomainError(f"symbol '{sym.source}' cannot be evaluated at r = R; "
                              f"supply an explicit boundary expression ({exc})") from None
        return bsym
    if sym.classification == RADIAL:
        prev = None
        for k in range(probe_levels):
            try:
                val = float(sym(2.0 ** k, 0.0))
            except EvaluationError:
                break
            if not math.isfinite(val):
                break
            if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
                return BoundarySymbol(ex.Num(val), EXTRAPOLATED, repr(val))
            prev = val
    raise DomainError(f"the radial limit of '{sym.source}' at R = inf needs an explicit "
                      "boundary expression (radial limit is not evaluable by substitution)")


def boundary_average(bsym, psi, M: int = 512) -> float:
    """``(1/2pi) int psi(sigma~(theta)) d theta`` by the periodic trapezoid rule."""
    bsym = as_boundary(bsym)
    psi = as_test_function(psi)
    vals = psi(bsym.samples(M))
    if not np.all(np.isfinite(vals)):
        raise NumericalError("test function is not finite on the boundary values")
    return float(np.sum(vals) / M)


def boundary_level_measure(bsym, alpha: float, beta: float, M: int = 4096) -> float:
    """Fraction of the circle where ``alpha < sigma~ < beta`` (M uniform samples)."""
    if not alpha < beta:
        raise DomainError("window needs alpha < beta")
    if M < 1024:
        raise DomainError("boundary_level_measure needs M >= 1024")
    v = as_boundary(bsym).samples(M)
    return float(np.count_nonzero((v > alpha) & (v < beta))) / M


def level_set_fraction(bsym, level: float, M: int = 4096, width: float = 1e-6) -> float:
    """Fraction of samples with ``|sigma~ - level| <= width``."""
    v = as_boundary(bsym).samples(M)
    return float(np.count_nonzero(np.abs(v - level) <= width)) / M

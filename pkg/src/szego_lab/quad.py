"""Quadrature rules for radial and angular integrals.

* Gauss-Legendre rules (Newton iteration on the three-term recurrence) for
  finite radial intervals, optionally split into panels that refine
  geometrically toward the right endpoint, where ``r**n`` concentrates.
* The uniform periodic trapezoid rule for normalized angular integrals
  ``(1/2pi) * int_0^{2pi} f(theta) dtheta``; it is exact for trigonometric
  polynomials of degree below the sample count.
* A truncated, paneled Gauss-Legendre integrator for ``int_0^inf g(t) e^{-t} dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalError

MAX_GAUSS_NODES = 4096


@dataclass(frozen=True)
class QuadConfig:
    """Tunable node counts. ``radial_nodes`` is per panel."""

    radial_nodes: int = 200
    radial_panels: int = 8
    angular_samples: int = 512
    tail_tol: float = 1e-12

    def __post_init__(self):
        if not 1 <= self.radial_nodes <= MAX_GAUSS_NODES:
            raise DomainError(f"radial_nodes must be in [1, {MAX_GAUSS_NODES}]")
        if self.radial_panels < 1:
            raise DomainError("radial_panels must be positive")
        if self.angular_samples < 4:
            raise DomainError("angular_samples must be at least 4")
        if not 0.0 < self.tail_tol <= 1e-6:
            raise DomainError("tail_tol must be in (0, 1e-6]")


DEFAULT_QUAD = QuadConfig()


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    a: float = -1.0
    b: float = 1.0

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.nodes)))

    def __len__(self):
        return len(self.nodes)


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def _legendre(n, x):
    """Return P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    if n == 0:
        return p0, np.zeros_like(x)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of P_n, found by Newton iteration from the
    asymptotic guesses ``cos(pi (i - 1/4) / (n + 1/2))``; weights are
    ``2 / ((1 - x^2) P_n'(x)^2)``. Only the positive half is iterated and the
    rule is mirrored, so it is exactly symmetric.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_GAUSS_NODES:
        raise DomainError(f"Gauss-Legendre order must be in [1, {MAX_GAUSS_NODES}], got {n!r}")
    n = int(n)
    if n == 1:
        return QuadratureRule(_frozen([0.0]), _frozen([2.0]))
    half = (n + 1) // 2
    i = np.arange(1, half + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    else:
        if np.max(np.abs(dx)) > 1e-13:
            raise NumericalError(f"Newton iteration for Gauss-Legendre n={n} did not converge")
    _, dp = _legendre(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # x is decreasing and positive (plus 0 for odd n)
    if n % 2:
        x[-1] = 0.0
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return QuadratureRule(_frozen(nodes), _frozen(weights))


def map_to_interval(rule: QuadratureRule, a: float, b: float) -> QuadratureRule:
    if not a < b:
        raise DomainError(f"interval must satisfy a < b, got [{a}, {b}]")
    if (rule.a, rule.b) != (-1.0, 1.0):
        raise DomainError("map_to_interval expects a rule on [-1, 1]")
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return QuadratureRule(_frozen(mid + half * rule.nodes), _frozen(half * rule.weights), a, b)


def geometric_breakpoints(a: float, b: float, panels: int) -> np.ndarray:
    """Breakpoints a, a + L/2, a + 3L/4, ..., a + L(1 - 2^{1-panels}), b."""
    L = b - a
    j = np.arange(panels)
    inner = a + L * (1.0 - 0.5 ** j)
    return np.append(inner, b)


def paneled_rule(breakpoints, n: int) -> QuadratureRule:
    """Composite Gauss-Legendre rule with ``n`` nodes on each panel."""
    base = gauss_legendre(n)
    nodes, weights = [], []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        r = map_to_interval(base, float(a), float(b))
        nodes.append(r.nodes)
        weights.append(r.weights)
    return QuadratureRule(_frozen(np.concatenate(nodes)), _frozen(np.concatenate(weights)),
                          float(breakpoints[0]), float(breakpoints[-1]))


def geometric_rule(a: float, b: float, cfg: QuadConfig = DEFAULT_QUAD) -> QuadratureRule:
    return paneled_rule(geometric_breakpoints(a, b, cfg.radial_panels), cfg.radial_nodes)


def periodic_grid(M: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(M) / M


def trapezoid_periodic(f, M: int) -> float:
    """Normalized periodic trapezoid rule ``(1/M) sum_j f(2 pi j / M)``.

    ``f`` is called once with the full array of sample angles; complex
    return values are allowed.
    """
    if M < 4:
        raise DomainError(f"periodic trapezoid needs M >= 4, got {M}")
    vals = np.asarray(f(periodic_grid(M)))
    if vals.shape == ():
        vals = np.full(M, vals)
    s = vals.sum() / M
    return complex(s) if np.iscomplexobj(s) else float(s)


def integrate_halfline_gaussian(g, tail_tol: float = 1e-12, panel_nodes: int = 32) -> float:
    """Approximate ``int_0^inf g(t) exp(-t) dt``.

    The interval is truncated at the first T (grown geometrically) with
    ``sup|g| * e^{-T} * (1 + T) < tail_tol``, sup taken over samples on
    [0, T]; the rest is integrated with unit-width Gauss-Legendre panels.
    """
    if not 0.0 < tail_tol <= 1e-6:
        raise DomainError("tail_tol must be in (0, 1e-6]")
    T = 8.0
    while True:
        probe = np.linspace(0.0, T, 64 * int(T) + 1)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.asarray(g(probe), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NumericalError("integrand overflowed while sampling; g appears unbounded")
        sup = float(np.max(np.abs(vals))) if vals.size else 0.0
        if sup * math.exp(-T) * (1.0 + T) < tail_tol:
            break
        T *= 1.5
        if T > 1e4:
            raise NumericalError("integrand does not decay against exp(-t); g appears unbounded")
    panels = max(8, int(math.ceil(T)))
    rule = paneled_rule(np.linspace(0.0, T, panels + 1), panel_nodes)
    vals = np.asarray(g(rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("integrand is not finite at a quadrature node")
    return float(np.dot(rule.weights, vals * np.exp(-rule.nodes)))

"""Radial weights, their moment sequences, and the measures mu_n.

A :class:`MomentSpace` is a radial weight ``mu(r)`` on ``[0, R)`` together
with its moments ``c_n = int_0^R r^n mu(r) dr``. The analytic function space
built on it has orthonormal basis ``z^n / sqrt(c_{2n+1})``. Moments are kept
as logarithms throughout: ``c_{2n+1} = n!`` overflows a double at n = 171.

Closed forms:

* Bergman, ``mu(r) = 2`` on [0, 1]: ``c_n = 2 / (n + 1)``.
* Fock, ``mu(r) = 2 exp(-r^2)`` on [0, inf): ``c_n = Gamma((n + 1) / 2)``.

Custom weights are given as expressions in ``r`` and integrated numerically.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from . import expr as ex
from .errors import DegenerateWeightError, DomainError, NumericalError
from .quad import (DEFAULT_QUAD, QuadConfig, QuadratureRule, geometric_rule,
                   paneled_rule)

BERGMAN, FOCK, CUSTOM = "bergman", "fock", "custom"

# Infinite-radius grids are shared by all moment orders up to a bucket size.
_MIN_BUCKET = 256
_INF_PANEL_NODES = 32


def order_bucket(p: int) -> int:
    """Smallest power of two > p, but at least 256."""
    b = _MIN_BUCKET
    while b <= p:
        b *= 2
    return b


@dataclass(frozen=True)
class RadialGrid:
    """Quadrature nodes on [0, R) with ``log(weight * mu(node))`` folded in."""

    nodes: np.ndarray
    log_nodes: np.ndarray
    log_wmu: np.ndarray


class MomentSpace:
    """Radial weight ``mu`` on ``[0, R)`` with a memoized log-moment table.

    Use the constructors :meth:`bergman`, :meth:`fock` and :meth:`custom`.
    """

    def __init__(self, kind, radius, density, quad=DEFAULT_QUAD, density_source=None,
                 log_density=None):
        self.kind = kind
        self.R = float(radius)
        self._density = density
        self._log_density = log_density
        self.density_source = density_source
        self.quad = quad
        self._lock = threading.Lock()
        self._log_moments = {}
        self._grids = {}

    # -- constructors -----------------------------------------------------

    @classmethod
    def bergman(cls, quad: QuadConfig = DEFAULT_QUAD):
        return cls(BERGMAN, 1.0, lambda r: np.full_like(np.asarray(r, dtype=float), 2.0),
                   quad, "2")

    @classmethod
    def fock(cls, quad: QuadConfig = DEFAULT_QUAD):
        return cls(FOCK, math.inf, lambda r: 2.0 * np.exp(-np.square(r)), quad, "2*exp(-r^2)",
                   log_density=lambda r: math.log(2.0) - np.square(r))

    @classmethod
    def custom(cls, density, radius, quad: QuadConfig = DEFAULT_QUAD, check=True):
        """Space with weight given by an expression in ``r``.

        ``radius`` may be a positive float, ``math.inf`` or the string ``"inf"``.
        """
        if isinstance(radius, str):
            if radius.strip().lower() not in ("inf", "infinity"):
                raise DomainError(f"radius must be a number or 'inf', got {radius!r}")
            radius = math.inf
        radius = float(radius)
        if not radius > 0:
            raise DomainError(f"radius must be positive, got {radius}")
        if isinstance(density, str):
            source = density
            tree = ex.parse(density, variables={"r"})
        else:
            tree = density
            source = ex.serialize(tree)

        def mu(r):
            r = np.asarray(r, dtype=float)
            return np.broadcast_to(ex.evaluate(tree, {"r": r}), r.shape).astype(float)

        def log_mu(r):
            r = np.asarray(r, dtype=float)
            return np.broadcast_to(_log_eval(tree, {"r": r}), r.shape).astype(float)

        space = cls(CUSTOM, radius, mu, quad, source, log_density=log_mu)
        if check:
            space.check_hypotheses()
        return space

    def __repr__(self):
        if self.kind == CUSTOM:
            return f"MomentSpace(custom, density={self.density_source!r}, R={self.R})"
        return f"MomentSpace({self.kind})"

    @property
    def finite(self) -> bool:
        return math.isfinite(self.R)

    def density(self, r):
        return self._density(r)

    def log_density(self, r):
        if self._log_density is not None:
            out = np.asarray(self._log_density(r), dtype=float)
            if np.any(np.isnan(out)) or np.any(out == np.inf):
                raise DomainError(f"radial weight must be finite and non-negative on [0, R): {self!r}")
            return out
        mu = np.asarray(self._density(r), dtype=float)
        if np.any(mu < 0) or not np.all(np.isfinite(mu)):
            raise DomainError(f"radial weight must be finite and non-negative on [0, R): {self!r}")
        with np.errstate(divide="ignore"):
            return np.log(mu)

    # -- quadrature grids -------------------------------------------------

    def radial_grid(self, p_max: int = 0) -> RadialGrid:
        """Grid adequate for kernels ``r^p mu(r)`` with ``p <= p_max``.

        Finite R uses one fixed geometrically refined rule. Infinite R uses a
        uniform paneled rule on a truncated interval sized for the bucket of
        ``p_max``, so all orders in one bucket share the same nodes.
        """
        key = 0 if self.finite else order_bucket(p_max)
        grid = self._grids.get(key)
        if grid is None:
            rule = (geometric_rule(0.0, self.R, self.quad) if self.finite
                    else self._infinite_rule(key))
            grid = RadialGrid(rule.nodes, np.log(rule.nodes),
                              np.log(rule.weights) + self.log_density(rule.nodes))
            with self._lock:
                grid = self._grids.setdefault(key, grid)
        return grid

    def _infinite_rule(self, p_max) -> QuadratureRule:
        def logf(p, r):
            return p * np.log(r) + self.log_density(r)

        cap = 1.0
        while True:
            r = np.linspace(0.0, cap, 4097)[1:]
            ok = True
            for p in (0, p_max):
                lf = logf(p, r)
                if not np.isfinite(lf.max()):
                    ok = False
                    break
                if lf[-1] > lf.max() - 60.0:
                    ok = False
            if ok:
                break
            cap *= 2.0
            if cap > 2.0 ** 40:
                raise DegenerateWeightError(
                    f"radial weight of {self!r} does not decay fast enough for moments up to {p_max}")
        width = math.inf
        for p in sorted({0, p_max // 4, p_max // 2, p_max}):
            lf = logf(p, r)
            bulk = r[lf > lf.max() - 40.0]
            width = min(width, bulk.max() - bulk.min() + 2 * (r[1] - r[0]))
        panels = max(8, int(math.ceil(8 * cap / width)))
        return paneled_rule(np.linspace(0.0, cap, panels + 1), _INF_PANEL_NODES)

    # -- moments ----------------------------------------------------------

    def log_moment(self, n: int) -> float:
        """``log c_n``."""
        n = int(n)
        if n < 0:
            raise DomainError(f"moment index must be non-negative, got {n}")
        val = self._log_moments.get(n)
        if val is None:
            val = float(self.log_moments(n)[n])
        return val

    def log_moments(self, n_max: int) -> np.ndarray:
        """Array of ``log c_n`` for ``n = 0..n_max``."""
        n = np.arange(int(n_max) + 1)
        if self.kind == BERGMAN:
            out = math.log(2.0) - np.log1p(n.astype(float))
        elif self.kind == FOCK:
            out = gammaln(0.5 * (n + 1.0))
        else:
            missing = [k for k in range(n_max + 1) if k not in self._log_moments]
            if missing:
                self._fill_custom(missing)
            return np.array([self._log_moments[k] for k in range(n_max + 1)])
        with self._lock:
            for k, v in zip(n[len(self._log_moments):], out[len(self._log_moments):]):
                self._log_moments.setdefault(int(k), float(v))
        return out

    def _fill_custom(self, indices):
        groups = {}
        for k in indices:
            key = 0 if self.finite else order_bucket(k)
            groups.setdefault(key, []).append(k)
        for key, ks in groups.items():
            grid = self.radial_grid(key - 1 if key else 0)
            ks_arr = np.asarray(ks, dtype=float)
            vals = logsumexp(grid.log_wmu[None, :] + ks_arr[:, None] * grid.log_nodes[None, :],
                             axis=1)
            if not np.all(np.isfinite(vals)):
                bad = ks[int(np.argmin(np.isfinite(vals)))]
                raise DegenerateWeightError(f"moment c_{bad} of {self!r} is numerically zero")
            with self._lock:
                for k, v in zip(ks, vals):
                    self._log_moments.setdefault(int(k), float(v))

    def moment_ratio(self, l: int, m: int) -> float:
        """``c_{2l+m+1} / sqrt(c_{2l+2m+1} c_{2l+1})``."""
        if l < 0 or m < 0:
            raise DomainError("moment_ratio needs l, m >= 0")
        if m == 0:
            return 1.0
        return math.exp(self.log_moment(2 * l + m + 1)
                        - 0.5 * self.log_moment(2 * l + 2 * m + 1)
                        - 0.5 * self.log_moment(2 * l + 1))

    def kernel(self, p, grid: RadialGrid) -> np.ndarray:
        """Normalized kernel weights ``w_i r_i^p mu(r_i) / c_p`` (rows per p)."""
        p = np.atleast_1d(np.asarray(p))
        logc = self.log_moments(int(p.max()))[p]
        logw = grid.log_wmu[None, :] + p[:, None] * grid.log_nodes[None, :] - logc[:, None]
        # weights below e^-500 add nothing to O(1) entries but their products with
        # small coefficients land in the subnormal range, which stalls BLAS
        return np.exp(np.where(logw < -500.0, -np.inf, logw))

    # -- hypothesis checks --------------------------------------------------

    def check_hypotheses(self, n_max: int = 256):
        """Warn when the moment sequence violates the working assumptions.

        Finite R: ``c_{n+1}/c_n`` must be monotone. Infinite R: the ratio
        ``c_{2l+m+1}/sqrt(c_{2l+2m+1} c_{2l+1})`` should be tending to 1,
        which is assumed rather than proved for general weights.
        Returns the list of warning messages.
        """
        msgs = []
        L = self.log_moments(n_max)
        d = np.diff(L)
        dd = np.diff(d)
        if not (np.all(dd >= -1e-9) or np.all(dd <= 1e-9)):
            msgs.append(f"moment ratios c_(n+1)/c_n of {self!r} are not monotone for n <= {n_max}")
        if not self.finite:
            lmax = (n_max - 9) // 2
            for m in (1, 2, 3, 4):
                hi = self.moment_ratio(lmax, m)
                lo = self.moment_ratio(lmax // 2, m)
                if not (hi >= lo - 1e-12 and 1.0 - hi < 0.9 * (1.0 - lo) + 1e-9):
                    msgs.append(f"moment ratio for m={m} of {self!r} is not approaching 1 "
                                f"(l={lmax // 2}: {lo:.6g}, l={lmax}: {hi:.6g})")
        for msg in msgs:
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
        return msgs


def _log_eval(tree, bindings):
    """log of a non-negative expression, avoiding underflow through products,
    quotients, exp() and powers; other nodes fall back to log(value)."""
    if isinstance(tree, ex.BinOp) and tree.op in "*/":
        a = _log_eval(tree.left, bindings)
        b = _log_eval(tree.right, bindings)
        return a + b if tree.op == "*" else a - b
    if isinstance(tree, ex.Call) and tree.name == "exp":
        return ex.evaluate(tree.args[0], bindings)
    if isinstance(tree, ex.Call) and tree.name == "sqrt":
        return 0.5 * _log_eval(tree.args[0], bindings)
    if isinstance(tree, ex.BinOp) and tree.op == "^":
        base = ex.evaluate(tree.left, bindings)
        if np.all(np.asarray(base) >= 0):
            with np.errstate(divide="ignore", invalid="ignore"):
                out = ex.evaluate(tree.right, bindings) * _log_eval(tree.left, bindings)
            return np.where(np.asarray(base) == 0, -np.inf, out)
    val = np.asarray(ex.evaluate(tree, bindings), dtype=float)
    if np.any(val < 0) or not np.all(np.isfinite(val)):
        raise DomainError(f"radial weight '{ex.serialize(tree)}' must be finite and non-negative")
    with np.errstate(divide="ignore"):
        return np.log(val)


class RadialMeasure:
    """Probability measure ``r^{2n+1} mu(r) dr / c_{2n+1}`` on ``[0, R)``."""

    def __init__(self, space: MomentSpace, n: int):
        if n < 0:
            raise DomainError("measure index must be non-negative")
        self.space = space
        self.n = int(n)

    @property
    def power(self):
        return 2 * self.n + 1

    def mass(self) -> float:
        """Total mass by quadrature (1 up to quadrature error)."""
        return self.expectation(lambda r: np.ones_like(r))

    def expectation(self, g) -> float:
        return radial_expectation(self, g)


def _as_radial_function(g):
    if isinstance(g, str):
        g = ex.parse(g, variables={"r"})
    if isinstance(g, ex.Expr):
        tree = g

        def fn(r):
            return np.broadcast_to(ex.evaluate(tree, {"r": r}), np.shape(r))
        return fn
    return g


def radial_expectation(measure: RadialMeasure, g) -> float:
    """``int_0^R g(r) d mu_n(r)``; ``g`` is a callable on arrays or an expression in r."""
    fn = _as_radial_function(g)
    space = measure.space
    grid = space.radial_grid(measure.power)
    w = space.kernel(measure.power, grid)[0]
    vals = np.asarray(fn(grid.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("radial function is not finite at a quadrature node")
    return float(np.dot(w, vals))


def mass_below(measure: RadialMeasure, r_tilde: float) -> float:
    """``mu_n([0, r_tilde))`` with the numerator accumulated in log domain."""
    space = measure.space
    if not 0.0 < r_tilde < space.R:
        raise DomainError(f"r_tilde must lie in (0, {space.R}), got {r_tilde}")
    rule = geometric_rule(0.0, float(r_tilde), space.quad)
    log_num = logsumexp(np.log(rule.weights) + space.log_density(rule.nodes)
                        + measure.power * np.log(rule.nodes))
    val = math.exp(log_num - space.log_moment(measure.power))
    return min(1.0, max(0.0, val))


def log_moment(space: MomentSpace, n: int) -> float:
    return space.log_moment(n)


def moment_ratio(space: MomentSpace, l: int, m: int) -> float:
    return space.moment_ratio(l, m)

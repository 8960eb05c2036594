"""Finite-N convergence studies for the trace and eigenvalue-density limits.

Each driver sweeps a list of truncation orders N, computes a finite-N
quantity from the compressed matrix, and pairs it with the boundary target
it should approach:

* :func:`averaging_experiment`: ``tr(A_N)/(N+1)`` against the boundary mean.
* :func:`szego_experiment`: ``tr psi(A_N)/(N+1)`` against ``mean psi(sigma~)``.
* :func:`weyl_experiment`: fraction of eigenvalues in ``(alpha, beta)``
  against the fraction of the circle where ``alpha < sigma~ < beta``.
* :func:`measures_experiment`: mass escape and the moment-ratio limit.

No rates are claimed; reports carry per-N errors only.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, NumericalError
from .moments import MomentSpace, RadialMeasure, mass_below
from .quad import DEFAULT_QUAD, QuadConfig
from .spectra import count_in, eigenvalues, trace_psi
from .symbol import (ANGLE, as_symbol, as_test_function, boundary_average,
                     boundary_level_measure, level_set_fraction, radial_limit)
from .toeplitz import assemble, diagonal_expectations, symbol_deviation

DEFAULT_ORDERS = (16, 32, 64, 128, 256, 512, 1024)
TARGET_SAMPLES = 8192


def fmt(x) -> str:
    """17 significant digits; round-trips to the same double."""
    return f"{float(x):.17g}"


def worker_count() -> int:
    """Parallelism cap from ``SZEGO_THREADS`` (0 or unset = one per CPU)."""
    raw = os.environ.get("SZEGO_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"SZEGO_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError("SZEGO_THREADS must be non-negative")
    return n or (os.cpu_count() or 1)


def _map_orders(fn, orders):
    orders = _check_orders(orders)
    workers = min(worker_count(), len(orders))
    if workers <= 1:
        return orders, [fn(N) for N in orders]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return orders, list(pool.map(fn, orders))


def _check_orders(orders):
    orders = [int(N) for N in orders]
    if not orders:
        raise DomainError("order schedule is empty")
    if orders[0] < 1 or any(b <= a for a, b in zip(orders, orders[1:])):
        raise DomainError(f"orders must be positive and strictly increasing, got {orders}")
    return orders


def _space_meta(space):
    return {"kind": space.kind, "radius": "inf" if not space.finite else space.R,
            "density": space.density_source}


def _quad_meta(quad):
    return asdict(quad)


@dataclass
class ConvergenceReport:
    orders: list
    values: list
    target: float
    errors: list
    deviations: list | None = None
    metadata: dict = field(default_factory=dict)

    def rows(self):
        for i, N in enumerate(self.orders):
            row = [N, self.values[i], self.target, self.errors[i]]
            if self.deviations is not None:
                row.append(self.deviations[i])
            yield row

    def to_csv(self, fh=None):
        """Write ``N,value,target,error[,deviation]``; returns the text if no file given."""
        out = fh or io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        head = ["N", "value", "target", "error"]
        if self.deviations is not None:
            head.append("deviation")
        w.writerow(head)
        for row in self.rows():
            w.writerow([row[0]] + [fmt(v) for v in row[1:]])
        return out.getvalue() if fh is None else None

    def to_json(self) -> str:
        return json.dumps({"kind": "convergence", **asdict(self)}, indent=2, sort_keys=True)


@dataclass
class DensityReport:
    orders: list
    counts: list
    fractions: list
    target: float
    errors: list
    alpha: float
    beta: float
    metadata: dict = field(default_factory=dict)

    @property
    def values(self):
        return self.fractions

    def to_csv(self, fh=None):
        out = fh or io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["N", "count", "fraction", "target", "error"])
        for N, c, f, e in zip(self.orders, self.counts, self.fractions, self.errors):
            w.writerow([N, c, fmt(f), fmt(self.target), fmt(e)])
        return out.getvalue() if fh is None else None

    def to_json(self) -> str:
        return json.dumps({"kind": "density", **asdict(self)}, indent=2, sort_keys=True)


@dataclass
class MeasuresReport:
    orders: list
    r_tilde: float
    mass: list
    m_list: list
    ratios: dict
    mass_nonincreasing: bool
    ratio_increasing: dict
    metadata: dict = field(default_factory=dict)

    def to_csv(self, fh=None):
        out = fh or io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "mass_below"] + [f"ratio_m{m}" for m in self.m_list])
        for i, n in enumerate(self.orders):
            w.writerow([n, fmt(self.mass[i])] + [fmt(self.ratios[m][i]) for m in self.m_list])
        return out.getvalue() if fh is None else None

    def to_json(self) -> str:
        d = asdict(self)
        d["ratios"] = {str(k): v for k, v in self.ratios.items()}
        d["ratio_increasing"] = {str(k): v for k, v in self.ratio_increasing.items()}
        return json.dumps({"kind": "measures", **d}, indent=2, sort_keys=True)


def _warn(msgs, text):
    msgs.append(text)
    warnings.warn(text, RuntimeWarning, stacklevel=3)


# --------------------------------------------------------------------------

def averaging_experiment(space: MomentSpace, sym, orders=DEFAULT_ORDERS, *, boundary=None,
                         quad: QuadConfig = DEFAULT_QUAD) -> ConvergenceReport:
    """``tr(A_N)/(N+1)`` two ways: from the spectrum, and as the mean of the
    diagonal expectations ``int sigma^_0 d mu_n``. Their gap is recorded."""
    sym = as_symbol(sym)
    bsym = radial_limit(sym, space, boundary)
    target = boundary_average(bsym, "x", max(quad.angular_samples, TARGET_SAMPLES))

    def one(N):
        spec = eigenvalues(assemble(space, sym, N, quad))
        v_spec = float(np.sum(spec.eigenvalues)) / (N + 1)
        v_int = float(np.sum(diagonal_expectations(space, sym, N, quad))) / (N + 1)
        return v_spec, v_int

    orders, res = _map_orders(one, orders)
    values = [v for v, _ in res]
    integral = [w for _, w in res]
    gap = max(abs(v - w) for v, w in res)
    meta = {"experiment": "averaging", "space": _space_meta(space), "symbol": sym.source,
            "boundary": bsym.source, "boundary_provenance": bsym.provenance, "psi": "x",
            "quad": _quad_meta(quad), "integral_values": integral, "two_path_gap": gap}
    return ConvergenceReport(orders, values, target, [abs(v - target) for v in values],
                             None, meta)


def _check_psi_range(psi, sym, space):
    sym.check_bounded(space)
    lo, hi = sym.range(space)
    xs = np.linspace(lo, hi, 257)
    try:
        vals = psi(xs)
    except DomainError as exc:
        raise DomainError(f"test function '{psi.source}' is not defined on the symbol range "
                          f"[{lo:.6g}, {hi:.6g}]: {exc}") from None
    if not np.all(np.isfinite(vals)):
        raise DomainError(f"test function '{psi.source}' is not finite on [{lo:.6g}, {hi:.6g}]")


def szego_experiment(space: MomentSpace, sym, psi, orders=DEFAULT_ORDERS, *, boundary=None,
                     quad: QuadConfig = DEFAULT_QUAD, deviations: bool = True) -> ConvergenceReport:
    """``tr psi(A_N)/(N+1)`` against ``(1/2pi) int psi(sigma~(theta)) d theta``.

    When the symbol is not already a function of theta alone, the averaged
    deviation ``D_N`` between sigma and its boundary values is recorded too.
    """
    sym = as_symbol(sym)
    psi = as_test_function(psi)
    _check_psi_range(psi, sym, space)
    bsym = radial_limit(sym, space, boundary)
    target = boundary_average(bsym, psi, max(quad.angular_samples, TARGET_SAMPLES))
    with_dev = deviations and sym.classification != ANGLE

    def one(N):
        spec = eigenvalues(assemble(space, sym, N, quad))
        val = trace_psi(spec, psi) / (N + 1)
        dev = symbol_deviation(space, sym, bsym, N, quad) if with_dev else None
        return val, dev

    orders, res = _map_orders(one, orders)
    values = [v for v, _ in res]
    meta = {"experiment": "szego", "space": _space_meta(space), "symbol": sym.source,
            "boundary": bsym.source, "boundary_provenance": bsym.provenance,
            "psi": psi.source, "quad": _quad_meta(quad)}
    return ConvergenceReport(orders, values, target, [abs(v - target) for v in values],
                             [d for _, d in res] if with_dev else None, meta)


def weyl_experiment(space: MomentSpace, sym, alpha: float, beta: float, orders=DEFAULT_ORDERS, *,
                    boundary=None, quad: QuadConfig = DEFAULT_QUAD,
                    level_samples: int = TARGET_SAMPLES) -> DensityReport:
    """Fraction of eigenvalues in ``(alpha, beta)`` against the boundary level measure.

    Windows that straddle 0 (neither ``alpha > 0`` nor ``beta < 0``) and
    windows whose endpoints sit on a level set of positive measure are run
    anyway, with a warning recorded in the report metadata.
    """
    if not alpha < beta:
        raise DomainError("window needs alpha < beta")
    sym = as_symbol(sym)
    bsym = radial_limit(sym, space, boundary)
    msgs = []
    if not (alpha > 0 or beta < 0):
        _warn(msgs, f"window ({alpha:g}, {beta:g}) contains 0: the density limit is only "
                    "established for alpha > 0 or beta < 0; reporting the empirical fraction")
    for edge in (alpha, beta):
        frac = level_set_fraction(bsym, edge, level_samples)
        if frac > 1e-3:
            _warn(msgs, f"boundary symbol sits at level {edge:g} on a {frac:.3g} fraction "
                        "of the circle; the window edge is degenerate")
    target = boundary_level_measure(bsym, alpha, beta, level_samples)

    def one(N):
        return count_in(eigenvalues(assemble(space, sym, N, quad)), alpha, beta)

    orders, res = _map_orders(one, orders)
    counts = [c for c, _ in res]
    fracs = [f for _, f in res]
    meta = {"experiment": "weyl", "space": _space_meta(space), "symbol": sym.source,
            "boundary": bsym.source, "boundary_provenance": bsym.provenance,
            "level_samples": level_samples, "quad": _quad_meta(quad), "warnings": msgs}
    return DensityReport(orders, counts, fracs, target, [abs(f - target) for f in fracs],
                         float(alpha), float(beta), meta)


def measures_experiment(space: MomentSpace, r_tilde: float, m_list=(1, 2, 3, 4),
                        n_orders=tuple(range(0, 201, 10))) -> MeasuresReport:
    """Tabulate ``mu_n([0, r_tilde))`` and the moment ratios for l = n."""
    n_orders = [int(n) for n in n_orders]
    if any(n < 0 for n in n_orders) or any(b <= a for a, b in zip(n_orders, n_orders[1:])):
        raise DomainError("n_orders must be non-negative and strictly increasing")
    m_list = [int(m) for m in m_list]
    if any(m < 0 for m in m_list):
        raise DomainError("m values must be non-negative")
    mass = [mass_below(RadialMeasure(space, n), r_tilde) for n in n_orders]
    ratios = {m: [space.moment_ratio(n, m) for n in n_orders] for m in m_list}
    mono_mass = all(b <= a + 1e-15 for a, b in zip(mass, mass[1:]))
    mono_ratio = {m: all(b >= a - 1e-15 for a, b in zip(v, v[1:])) for m, v in ratios.items()}
    return MeasuresReport(n_orders, float(r_tilde), mass, m_list, ratios, mono_mass, mono_ratio,
                          {"experiment": "measures", "space": _space_meta(space)})

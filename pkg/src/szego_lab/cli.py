"""Command-line front end.

    szego-lab <command> [--config FILE] [flags]

Commands: moments, measures, matrix, spectrum, limit, density,
demo-equidistribution, selftest. Flags override values from the config
file, which holds ``key = value`` lines::

    # comments start with '#'
    space = "custom"
    density = "2*exp(-r^2)"
    radius = "inf"
    symbol = "cos(theta)"
    orders = 16:1024:geometric
    angular_samples = 1024

Exit status: 0 on success, 1 for invalid input, configuration or I/O, 2 when
a numerical algorithm fails. Diagnostics go to stderr; data goes to the
``--out`` file or to stdout.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from dataclasses import dataclass

from . import expr as ex
from .errors import ConfigError, DomainError, NumericalError, SzegoError
from .moments import MomentSpace
from .quad import QuadConfig
from .symbol import GENERAL, as_symbol

COMMANDS = ("moments", "measures", "matrix", "spectrum", "limit", "density",
            "demo-equidistribution", "selftest")

# key -> (kind, default); kinds: str, int, real, radius, orders, ints
SCHEMA = {
    "space": ("str", "bergman"),
    "density": ("str", None),
    "radius": ("radius", None),
    "symbol": ("str", "cos(theta)"),
    "boundary": ("str", None),
    "psi": ("str", "x^2"),
    "orders": ("orders", "16:1024:geometric"),
    "N": ("int", 64),
    "alpha": ("real", "0.5"),
    "beta": ("real", "1.5"),
    "r_tilde": ("real", "0.5"),
    "m_list": ("ints", "1,2,3,4"),
    "radial_nodes": ("int", 200),
    "radial_panels": ("int", 8),
    "angular_samples": ("int", 512),
    "tail_tol": ("real", "1e-12"),
    "out": ("str", None),
    "format": ("str", None),
    "plot": ("str", None),
    "seed": ("int", 0),
}

FORMATS = ("csv", "json", "binary")


@dataclass
class RunConfig:
    space: str = "bergman"
    density: str | None = None
    radius: float | None = None
    symbol: str = "cos(theta)"
    boundary: str | None = None
    psi: str = "x^2"
    orders: tuple = (16, 32, 64, 128, 256, 512, 1024)
    N: int = 64
    alpha: float = 0.5
    beta: float = 1.5
    r_tilde: float = 0.5
    m_list: tuple = (1, 2, 3, 4)
    radial_nodes: int = 200
    radial_panels: int = 8
    angular_samples: int = 512
    tail_tol: float = 1e-12
    out: str | None = None
    format: str | None = None
    plot: str | None = None
    seed: int = 0

    @property
    def quad(self) -> QuadConfig:
        try:
            return QuadConfig(self.radial_nodes, self.radial_panels, self.angular_samples,
                              self.tail_tol)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    def build_space(self) -> MomentSpace:
        kind = self.space.strip().lower()
        if kind == "bergman":
            return MomentSpace.bergman(self.quad)
        if kind == "fock":
            return MomentSpace.fock(self.quad)
        if kind == "custom":
            if self.density is None or self.radius is None:
                raise ConfigError("space 'custom' needs both 'density' and 'radius'")
            return MomentSpace.custom(self.density, self.radius, self.quad)
        raise ConfigError(f"key 'space': expected bergman, fock or custom, got {self.space!r}")


# --------------------------------------------------------------------------
# value coercion

def parse_orders(text: str) -> tuple:
    """``a:b:geometric`` (doubling), ``a:b:linear`` (step a, or 1 when a = 0),
    or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, kind = int(parts[0]), int(parts[1]), parts[2].strip().lower()
            if a < 0 or b < a:
                raise ValueError
            if kind == "geometric":
                if a < 1:
                    raise ValueError
                out = []
                n = a
                while n <= b:
                    out.append(n)
                    n *= 2
                return tuple(out)
            if kind == "linear":
                return tuple(range(a, b + 1, max(a, 1)))
            raise ValueError
        vals = tuple(int(v) for v in text.split(",") if v.strip())
        if not vals:
            raise ValueError
        return vals
    except ValueError:
        raise ConfigError(f"invalid order schedule {text!r}; use a:b:geometric, "
                          "a:b:linear or a comma-separated list") from None


def _coerce(key, kind, raw, quoted, where):
    def bad(expected):
        return ConfigError(f"{where}key {key!r}: expected {expected}, got {raw!r}")

    if kind == "str":
        if quoted is False:
            raise bad("a quoted string")
        return raw
    if kind == "int":
        if quoted:
            raise bad("an integer")
        try:
            return int(raw)
        except ValueError:
            raise bad("an integer") from None
    if kind == "real":
        if quoted:
            raise bad("a real number")
        try:
            return float(raw)
        except ValueError:
            pass
        try:
            return float(ex.evaluate(ex.parse(raw, variables=()), {}))
        except SzegoError:
            raise bad("a real number or constant expression") from None
    if kind == "radius":
        if raw.strip().lower() in ("inf", "infinity"):
            return math.inf
        try:
            return float(raw)
        except ValueError:
            raise bad("a real number or \"inf\"") from None
    if kind == "orders":
        try:
            return parse_orders(raw)
        except ConfigError as exc:
            raise ConfigError(f"{where}key {key!r}: {exc}") from None
    if kind == "ints":
        try:
            return tuple(int(v) for v in raw.split(",") if v.strip())
        except ValueError:
            raise bad("a comma-separated list of integers") from None
    raise AssertionError(kind)


def read_config_file(path) -> dict:
    """Parse a ``key = value`` file into raw ``(value, quoted, line)`` triples."""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    raw = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = text.partition("=")
            key, value = key.strip(), value.strip()
            if key not in SCHEMA:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in raw:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            quoted = len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'"
            if quoted:
                value = value[1:-1]
            elif "#" in value:
                value = value.split("#", 1)[0].strip()
            raw[key] = (value, quoted, lineno)
    return raw


def load_config(path=None, overrides=None) -> RunConfig:
    """Build a :class:`RunConfig` from defaults, then the file, then overrides.

    ``overrides`` maps keys to raw strings (as given on the command line).
    """
    values = {}
    for key, (kind, default) in SCHEMA.items():
        if default is not None:
            values[key] = _coerce(key, kind, str(default), None, "default ")
    if path is not None:
        for key, (raw, quoted, lineno) in read_config_file(path).items():
            values[key] = _coerce(key, SCHEMA[key][0], raw, quoted, f"{path}:{lineno}: ")
    for key, raw in (overrides or {}).items():
        if key not in SCHEMA:
            raise ConfigError(f"unknown key {key!r}")
        if raw is not None:
            values[key] = _coerce(key, SCHEMA[key][0], str(raw), None, "--")
    cfg = RunConfig(**values)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    for key in ("symbol", "boundary", "psi", "density"):
        src = getattr(cfg, key)
        if src is None:
            continue
        allowed = {"symbol": {"r", "theta", "x", "y"}, "boundary": {"theta"},
                   "psi": {"x"}, "density": {"r"}}[key]
        try:
            ex.parse(src, variables=allowed)
        except SzegoError as exc:
            raise ConfigError(f"key {key!r}: {exc}") from None
    if any(b <= a for a, b in zip(cfg.orders, cfg.orders[1:])):
        raise ConfigError(f"key 'orders': must be strictly increasing, got {list(cfg.orders)}")
    if cfg.N < 0:
        raise ConfigError("key 'N': must be non-negative")
    if cfg.format is not None and cfg.format not in FORMATS:
        raise ConfigError(f"key 'format': expected one of {', '.join(FORMATS)}")
    kind = cfg.space.strip().lower()
    if kind not in ("bergman", "fock", "custom"):
        raise ConfigError(f"key 'space': expected bergman, fock or custom, got {cfg.space!r}")
    if kind == "custom" and (cfg.density is None or cfg.radius is None):
        raise ConfigError("space 'custom' needs both 'density' and 'radius'")
    infinite = kind == "fock" or (kind == "custom" and cfg.radius == math.inf)
    if infinite and cfg.boundary is None:
        sym = as_symbol(cfg.symbol)
        if sym.classification == GENERAL:
            raise ConfigError(
                f"symbol {cfg.symbol!r} on an infinite-radius space has no radial limit "
                "computable by substitution; set 'boundary' to its limit as r -> R")
    if cfg.out is not None:
        parent = os.path.dirname(os.path.abspath(cfg.out))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            raise ConfigError(f"key 'out': directory {parent!r} is not writable")


# --------------------------------------------------------------------------
# output helpers

def _fmt_of(cfg, default):
    if cfg.format:
        return cfg.format
    if cfg.out:
        ext = os.path.splitext(cfg.out)[1].lower()
        return {".json": "json", ".bin": "binary", ".rctm": "binary", ".csv": "csv"}.get(ext, default)
    return default


def _emit_text(cfg, text):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(cfg, report, title):
    fmt = _fmt_of(cfg, "csv")
    if fmt == "binary":
        raise ConfigError("reports are written as csv or json")
    _emit_text(cfg, report.to_json() + "\n" if fmt == "json" else report.to_csv())
    if cfg.plot:
        from .plot import emit_plot
        emit_plot(report, cfg.plot, title)


# --------------------------------------------------------------------------
# commands

def cmd_moments(cfg):
    import csv
    import io
    from .szego import fmt
    space = cfg.build_space()
    n_max = max(cfg.N, 0)
    L = space.log_moments(n_max)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "log_c"])
    for n, v in enumerate(L):
        w.writerow([n, fmt(v)])
    _emit_text(cfg, buf.getvalue())


def cmd_measures(cfg):
    from .szego import measures_experiment
    space = cfg.build_space()
    report = measures_experiment(space, cfg.r_tilde, cfg.m_list, cfg.orders)
    fmt = _fmt_of(cfg, "csv")
    _emit_text(cfg, report.to_json() + "\n" if fmt == "json" else report.to_csv())


def cmd_matrix(cfg):
    from .toeplitz import assemble, matrix_to_json, write_matrix_binary
    import json
    space = cfg.build_space()
    m = assemble(space, cfg.symbol, cfg.N, cfg.quad)
    fmt = _fmt_of(cfg, "json")
    if fmt == "binary":
        if not cfg.out:
            raise ConfigError("binary matrix output needs --out")
        write_matrix_binary(m, cfg.out)
    elif fmt == "json":
        _emit_text(cfg, json.dumps(matrix_to_json(m)) + "\n")
    else:
        raise ConfigError("matrices are written as json or binary")


def cmd_spectrum(cfg):
    import io
    from .spectra import eigenvalues, write_spectrum_csv
    from .toeplitz import assemble
    space = cfg.build_space()
    spec = eigenvalues(assemble(space, cfg.symbol, cfg.N, cfg.quad))
    buf = io.StringIO()
    write_spectrum_csv(spec, buf)
    _emit_text(cfg, buf.getvalue())


def cmd_limit(cfg):
    from .szego import szego_experiment
    space = cfg.build_space()
    report = szego_experiment(space, cfg.symbol, cfg.psi, cfg.orders,
                              boundary=cfg.boundary, quad=cfg.quad)
    _emit_report(cfg, report, f"tr psi(A_N)/(N+1): symbol {cfg.symbol}, psi {cfg.psi}")


def cmd_density(cfg):
    from .szego import weyl_experiment
    space = cfg.build_space()
    report = weyl_experiment(space, cfg.symbol, cfg.alpha, cfg.beta, cfg.orders,
                             boundary=cfg.boundary, quad=cfg.quad)
    _emit_report(cfg, report, f"eigenvalue fraction in ({cfg.alpha:.4g}, {cfg.beta:.4g}): "
                              f"symbol {cfg.symbol}")


def cmd_demo_equidistribution(cfg):
    from .szego import weyl_experiment
    space = MomentSpace.bergman(cfg.quad)
    report = weyl_experiment(space, "r*theta", cfg.alpha, cfg.beta, cfg.orders, quad=cfg.quad)
    _emit_report(cfg, report, f"sigma = |z| arg z on the Bergman space, window "
                              f"({cfg.alpha:.4g}, {cfg.beta:.4g})")


def cmd_selftest(cfg):
    from .selftest import run_selftest
    failures = run_selftest(sys.stderr)
    if failures:
        raise NumericalError(f"selftest: {failures} check(s) failed")


HANDLERS = {
    "moments": cmd_moments, "measures": cmd_measures, "matrix": cmd_matrix,
    "spectrum": cmd_spectrum, "limit": cmd_limit, "density": cmd_density,
    "demo-equidistribution": cmd_demo_equidistribution, "selftest": cmd_selftest,
}

# per-command defaults that differ from the global table
COMMAND_DEFAULTS = {
    "measures": {"orders": "0:200:linear"},
    "demo-equidistribution": {"alpha": "pi/2", "beta": "pi"},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="szego-lab", description="Spectra of truncated Toeplitz matrices on weighted analytic spaces.")
    p.add_argument("command", help=", ".join(COMMANDS))
    p.add_argument("--config", help="key = value config file")
    for key, (kind, _) in SCHEMA.items():
        flag = "--" + key.replace("_", "-")
        names = [flag] if key != "N" else ["--N", "-N"]
        p.add_argument(*names, dest=key, default=None, metavar=kind.upper())
    return p


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"szego-lab: warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    """Run one command; returns the exit status (alias: :func:`run_command`)."""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command not in COMMANDS:
            raise ConfigError(f"unknown command {args.command!r}; expected one of "
                              f"{', '.join(COMMANDS)}")
        overrides = dict(COMMAND_DEFAULTS.get(args.command, {}))
        file_keys = set(read_config_file(args.config)) if args.config else set()
        for k in list(overrides):
            if k in file_keys:
                del overrides[k]
        overrides.update({k: v for k, v in vars(args).items()
                          if k in SCHEMA and v is not None})
        cfg = load_config(args.config, overrides)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            HANDLERS[args.command](cfg)
        return 0
    except DomainError as exc:
        print(f"szego-lab: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"szego-lab: numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"szego-lab: error: {exc}", file=sys.stderr)
        return 1
    except (MemoryError, ArithmeticError) as exc:
        print(f"szego-lab: internal failure: {exc}", file=sys.stderr)
        return 2


run_command = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

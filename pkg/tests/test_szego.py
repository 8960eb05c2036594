import csv
import io
import json
import math

import numpy as np
import pytest

from szego_lab.errors import DomainError
from szego_lab.moments import MomentSpace
from szego_lab.szego import (averaging_experiment, fmt, measures_experiment, szego_experiment,
                             weyl_experiment, worker_count)

BERGMAN = MomentSpace.bergman()


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, math.pi, 1e-300, -2.5e10):
        assert float(fmt(x)) == x


def test_averaging_two_paths():
    rep = averaging_experiment(BERGMAN, "r^2", [10, 20])
    for N, v in zip(rep.orders, rep.values):
        ref = 1 - sum(1 / (n + 2) for n in range(N + 1)) / (N + 1)
        assert v == pytest.approx(ref, abs=1e-12)
    assert rep.metadata["two_path_gap"] < 1e-12
    assert rep.target == 1.0


def test_szego_report_shape_and_csv():
    rep = szego_experiment(BERGMAN, "cos(theta)", "x^2", [8, 16, 32])
    assert rep.target == pytest.approx(0.5, abs=1e-15)
    assert rep.deviations is None
    assert rep.errors[-1] < rep.errors[0]
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["N", "value", "target", "error"]
    assert [float(r[1]) for r in rows[1:]] == rep.values
    assert json.loads(rep.to_json())["kind"] == "convergence"


def test_szego_single_eigenvalue_case():
    rep = szego_experiment(BERGMAN, "r^2", "x^2", [1])
    # eigenvalues 1/2 and 2/3
    assert rep.values[0] == pytest.approx((0.25 + 4 / 9) / 2, abs=1e-14)
    assert rep.deviations is not None


def test_psi_must_be_defined_on_symbol_range():
    with pytest.raises(DomainError, match="not defined"):
        szego_experiment(BERGMAN, "cos(theta)", "log(x)", [4])


def test_weyl_experiment_and_warning():
    with pytest.warns(RuntimeWarning, match="contains 0"):
        rep = weyl_experiment(BERGMAN, "cos(theta)", 0.0, 2.0, [16, 64])
    assert rep.target == pytest.approx(0.5, abs=1e-3)
    assert rep.metadata["warnings"]
    assert rep.counts[1] == round(rep.fractions[1] * 65)
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["N", "count", "fraction", "target", "error"]


def test_weyl_level_set_warning():
    with pytest.warns(RuntimeWarning) as rec:
        weyl_experiment(BERGMAN, "max(cos(theta), 0)", 0.0, 0.5, [8])
    assert any("sits at level 0" in str(w.message) for w in rec)


def test_measures_monotonicity():
    rep = measures_experiment(BERGMAN, 0.5, [1, 2], range(0, 50, 5))
    assert rep.mass_nonincreasing and all(rep.ratio_increasing.values())
    assert rep.mass[1] == pytest.approx(0.5 ** 12, rel=1e-12)


def test_order_validation():
    with pytest.raises(DomainError):
        szego_experiment(BERGMAN, "cos(theta)", "x", [16, 8])
    with pytest.raises(DomainError):
        szego_experiment(BERGMAN, "cos(theta)", "x", [])


def test_thread_count_does_not_change_results(monkeypatch):
    monkeypatch.setenv("SZEGO_THREADS", "1")
    a = szego_experiment(BERGMAN, "x", "x^2", [8, 16, 32]).to_csv()
    monkeypatch.setenv("SZEGO_THREADS", "3")
    assert worker_count() == 3
    assert szego_experiment(BERGMAN, "x", "x^2", [8, 16, 32]).to_csv() == a
    monkeypatch.setenv("SZEGO_THREADS", "-1")
    with pytest.raises(DomainError):
        worker_count()

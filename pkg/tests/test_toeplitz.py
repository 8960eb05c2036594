import math

import numpy as np
import pytest

from szego_lab.errors import DomainError
from szego_lab.moments import MomentSpace
from szego_lab.quad import QuadConfig
from szego_lab.toeplitz import (CLOSED_FORM, DIAGONAL, MAX_ORDER, QUADRATURE, assemble,
                                assemble_angle_only, assemble_general, effective_samples,
                                moment_factors, read_matrix_binary, read_matrix_json,
                                symbol_deviation, write_matrix_binary, write_matrix_json)

BERGMAN = MomentSpace.bergman()
FOCK = MomentSpace.fock()


def test_identity_for_constant_symbol():
    m = assemble(BERGMAN, "1", 4)
    assert m.provenance == CLOSED_FORM
    np.testing.assert_allclose(m.entries, np.eye(5), atol=1e-15)


def test_cos_theta_entries():
    b = assemble_angle_only(BERGMAN, "cos(theta)", 3).entries
    g = assemble_general(BERGMAN, "cos(theta)", 3).entries
    assert b[0, 1] == pytest.approx(math.sqrt(2) / 3, abs=1e-15)
    np.testing.assert_allclose(g, b, atol=1e-13)
    f = assemble(FOCK, "cos(theta)", 3).entries
    assert f[0, 1] == pytest.approx(math.sqrt(math.pi) / 4, abs=1e-14)


def test_bergman_tridiagonal_closed_form():
    # A[k, k+1] = (1/2) sqrt((k+1)(k+2)) / (k + 3/2) on the Bergman space
    A = assemble(BERGMAN, "cos(theta)", 20).entries
    k = np.arange(20)
    np.testing.assert_allclose(np.diag(A, 1).real, 0.5 * np.sqrt((k + 1) * (k + 2)) / (k + 1.5),
                               rtol=1e-13)
    np.testing.assert_allclose(np.diag(A, 2), 0.0, atol=1e-15)


def test_general_symbol_x():
    A = assemble(BERGMAN, "x", 2)
    assert A.provenance == QUADRATURE
    assert A.entries[0, 1] == pytest.approx(math.sqrt(2) / 4, abs=1e-14)


def test_radial_symbol_is_diagonal():
    A = assemble(BERGMAN, "r^2", 6)
    assert A.provenance == DIAGONAL
    n = np.arange(7)
    np.testing.assert_allclose(np.diag(A.entries).real, (n + 1) / (n + 2), rtol=1e-13)
    np.testing.assert_array_equal(A.entries - np.diag(np.diag(A.entries)), 0)


def test_imaginary_part_of_sine_symbol():
    A = assemble(BERGMAN, "sin(theta)", 2).entries
    # A[k, l] carries the coefficient of e^{i(k-l) theta}; for sin that is i/2 at k - l = -1
    assert A[0, 1] == pytest.approx(1j * math.sqrt(2) / 3, abs=1e-15)
    assert A[1, 0] == pytest.approx(-1j * math.sqrt(2) / 3, abs=1e-15)


def test_nesting_and_hermiticity():
    sym = "x*exp(-r^2)*sin(theta) + cos(2*theta)/(1 + r^2)"
    A = assemble(FOCK, sym, 24)
    B = assemble(FOCK, sym, 25)
    assert A.hermiticity_defect() == 0.0
    np.testing.assert_allclose(B.entries[:25, :25], A.entries, atol=1e-13, rtol=0)


@pytest.mark.parametrize("space, sym", [(BERGMAN, "x/(1 - r)"), (BERGMAN, "log(1 - r)"),
                                        (FOCK, "x"), (FOCK, "r^2")])
def test_unbounded_symbols_rejected(space, sym):
    with pytest.raises(DomainError, match="unbounded"):
        assemble(space, sym, 4)


def test_moment_factors():
    F = moment_factors(BERGMAN, 5)
    np.testing.assert_array_equal(np.diag(F), 1.0)
    assert np.all(F <= 1.0 + 1e-15)


def test_effective_samples():
    assert effective_samples(512, 16) == 512
    assert effective_samples(512, 1024) == 8192


def test_order_guards():
    with pytest.raises(DomainError):
        assemble(BERGMAN, "1", -1)
    with pytest.raises(DomainError):
        assemble(BERGMAN, "1", MAX_ORDER + 1)


def test_deviation_closed_form():
    # sigma = r^2, boundary 1: D_N = (1/(N+1)) sum_{n<=N} 1/(n+2)
    for N in (0, 9, 30):
        ref = sum(1.0 / (n + 2) for n in range(N + 1)) / (N + 1)
        assert symbol_deviation(BERGMAN, "r^2", "1", N) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("writer, reader, name", [(write_matrix_json, read_matrix_json, "m.json"),
                                                  (write_matrix_binary, read_matrix_binary, "m.bin")])
def test_export_round_trip(tmp_path, writer, reader, name):
    m = assemble(BERGMAN, "x + sin(theta)", 5, QuadConfig(angular_samples=64))
    path = tmp_path / name
    writer(m, path)
    back = reader(path)
    assert back.N == 5 and back.provenance == m.provenance
    np.testing.assert_array_equal(back.entries, m.entries)


def test_binary_header(tmp_path):
    m = assemble(BERGMAN, "1", 2)
    path = tmp_path / "m.bin"
    write_matrix_binary(m, path)
    raw = path.read_bytes()
    assert raw[:4] == b"RCTM" and len(raw) == 16 + 9 * 16
    assert int.from_bytes(raw[8:12], "little") == 2
    path.write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(DomainError):
        read_matrix_binary(path)

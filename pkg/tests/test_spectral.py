import math

import numpy as np
import pytest

from qinterval.errors import PreconditionError
from qinterval.lipnorm import QFunction, seminorm
from qinterval.qcore import rho
from qinterval.spectral import (
    TruncatedOperator,
    derivative_gram,
    derivative_norm,
    haar_projection_mass,
    relation_residuals,
    rep_A,
    rep_B,
    shift_weights,
)

GOLDEN = (math.sqrt(5) - 1) / 2


def test_rep_A_examples():
    assert rep_A(0.3, 1).entries.tolist() == [[1.0]]
    A = rep_A(0.5, 3)
    assert np.allclose(A.entries, np.diag([1, 0.25, 0.0625]), rtol=0, atol=1e-16)
    eig = np.sort(np.linalg.eigvalsh(rep_A(0.7, 12).entries))[::-1]
    assert np.allclose(eig, 0.7 ** (2 * np.arange(12)), rtol=1e-14, atol=0)
    with pytest.raises(PreconditionError):
        rep_A(0.5, 0)


def test_rep_A_spectrum_lies_in_the_quantised_interval():
    q, N = 0.6, 20
    eig = np.linalg.eigvalsh(rep_A(q, N).entries)
    k = np.log(eig) / (2 * math.log(q))
    assert np.allclose(k, np.round(k), atol=1e-12)
    assert sorted(np.round(k).astype(int).tolist()) == list(range(N))


def test_rep_B_examples():
    B = rep_B(0.5, 2)
    assert B.entries[1, 0] == pytest.approx(math.sqrt(0.75), rel=1e-15)
    assert np.count_nonzero(B.entries) == 1
    with pytest.raises(PreconditionError):
        rep_B(0.5, 1)


@pytest.mark.parametrize("q", [0.1, 0.5, 0.7, 0.9, 0.99])
def test_BstarB_diagonal(q):
    N = 30
    B = rep_B(q, N)
    d = np.diag((B.H @ B).entries).real
    ks = np.arange(N - 1)
    expected = q ** (2 * ks) * (1 - q ** (2 * (ks + 1)))
    assert np.allclose(d[:-1], expected, rtol=1e-13, atol=0)
    # the last column has no outgoing weight in the truncation
    assert d[-1] == 0.0


@pytest.mark.parametrize("q", [0.1, 0.5, 0.7, 0.9, 0.99])
def test_rep_B_norm_is_largest_weight(q):
    w = shift_weights(q, 50)
    assert rep_B(q, 51).norm() == pytest.approx(w.max(), rel=1e-13)


def test_shift_weights_decrease_only_below_golden_threshold():
    # w_(k+1)/w_k < 1 for every k iff q^2 <= (sqrt5 - 1)/2
    for q in (0.1, 0.5, 0.7, math.sqrt(GOLDEN) - 1e-6):
        w = shift_weights(q, 51)
        assert np.all(np.diff(w) < 0)
        assert rep_B(q, 52).norm() == pytest.approx(w[0], rel=1e-13)
    for q in (0.9, 0.99):
        w = shift_weights(q, 51)
        assert w[1] > w[0]
        assert rep_B(q, 52).norm() > w[0]


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9, 0.99])
@pytest.mark.parametrize("N", [4, 16, 64])
def test_interior_relation_residuals(q, N):
    res = relation_residuals(q, N)
    assert set(res) == {"AB-q2BA", "A-Astar", "BstarB-A(1-q2A)", "BBstar-q-2A(1-A)"}
    assert res["A-Astar"] == 0.0
    assert all(v <= 1e-13 for v in res.values())


def test_boundary_residuals_are_reported_separately():
    q, N = 0.5, 8
    boundary = relation_residuals(q, N, block="boundary")
    full = relation_residuals(q, N, block="full")
    # B*B loses the weight that would leave e_(N-1)
    expected = q ** (2 * (N - 1)) * (1 - q ** (2 * N))
    assert boundary["BstarB-A(1-q2A)"] == pytest.approx(expected, rel=1e-12)
    assert full["BstarB-A(1-q2A)"] == boundary["BstarB-A(1-q2A)"]
    # BB* and AB = q^2 BA hold on the whole truncation
    assert full["BBstar-q-2A(1-A)"] <= 1e-15
    assert full["AB-q2BA"] <= 1e-15
    with pytest.raises(ValueError):
        relation_residuals(q, N, block="middle")
    with pytest.raises(PreconditionError):
        relation_residuals(q, 2)


def test_derivative_norm_examples():
    assert derivative_norm(0.5, QFunction.constant(2.0)) == 0.0
    for q in (0.3, 0.8):
        for k in range(1, 8):
            got = derivative_norm(q, QFunction.indicator(k))
            assert got == pytest.approx(max(rho(q, k - 1), rho(q, k)), rel=1e-13)
    with pytest.raises(PreconditionError):
        derivative_gram(0.5, QFunction.from_array([1, 2, 3]), 3)


@pytest.mark.parametrize("q", [0.5, 0.9])
def test_derivative_norm_equals_seminorm(q, rng):
    worst = 0.0
    for _ in range(100):
        s = int(rng.integers(1, 11))
        f = QFunction.from_array(rng.uniform(-1, 1, s) + 1j * rng.uniform(-1, 1, s), complex(*rng.uniform(-1, 1, 2)))
        worst = max(worst, abs(derivative_norm(q, f) - seminorm(q, f).value))
    assert worst <= 1e-12


def test_gram_entries_nonnegative_and_norm_is_max(rng):
    for _ in range(30):
        f = QFunction.from_array(rng.normal(size=8), rng.normal())
        g = derivative_gram(0.6, f, 20)
        assert len(g.diag) == 20
        assert all(v >= 0 for v in g.diag)
        assert g.norm() == max(g.diag)
        # larger truncations only add zero entries
        assert derivative_gram(0.6, f, 40).norm() == g.norm()


def test_haar_projection_mass():
    assert haar_projection_mass(0.5, 3) == 0.99609375
    for q in (0.1, 0.5, 0.9, 0.99):
        assert haar_projection_mass(q, 0) == pytest.approx(1 - q * q, abs=1e-15)
        vals = [haar_projection_mass(q, n) for n in range(60)]
        # strictly increasing until 1 - q^(2(n+1)) rounds to 1.0
        assert all(a < b for a, b in zip(vals, vals[1:]) if b < 1.0)
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        for n in (0, 5, 59):
            assert abs(vals[n] - (1 - q ** (2 * (n + 1)))) <= 1e-15
    assert haar_projection_mass(0.5, 200) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(PreconditionError):
        haar_projection_mass(0.5, -1)


def test_csv_round_trip(tmp_path):
    B = rep_B(0.7, 6)
    path = tmp_path / "b.csv"
    text = B.to_csv(path)
    assert text.splitlines()[0] == "row,col,re,im"
    assert path.read_text() == text
    back = TruncatedOperator.from_csv(text, 6)
    assert np.array_equal(back.entries, B.entries)


def test_operator_is_immutable():
    A = rep_A(0.5, 3)
    with pytest.raises(ValueError):
        A.entries[0, 0] = 2.0
    with pytest.raises(ValueError):
        TruncatedOperator(3, np.eye(2), "derived")

import json

import numpy as np
import pytest

from qinterval.errors import PreconditionError
from qinterval.lipnorm import QFunction, seminorm
from qinterval.qcore import ZERO, QPoint, diameter_bounds, dq, inv_rho, tail_sum
from qinterval.transport import (
    StateMeasure,
    greedy_transport,
    mk_diameter,
    mk_distance,
    state_from_json,
    state_to_json,
)


def random_measure(rng, depth, atoms):
    w = np.zeros(depth + 2)
    idx = rng.choice(depth + 2, size=min(atoms, depth + 2), replace=False)
    w[idx] = rng.uniform(0.05, 1.0, idx.size)
    return StateMeasure.normalized(depth, w)


def test_state_measure_validation():
    with pytest.raises(ValueError):
        StateMeasure(2, [0.5, 0.5])
    with pytest.raises(ValueError):
        StateMeasure(1, [0.5, 0.6, -0.1])
    with pytest.raises(ValueError):
        StateMeasure(1, [0.5, 0.4, 0.0])
    with pytest.raises(ValueError):
        StateMeasure.dirac(3, QPoint(4))
    mu = StateMeasure.dirac(3, ZERO)
    assert mu.weights.tolist() == [0, 0, 0, 0, 1]
    assert mu.points[-1] == ZERO and mu.points[0] == QPoint(0)


def test_dirac_pairs_reproduce_dq():
    q, depth, tol = 0.6, 12, 1e-12
    pts = [QPoint(k) for k in range(depth + 1)] + [ZERO]
    for x in pts:
        for y in pts:
            got = mk_distance(q, StateMeasure.dirac(depth, x), StateMeasure.dirac(depth, y), tol)
            assert abs(got.value - dq(q, x, y, tol).value) <= 2 * tol


def test_self_distance_is_zero(rng):
    mu = random_measure(rng, 6, 5)
    assert mk_distance(0.5, mu, mu).value == 0.0
    assert greedy_transport(0.5, mu, mu) == 0.0


def test_hand_computed_example():
    q = 0.5
    mu = StateMeasure(2, [0.5, 0.0, 0.5, 0.0])
    nu = StateMeasure.dirac(2, QPoint(1))
    expected = 0.5 * (inv_rho(q, 0) + inv_rho(q, 1))
    assert mk_distance(q, mu, nu).value == pytest.approx(expected, rel=1e-15)
    assert greedy_transport(q, mu, nu) == pytest.approx(expected, rel=1e-15)


def test_uniform_versus_dirac():
    q = 0.7
    mu = StateMeasure(3, [0.25, 0.25, 0.25, 0.25, 0.0])
    nu = StateMeasure.dirac(3, QPoint(0))
    # mass 1/4 travels 0, 1, 2 and 3 gaps
    by_pairs = 0.25 * sum(dq(q, QPoint(0), QPoint(k)).value for k in range(4))
    by_gaps = 0.75 * inv_rho(q, 0) + 0.5 * inv_rho(q, 1) + 0.25 * inv_rho(q, 2)
    assert by_pairs == pytest.approx(by_gaps, rel=1e-15)
    assert mk_distance(q, mu, nu).value == pytest.approx(by_gaps, rel=1e-15)
    assert greedy_transport(q, mu, nu) == pytest.approx(by_gaps, rel=1e-15)


def test_greedy_matches_closed_form(rng):
    worst = 0.0
    for _ in range(500):
        q = float(rng.uniform(0.05, 0.95))
        depth = int(rng.integers(4, 10))
        mu, nu = random_measure(rng, depth, 6), random_measure(rng, depth, 6)
        worst = max(worst, abs(mk_distance(q, mu, nu, 1e-13).value - greedy_transport(q, mu, nu)))
    assert worst <= 1e-10


def test_mk_is_a_metric(rng):
    for _ in range(200):
        q = float(rng.uniform(0.1, 0.95))
        a, b, c = (random_measure(rng, 7, 5) for _ in range(3))
        ab = mk_distance(q, a, b).value
        assert ab == mk_distance(q, b, a).value
        assert mk_distance(q, a, c).value <= ab + mk_distance(q, b, c).value + 1e-10


def test_radius_only_from_mass_crossing_the_last_gap():
    mu = StateMeasure(2, [0.5, 0.5, 0.0, 0.0])
    nu = StateMeasure(2, [0.0, 0.5, 0.5, 0.0])
    assert mk_distance(0.9, mu, nu).radius == 0.0
    nu0 = StateMeasure(2, [0.0, 0.0, 0.5, 0.5])
    r = mk_distance(0.9, mu, nu0, 1e-10).radius
    assert 0 < r <= 0.5 * 1e-10


def test_dual_feasibility(rng):
    q, depth, tol = 0.6, 8, 1e-13
    for _ in range(100):
        mu, nu = random_measure(rng, depth, 6), random_measure(rng, depth, 6)
        f = QFunction.from_array(rng.uniform(-1, 1, depth + 1) + 1j * rng.uniform(-1, 1, depth + 1), complex(*rng.uniform(-1, 1, 2)))
        L = seminorm(q, f).value
        f = (1.0 / L) * f
        vals = [f(x) for x in mu.points]
        gap = abs(mu.integrate(vals) - nu.integrate(vals))
        assert gap <= mk_distance(q, mu, nu, tol).value + 1e-9


def test_dual_sup_is_attained_by_real_profile(rng):
    # f(t) = iota(t) is 1-Lipschitz and realises the sup for stochastically ordered pairs
    q, depth = 0.7, 6
    mu = StateMeasure.dirac(depth, QPoint(0))
    nu = random_measure(rng, depth, 4)
    f = [dq(q, QPoint(0), x, 1e-14).value for x in mu.points]
    assert abs(mu.integrate(f) - nu.integrate(f)) == pytest.approx(mk_distance(q, mu, nu, 1e-14).value, abs=1e-12)


def test_weak_star_witness():
    # delta_(q^(2n)) -> delta_0: mk tends to 0 and so do all test integrals
    q, depth = 0.5, 40
    target = StateMeasure.dirac(depth, ZERO)
    ident = [0.0 if x.is_zero else q ** (2 * x.index) for x in target.points]
    chis = [[1.0 if x == QPoint(j) else 0.0 for x in target.points] for j in range(3)]
    prev = np.inf
    for n in (5, 10, 20, 40):
        mu = StateMeasure.dirac(depth, QPoint(n))
        d = mk_distance(q, mu, target).value
        assert d < prev
        assert d == pytest.approx(tail_sum(q, n).value, rel=1e-12)
        prev = d
        assert abs(mu.integrate(ident) - target.integrate(ident)) <= q ** (2 * n)
        for chi in chis:
            assert mu.integrate(chi) == target.integrate(chi)
    assert prev < 1e-11


def test_mk_diameter():
    for q in (0.1, 0.5, 0.9):
        tol = 1e-12
        d = mk_diameter(q, 3, tol)
        ref = dq(q, QPoint(0), ZERO, tol)
        assert abs(d.value - ref.value) <= 2 * tol
        lower, upper = diameter_bounds(q)
        assert lower <= d.lo and d.hi <= upper
    assert mk_diameter(0.9).value > mk_diameter(0.5).value
    with pytest.raises(PreconditionError):
        mk_diameter(0.5, 0)


def test_mismatched_depths():
    with pytest.raises(PreconditionError):
        mk_distance(0.5, StateMeasure.dirac(2, ZERO), StateMeasure.dirac(3, ZERO))
    with pytest.raises(PreconditionError):
        greedy_transport(0.5, StateMeasure.dirac(2, ZERO), StateMeasure.dirac(3, ZERO))


def test_json_round_trip(rng):
    mu = random_measure(rng, 5, 4)
    obj = json.loads(json.dumps(state_to_json(mu)))
    assert set(obj) == {"depth", "weights"} and len(obj["weights"]) == 7
    back = state_from_json(obj)
    assert back.depth == 5 and np.array_equal(back.weights, mu.weights)
    with pytest.raises(ValueError):
        state_from_json({"weights": [1.0]})

"""Randomised cross-checks between each computation and its independent oracle.

Every suite is deterministic given the seed and returns a :class:`SuiteResult`
whose ``max_dev`` is the worst observed deviation (or constraint violation)
compared against a fixed tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .continuum import d1, phi
from .ghdist import embedded_truncation, gh_oracle_tiny, hausdorff_line
from .lipnorm import QFunction, brute_force_seminorm, seminorm
from .spectral import derivative_norm, relation_residuals
from .transport import StateMeasure, greedy_transport, mk_distance

__all__ = ["SuiteResult", "SUITES", "random_qfunction", "random_state", "run_all"]

# absolute tolerances below assume seminorms of moderate size; at q = 0.1 a
# gap weight of index 10 is ~1e10 and absolute 1e-8 is below double resolution
Q_GRID = (0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_dev: float
    tol: float
    cases: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} cases={self.cases} max_dev={self.max_dev:.17g} tol={self.tol:.17g}"


def random_qfunction(rng: np.random.Generator, max_support: int = 10) -> QFunction:
    """Complex values in ``[-1, 1]^2`` at ``k = 0..s-1`` with ``s <= max_support``."""
    s = int(rng.integers(0, max_support + 1))
    vals = rng.uniform(-1, 1, s) + 1j * rng.uniform(-1, 1, s)
    tail = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return QFunction.from_array(vals, tail)


def random_state(rng: np.random.Generator, depth: int, atoms: int) -> StateMeasure:
    """Random probability vector on ``min(atoms, depth + 2)`` random atoms."""
    w = np.zeros(depth + 2)
    where = rng.choice(depth + 2, size=min(atoms, depth + 2), replace=False)
    w[where] = rng.uniform(0.05, 1.0, where.size)
    return StateMeasure.normalized(depth, w)


def seminorm_suite(rng, trials):
    worst = 0.0
    for _ in range(trials):
        q = float(rng.choice(Q_GRID))
        f = random_qfunction(rng)
        worst = max(worst, abs(seminorm(q, f).value - brute_force_seminorm(q, f, depth=16)))
    return SuiteResult("seminorm_vs_bruteforce", worst <= 1e-8, worst, 1e-8, trials)


def derivative_suite(rng, trials):
    worst = 0.0
    for _ in range(trials):
        q = float(rng.choice((0.5, 0.9)))
        f = random_qfunction(rng)
        worst = max(worst, abs(derivative_norm(q, f, f.support_bound + 4) - seminorm(q, f).value))
    return SuiteResult("derivative_norm_vs_seminorm", worst <= 1e-12, worst, 1e-12, trials)


def transport_suite(rng, trials):
    worst = 0.0
    for _ in range(trials):
        q = float(rng.choice(Q_GRID))
        depth = int(rng.integers(0, 7))
        mu = random_state(rng, depth, int(rng.integers(1, 9)))
        nu = random_state(rng, depth, int(rng.integers(1, 9)))
        worst = max(worst, abs(mk_distance(q, mu, nu, 1e-13).value - greedy_transport(q, mu, nu)))
    return SuiteResult("greedy_vs_cdf_transport", worst <= 1e-10, worst, 1e-10, trials)


def gh_suite(rng, trials):
    # max_dev is the largest violation of either side of the sandwich
    worst = -np.inf
    for _ in range(trials):
        a = _random_truncation(rng)
        b = _random_truncation(rng)
        exact = gh_oracle_tiny(a.space, b.space)
        upper = hausdorff_line(a.line, b.line) + a.radius + b.radius
        lower = 0.5 * abs(a.space.diameter - b.space.diameter)
        worst = max(worst, exact - upper, lower - exact)
    return SuiteResult("gh_oracle_sandwich", worst <= 1e-9, float(worst), 1e-9, trials)


def _random_truncation(rng):
    q = float(rng.uniform(0.05, 0.95))
    include_zero = bool(rng.integers(0, 2))
    # at most 5 points in total
    depth = int(rng.integers(0, 4 if include_zero else 5))
    return embedded_truncation(q, depth, include_zero)


def relations_suite(rng, trials):
    worst = 0.0
    count = 0
    for N in (4, 16, 64):
        for q in (0.1, 0.5, 0.9, 0.99):
            worst = max(worst, *relation_residuals(q, N).values())
            count += 1
    return SuiteResult("relation_residuals", worst <= 1e-13, worst, 1e-13, count)


def phi_suite(rng, trials):
    t = np.linspace(-np.pi / 2, np.pi / 2, 200)
    s = phi(t)
    dev = float(np.max(np.abs(d1(s[:, None], s[None, :]) - np.abs(t[:, None] - t[None, :]))))
    return SuiteResult("phi_isometry", dev <= 1e-12, dev, 1e-12, t.size**2)


SUITES = (
    seminorm_suite,
    derivative_suite,
    transport_suite,
    gh_suite,
    relations_suite,
    phi_suite,
)


def run_all(seed: int = 0, trials: int = 50) -> list[SuiteResult]:
    """Run every suite with its own generator spawned from ``seed``."""
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    return [suite(np.random.default_rng(ss), trials) for suite, ss in zip(SUITES, children)]

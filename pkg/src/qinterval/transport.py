"""Monge-Kantorovich distance between states on a truncation of ``X_q``.

A state is a probability vector on ``q^0, q^2, ..., q^(2N)`` and the limit
point 0. The line embedding ``x -> d_q(1, x) - pi/2`` is isometric, so the
Lipschitz-dual sup reduces to one-dimensional transport: the distance is the
integral of ``|F_mu - F_nu|`` over the consecutive gaps of the chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .qcore import ZERO, CertifiedValue, QPoint, as_qparam, dq, inv_rho_terms, tail_sum

__all__ = [
    "StateMeasure",
    "greedy_transport",
    "mk_diameter",
    "mk_distance",
    "state_from_json",
    "state_to_json",
]


@dataclass(frozen=True, eq=False)
class StateMeasure:
    """Probability weights at ``QPoint(0..depth)`` followed by the limit point.

    ``weights`` has length ``depth + 2``; its last entry is the mass at 0.
    """

    depth: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if self.depth < 0:
            raise ValueError(f"depth must be nonnegative, got {self.depth}")
        if w.shape != (self.depth + 2,):
            raise ValueError(f"expected {self.depth + 2} weights for depth {self.depth}, got {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(math.fsum(w) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {math.fsum(w)!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def dirac(cls, depth: int, x: QPoint) -> "StateMeasure":
        w = np.zeros(depth + 2)
        if x.is_zero:
            w[-1] = 1.0
        elif x.index <= depth:
            w[x.index] = 1.0
        else:
            raise ValueError(f"{x!r} lies beyond depth {depth}")
        return cls(depth, w)

    @classmethod
    def normalized(cls, depth: int, masses) -> "StateMeasure":
        m = np.asarray(masses, dtype=float)
        return cls(depth, m / m.sum())

    @property
    def points(self) -> list[QPoint]:
        """Atoms in chain order: ``QPoint(0), ..., QPoint(depth), ZERO``."""
        return [QPoint(k) for k in range(self.depth + 1)] + [ZERO]

    def integrate(self, values) -> complex:
        """``sum_i w_i f(x_i)`` for ``values`` listed in chain order."""
        return complex(np.dot(self.weights, np.asarray(values)))


def _check_pair(mu: StateMeasure, nu: StateMeasure):
    if mu.depth != nu.depth:
        raise PreconditionError(f"measures have different support depths ({mu.depth} vs {nu.depth})")


def mk_distance(q, mu: StateMeasure, nu: StateMeasure, tol: float = 1e-12) -> CertifiedValue:
    """Monge-Kantorovich (Wasserstein-1) distance between two states.

    ``sum_g |F_mu(g) - F_nu(g)| * len(g)`` over the gaps ``g`` of the chain
    ``q^0 < ... < q^(2N) < 0`` (ordered by the line embedding); the last gap
    has the certified length ``d_q(q^(2N), 0)``.
    """
    qp = as_qparam(q)
    _check_pair(mu, nu)
    n = mu.depth
    cdf_gap = np.abs(np.cumsum(mu.weights - nu.weights)[:-1])
    last = tail_sum(qp, n, tol)
    finite = cdf_gap[:-1] * inv_rho_terms(qp, 0, n)
    value = math.fsum(finite.tolist() + [cdf_gap[-1] * last.value])
    return CertifiedValue(value, cdf_gap[-1] * last.radius)


def greedy_transport(q, mu: StateMeasure, nu: StateMeasure, tol: float = 1e-13) -> float:
    """Cost of the monotone (north-west corner) coupling along the chain.

    Every moved unit of mass is charged the pairwise distance from
    :func:`qinterval.qcore.dq`, so this is independent of the CDF formula.
    """
    qp = as_qparam(q)
    _check_pair(mu, nu)
    pts = mu.points
    a = mu.weights.tolist()
    b = nu.weights.tolist()
    i = j = 0
    cost = []
    while i < len(a) and j < len(b):
        m = min(a[i], b[j])
        if m > 0:
            cost.append(m * dq(qp, pts[i], pts[j], tol).value)
        a[i] -= m
        b[j] -= m
        # advance whichever side is exhausted (both on a tie)
        if a[i] <= 0:
            i += 1
        if b[j] <= 0:
            j += 1
    return math.fsum(cost)


def mk_diameter(q, depth: int = 1, tol: float = 1e-12) -> CertifiedValue:
    """``mk(delta_1, delta_0)``, the largest distance between point states."""
    if depth < 1:
        raise PreconditionError(f"depth must be at least 1, got {depth}")
    return mk_distance(q, StateMeasure.dirac(depth, QPoint(0)), StateMeasure.dirac(depth, ZERO), tol)


def state_to_json(mu: StateMeasure) -> dict:
    """``{"depth": N, "weights": [w0, ..., wN, wZero]}``."""
    return {"depth": mu.depth, "weights": [float(w) for w in mu.weights]}


def state_from_json(obj: dict) -> StateMeasure:
    try:
        return StateMeasure(int(obj["depth"]), obj["weights"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed StateMeasure JSON: {exc!r}") from exc

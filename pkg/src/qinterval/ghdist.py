"""Hausdorff and Gromov-Hausdorff distances for the quantised intervals.

Upper bounds come from a concrete common ambient space: every ``X_q`` embeds
isometrically into the real line via ``x -> d_q(1, x) - pi/2``, so the
Hausdorff distance of the embedded images bounds the Gromov-Hausdorff
distance from above. For tiny finite spaces an exact value is available
from exhaustive search over correspondences; the two are reported
separately and never mixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, SizeCapError
from .qcore import (
    ZERO,
    CertifiedValue,
    QPoint,
    as_qparam,
    diameter_bounds,
    dq,
    embed_chain,
    inv_rho,
    tail_bound,
    tail_depth,
)

__all__ = [
    "ConvergenceCertificate",
    "FiniteMetricSpace",
    "LineSet",
    "TruncationImage",
    "convergence_certificate",
    "embedded_truncation",
    "gh_oracle_tiny",
    "gh_upper_bound_via_line",
    "hausdorff_line",
    "truncation_gh_upper_bound",
]

HALF_PI = math.pi / 2.0

#: Largest ``|X| * |Y|`` accepted by :func:`gh_oracle_tiny`.
ORACLE_CAP = 36


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labelled points with a symmetric distance table."""

    labels: tuple
    dist: np.ndarray

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        n = len(self.labels)
        if d.shape != (n, n):
            raise ValueError(f"distance table must be {n}x{n}, got {d.shape}")
        if np.any(d < 0) or np.any(np.diag(d) != 0) or not np.array_equal(d, d.T):
            raise ValueError("distance table must be nonnegative, symmetric, with zero diagonal")
        # d[i,k] <= d[i,j] + d[j,k] for all triples
        if n and np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + 1e-10):
            raise ValueError("distance table violates the triangle inequality")
        d.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dist", d)

    def __len__(self):
        return len(self.labels)

    @property
    def diameter(self) -> float:
        return float(self.dist.max()) if len(self) else 0.0

    @classmethod
    def from_line(cls, points: Sequence[float], labels=None) -> "FiniteMetricSpace":
        p = np.asarray(points, dtype=float)
        if labels is None:
            labels = range(len(p))
        return cls(tuple(labels), np.abs(p[:, None] - p[None, :]))


@dataclass(frozen=True, eq=False)
class LineSet:
    """A nonempty compact subset of the real line: finitely many points or an interval."""

    points: np.ndarray | None = None
    interval: tuple[float, float] | None = None

    def __post_init__(self):
        if (self.points is None) == (self.interval is None):
            raise ValueError("give exactly one of points or interval")
        if self.points is not None:
            p = np.sort(np.asarray(self.points, dtype=float).ravel())
            if p.size == 0:
                raise DomainError("a LineSet must be nonempty")
            p.setflags(write=False)
            object.__setattr__(self, "points", p)
        else:
            lo, hi = map(float, self.interval)
            if not lo <= hi:
                raise DomainError(f"interval needs lo <= hi, got [{lo}, {hi}]")
            object.__setattr__(self, "interval", (lo, hi))

    @classmethod
    def finite(cls, points) -> "LineSet":
        return cls(points=points)

    @classmethod
    def segment(cls, lo: float, hi: float) -> "LineSet":
        return cls(interval=(lo, hi))

    @property
    def is_interval(self) -> bool:
        return self.interval is not None


def _dist_to_points(t: np.ndarray, pts: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(pts, t)
    left = pts[np.clip(idx - 1, 0, pts.size - 1)]
    right = pts[np.clip(idx, 0, pts.size - 1)]
    return np.minimum(np.abs(t - left), np.abs(t - right))


def _directed(A: LineSet, B: LineSet) -> float:
    """``sup_{a in A} dist(a, B)``."""
    if not A.is_interval:
        a = A.points
        if B.is_interval:
            lo, hi = B.interval
            return float(np.max(np.maximum(0.0, np.maximum(lo - a, a - hi))))
        return float(np.max(_dist_to_points(a, B.points)))
    lo, hi = A.interval
    if B.is_interval:
        blo, bhi = B.interval
        return max(0.0, blo - lo, hi - bhi)
    # dist(., B) is piecewise linear with peaks at midpoints of B
    mids = 0.5 * (B.points[:-1] + B.points[1:])
    cand = np.concatenate(([lo, hi], mids[(mids > lo) & (mids < hi)]))
    return float(np.max(_dist_to_points(cand, B.points)))


def hausdorff_line(A: LineSet, B: LineSet) -> float:
    """Exact Hausdorff distance between two subsets of the line."""
    return max(_directed(A, B), _directed(B, A))


@dataclass(frozen=True, eq=False)
class TruncationImage:
    """A finite piece of ``X_q`` with its intrinsic metric and its line image.

    ``radius`` bounds the error of the embedded coordinate of the limit
    point (0 when the limit point is excluded).
    """

    q: float
    points: tuple[QPoint, ...]
    space: FiniteMetricSpace
    line: LineSet
    radius: float


def embedded_truncation(q, depth: int, include_zero: bool = True, tol: float = 1e-13) -> TruncationImage:
    """``{q^(2k) : k <= depth}`` (plus 0 if ``include_zero``) as a finite metric space."""
    qp = as_qparam(q)
    chain, iota0 = embed_chain(qp, depth, tol)
    pts = [QPoint(k) for k in range(depth + 1)]
    coords = list(chain)
    radius = 0.0
    if include_zero:
        pts.append(ZERO)
        coords.append(iota0.value)
        radius = iota0.radius
    n = len(pts)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = dq(qp, pts[i], pts[j], tol).value
    return TruncationImage(qp.q, tuple(pts), FiniteMetricSpace(tuple(pts), d), LineSet.finite(coords), radius)


def truncation_gh_upper_bound(
    q1, depth1: int, q2, depth2: int, include_zero: bool = True, tol: float = 1e-13
) -> float:
    """Hausdorff distance of the embedded images of two finite truncations.

    An upper bound for their Gromov-Hausdorff distance, widened by the
    certification radii of the limit-point coordinates.
    """
    a = embedded_truncation(q1, depth1, include_zero, tol)
    b = embedded_truncation(q2, depth2, include_zero, tol)
    return hausdorff_line(a.line, b.line) + a.radius + b.radius


def _line_image(q, tol: float, depth: int | None):
    """Truncated embedded image of the whole space with its error budget.

    The omitted points ``q^(2k)``, ``k > D``, lie between the images of
    ``q^(2D)`` and 0, so they are within ``tail(D)/2`` of the truncation.
    """
    qp = as_qparam(q)
    need = tail_depth(qp, tol)
    D = need if depth is None else max(depth, need)
    chain, iota0 = embed_chain(qp, D, tol)
    line = LineSet.finite(np.append(chain, iota0.value))
    return line, 0.5 * tail_bound(qp, D), iota0.radius, D


def gh_upper_bound_via_line(q1, q2, depth: int | None = None, tol: float = 1e-10) -> CertifiedValue:
    """Upper bound for ``dist_GH(X_q1, X_q2)`` through the line embeddings.

    ``depth`` is a minimum truncation depth; it is raised until both
    omitted tails are at most ``tol``. The value is the Hausdorff distance of
    the truncated images plus the allowance for the omitted points; the
    radius covers the uncertainty in the embedded limit points. Hence
    ``value + radius`` is a rigorous upper bound and ``q1 == q2`` gives at
    most ``2 * tol``.
    """
    half = 0.5 * tol
    line1, slack1, r1, _ = _line_image(q1, half, depth)
    line2, slack2, r2, _ = _line_image(q2, half, depth)
    return CertifiedValue(hausdorff_line(line1, line2) + slack1 + slack2, r1 + r2)


def gh_oracle_tiny(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """Exact Gromov-Hausdorff distance of two small finite metric spaces.

    Half the least distortion over all correspondences. Distortion only
    grows when pairs are added, so it suffices to search correspondences of
    the form ``graph(f) ∪ graph(g)^T`` with ``f: X -> Y``, ``g: Y -> X``;
    the search is exhaustive with branch-and-bound pruning.
    """
    n, m = len(X), len(Y)
    if n == 0 or m == 0:
        raise DomainError("metric spaces must be nonempty")
    if n * m > ORACLE_CAP:
        raise SizeCapError(f"|X|*|Y| = {n * m} exceeds the exhaustive-search cap {ORACLE_CAP}")
    dX = X.dist.tolist()
    dY = Y.dist.tolist()
    best = [max(X.diameter, Y.diameter)]  # distortion of any correspondence is at most this

    def cost(pairs, x, y):
        return max((abs(dX[x][x2] - dY[y][y2]) for x2, y2 in pairs), default=0.0)

    def cover_y(pairs, todo, dis):
        if dis >= best[0]:
            return
        if not todo:
            best[0] = dis
            return
        y = todo[0]
        options = sorted((max(dis, cost(pairs, x, y)), x) for x in range(n))
        for new, x in options:
            if new >= best[0]:
                break
            pairs.append((x, y))
            cover_y(pairs, todo[1:], new)
            pairs.pop()

    def assign_x(pairs, x, dis):
        if dis >= best[0]:
            return
        if x == n:
            covered = {y for _, y in pairs}
            cover_y(pairs, [y for y in range(m) if y not in covered], dis)
            return
        options = sorted((max(dis, cost(pairs, x, y)), y) for y in range(m))
        for new, y in options:
            if new >= best[0]:
                break
            pairs.append((x, y))
            assign_x(pairs, x + 1, new)
            pairs.pop()

    # best starts at an attainable value (any correspondence meets it), so
    # an exhaustive search that finds nothing strictly better leaves it exact
    assign_x([], 0, 0.0)
    return 0.5 * best[0]


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Distance of ``X_q`` from the interval ``[-pi/2, pi/2]``.

    Attributes
    ----------
    hdist : CertifiedValue
        Hausdorff distance between the embedded ``X_q`` and the interval.
    mesh : float
        Largest gap of the embedded chain, ``1/rho_q(0) = sqrt(1 - q^2)``.
    diam_gap : float
        Upper bound on ``|d_q(0, 1) - pi|`` from the diameter bracket.
    diam_lower, diam_upper : float
        The diameter bracket itself.
    depth : int
        Truncation depth used for the finite part.
    """

    q: float
    hdist: CertifiedValue
    mesh: float
    diam_gap: float
    diam_lower: float
    diam_upper: float
    depth: int


def convergence_certificate(q, tol: float = 1e-10, depth: int | None = None) -> ConvergenceCertificate:
    """Certified Hausdorff distance from ``iota_q(X_q)`` to ``[-pi/2, pi/2]``.

    The tolerance is split in thirds: the omitted tail, the uncertainty of
    the embedded limit point, and headroom. ``depth`` is an optional
    minimum truncation depth.
    """
    qp = as_qparam(q)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    line, slack, r0, D = _line_image(qp, tol / 3.0, depth)
    h = hausdorff_line(line, LineSet.segment(-HALF_PI, HALF_PI))
    lower, upper = diameter_bounds(qp)
    gap = max(abs(math.pi - lower), abs(math.pi - upper))
    return ConvergenceCertificate(
        q=qp.q,
        hdist=CertifiedValue(h, slack + r0),
        mesh=inv_rho(qp, 0),
        diam_gap=gap,
        diam_lower=lower,
        diam_upper=upper,
        depth=D,
    )

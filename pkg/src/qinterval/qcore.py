"""Deformation parameter, gap weights and the metric on the quantised interval.

Points of ``X_q = {0} ∪ {q^(2k) : k >= 0}`` are addressed by their index
``k`` (or the limit point ``0``), never by the floating value ``q**(2k)``,
which underflows long before the metric tail becomes negligible.

The distance between consecutive points ``q^(2k)`` and ``q^(2(k+1))`` is
``1 / rho_q(k)``; every other distance is a sum of such gaps, and the
distance to ``0`` is an infinite tail that is summed with an explicit
geometric error certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, total_ordering

import numpy as np

from .errors import DomainError, ToleranceUnreachable

__all__ = [
    "MAX_TERMS",
    "CertifiedValue",
    "QParam",
    "QPoint",
    "ZERO",
    "antiderivative",
    "as_qparam",
    "compensated_cumsum",
    "diameter_bounds",
    "dq",
    "embed",
    "embed_chain",
    "inv_rho",
    "inv_rho_terms",
    "rho",
    "tail_bound",
    "tail_depth",
    "tail_sum",
]

#: Hard cap on the number of series terms summed for one certified tail.
MAX_TERMS = 10**6


@dataclass(frozen=True)
class QParam:
    """Deformation parameter ``q`` restricted to the open interval (0, 1)."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or not 0.0 < q < 1.0:
            raise DomainError(f"q must lie strictly inside (0, 1), got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def q2(self) -> float:
        return self.q * self.q

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def one_minus_q2(self) -> float:
        # expm1 keeps full relative precision as q -> 1
        return -math.expm1(2.0 * self.log_q)

    def __float__(self):
        return self.q


def as_qparam(q) -> QParam:
    """Coerce a float (or an existing :class:`QParam`) to :class:`QParam`."""
    return q if isinstance(q, QParam) else QParam(q)


@total_ordering
@dataclass(frozen=True, eq=True)
class QPoint:
    """A point of ``X_q``: ``QPoint(k)`` is ``q^(2k)``, ``QPoint(None)`` is 0.

    Points are ordered as their spectral values on the real line, so
    ``ZERO < QPoint(k) < QPoint(j)`` whenever ``k > j``.
    """

    index: int | None

    def __post_init__(self):
        if self.index is not None:
            k = int(self.index)
            if k != self.index or k < 0:
                raise DomainError(f"point index must be a nonnegative integer, got {self.index!r}")
            object.__setattr__(self, "index", k)

    @classmethod
    def at(cls, k: int) -> "QPoint":
        return cls(k)

    @classmethod
    def zero(cls) -> "QPoint":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "QPoint":
        """Parse ``"zero"``/``"0+"`` style limit tokens or a decimal index."""
        token = str(text).strip().lower()
        if token in ("zero", "z", "inf", "limit"):
            return cls(None)
        try:
            return cls(int(token))
        except ValueError:
            raise DomainError(f"cannot parse point {text!r}; use an index or 'zero'") from None

    @property
    def is_zero(self) -> bool:
        return self.index is None

    def _key(self):
        return (0, 0) if self.index is None else (1, -self.index)

    def __lt__(self, other):
        if not isinstance(other, QPoint):
            return NotImplemented
        return self._key() < other._key()

    def __repr__(self):
        return "QPoint(zero)" if self.index is None else f"QPoint({self.index})"

    def __str__(self):
        return "zero" if self.index is None else str(self.index)


ZERO = QPoint(None)


@dataclass(frozen=True)
class CertifiedValue:
    """A float together with a rigorous truncation error radius.

    The exact quantity lies in ``[value - radius, value + radius]``. The
    radius covers series truncation only; floating-point rounding of the
    partial sums (a few ulps) is not included.
    """

    value: float
    radius: float = 0.0

    def __post_init__(self):
        if not self.radius >= 0.0:
            raise ValueError(f"radius must be nonnegative, got {self.radius!r}")

    @property
    def lo(self) -> float:
        return self.value - self.radius

    @property
    def hi(self) -> float:
        return self.value + self.radius

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def __add__(self, other):
        if isinstance(other, CertifiedValue):
            return CertifiedValue(self.value + other.value, self.radius + other.radius)
        return CertifiedValue(self.value + other, self.radius)

    __radd__ = __add__

    def __neg__(self):
        return CertifiedValue(-self.value, self.radius)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __abs__(self):
        return CertifiedValue(abs(self.value), self.radius)

    def __float__(self):
        return self.value


def rho(q, k: float) -> float:
    """Weight ``rho_q(k) = sqrt(1 - q^(2(k+1))) / ((1 - q^2) q^k)`` for real ``k >= -1``.

    ``rho_q(-1) == 0``; callers must not divide by it. Returns ``inf`` once
    ``q^-k`` overflows.
    """
    qp = as_qparam(q)
    k = float(k)
    if not k >= -1.0:
        raise DomainError(f"rho_q is defined on [-1, inf), got k={k!r}")
    if k == -1.0:
        return 0.0
    lq = qp.log_q
    try:
        scale = math.exp(-k * lq)
    except OverflowError:
        return math.inf
    return math.sqrt(-math.expm1(2.0 * (k + 1.0) * lq)) * scale / qp.one_minus_q2


def inv_rho(q, k: int) -> float:
    """Gap length ``1 / rho_q(k) = q^k (1 - q^2) / sqrt(1 - q^(2(k+1)))``.

    Evaluated in product form, never as ``1 / rho(q, k)``, and bounded above
    by ``q^k``.
    """
    qp = as_qparam(q)
    if k < 0:
        raise DomainError(f"gap index must be nonnegative, got {k!r}")
    lq = qp.log_q
    return math.exp(k * lq) * qp.one_minus_q2 / math.sqrt(-math.expm1(2.0 * (k + 1) * lq))


def inv_rho_terms(q, start: int, stop: int) -> np.ndarray:
    """Vector of ``inv_rho(q, k)`` for ``start <= k < stop``."""
    qp = as_qparam(q)
    ks = np.arange(start, stop, dtype=float)
    lq = qp.log_q
    return np.exp(ks * lq) * qp.one_minus_q2 / np.sqrt(-np.expm1(2.0 * (ks + 1.0) * lq))


def tail_bound(q, n: int) -> float:
    """Geometric majorant ``sqrt(1-q^2) q^n / (1-q)`` of ``sum_{k>=n} 1/rho_q(k)``.

    Follows from ``1 - q^(2(k+1)) >= 1 - q^2``, which gives
    ``1/rho_q(k) <= q^k sqrt(1 - q^2)``.
    """
    qp = as_qparam(q)
    return math.sqrt(qp.one_minus_q2) * math.exp(n * qp.log_q) / (-math.expm1(qp.log_q))


def tail_depth(q, tol: float) -> int:
    """Smallest ``N >= 0`` with ``tail_bound(q, N) <= tol``."""
    qp = as_qparam(q)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    b0 = tail_bound(qp, 0)
    if b0 <= tol:
        return 0
    n = max(0, math.ceil(math.log(tol / b0) / qp.log_q))
    # guard against rounding in the logarithms
    while tail_bound(qp, n) > tol:
        n += 1
    while n > 0 and tail_bound(qp, n - 1) <= tol:
        n -= 1
    return n


@lru_cache(maxsize=4096)
def _tail_sum(q: float, n: int, tol: float, max_terms: int) -> CertifiedValue:
    end = max(tail_depth(q, tol), n + 1)
    if end - n > max_terms:
        raise ToleranceUnreachable(
            f"tail from k={n} at q={q!r} needs {end - n} terms for tol={tol:g}, "
            f"cap is {max_terms}",
            required_terms=end - n,
        )
    # fsum is correctly rounded, so summation order does not matter
    terms = inv_rho_terms(q, n, end)
    return CertifiedValue(math.fsum(terms[::-1]), tail_bound(q, end))


def tail_sum(q, n: int, tol: float = 1e-12, max_terms: int = MAX_TERMS) -> CertifiedValue:
    """Certified ``sum_{k=n}^inf 1/rho_q(k)``, i.e. ``d_q(q^(2n), 0)``.

    The series is truncated at the first ``N`` whose geometric majorant is at
    most ``tol`` (and never before ``n + 1``); the returned radius is that
    majorant. The true sum lies in ``[value, value + radius]``.

    Raises
    ------
    ToleranceUnreachable
        If more than ``max_terms`` terms would be required.
    """
    qp = as_qparam(q)
    if n < 0:
        raise DomainError(f"tail start must be nonnegative, got {n!r}")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    return _tail_sum(qp.q, int(n), float(tol), int(max_terms))


def _finite_gap_sum(q: QParam, m: int, n: int) -> float:
    lo, hi = min(m, n), max(m, n)
    return math.fsum(inv_rho_terms(q, lo, hi)[::-1])


def dq(q, x: QPoint, y: QPoint, tol: float = 1e-12, max_terms: int = MAX_TERMS) -> CertifiedValue:
    """Distance ``d_q(x, y)`` on ``X_q``.

    Equal points give exactly 0; two indexed points give the finite gap sum
    with radius 0; a pair involving the limit point uses :func:`tail_sum`.
    """
    qp = as_qparam(q)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    if x == y:
        return CertifiedValue(0.0, 0.0)
    if x.is_zero or y.is_zero:
        k = y.index if x.is_zero else x.index
        return tail_sum(qp, k, tol, max_terms)
    return CertifiedValue(_finite_gap_sum(qp, x.index, y.index), 0.0)


def antiderivative(q, x: float) -> float:
    """``F(x) = (1 - q^2) / (q ln q) * arcsin(q^(x+1))``, with ``F' = 1/rho_q``."""
    qp = as_qparam(q)
    return qp.one_minus_q2 / (qp.q * qp.log_q) * math.asin(math.exp((x + 1.0) * qp.log_q))


def diameter_bounds(q) -> tuple[float, float]:
    """Integral-test bracket ``(lower, upper)`` for ``d_q(0, 1)``.

    Since ``1/rho_q`` is positive and decreasing on ``(-1, inf)`` and ``F``
    vanishes at infinity,

        -F(0) = int_0^inf 1/rho_q  <=  sum_{k>=0} 1/rho_q(k)  <=  int_-1^inf 1/rho_q = -F(-1)

    which is ``(-c arcsin(q), -c pi/2)`` with ``c = (1-q^2)/(q ln q)``. Both
    ends tend to pi as q -> 1.
    """
    qp = as_qparam(q)
    c = qp.one_minus_q2 / (qp.q * qp.log_q)
    return -c * math.asin(qp.q), -c * (math.pi / 2.0)


def embed(q, x: QPoint, tol: float = 1e-12) -> CertifiedValue:
    """Isometric line embedding ``x -> d_q(1, x) - pi/2``.

    Sends ``q^0 = 1`` to ``-pi/2`` and is increasing towards the limit point.
    """
    return dq(q, QPoint(0), x, tol) - math.pi / 2.0


def compensated_cumsum(values) -> np.ndarray:
    """Running sums with Neumaier compensation; ``out[i] = sum(values[:i+1])``."""
    out = np.empty(len(values), dtype=float)
    s = 0.0
    c = 0.0
    for i, v in enumerate(np.asarray(values, dtype=float).tolist()):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


def embed_chain(q, depth: int, tol: float = 1e-12) -> tuple[np.ndarray, CertifiedValue]:
    """Embedded images of ``q^(2k)`` for ``k = 0..depth`` and of the limit point.

    Returns an ascending array of length ``depth + 1`` (exact up to rounding)
    and the certified image of ``0``.
    """
    qp = as_qparam(q)
    if depth < 0:
        raise DomainError(f"depth must be nonnegative, got {depth!r}")
    gaps = inv_rho_terms(qp, 0, depth)
    chain = np.concatenate(([0.0], compensated_cumsum(gaps))) - math.pi / 2.0
    return chain, embed(qp, ZERO, tol)

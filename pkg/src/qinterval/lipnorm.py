"""Functions on the quantised interval and their Lipschitz seminorm.

A :class:`QFunction` stores finitely many values ``f(q^(2k))`` and a tail
value ``f(0)``; at every unstored point it equals its tail. Such functions are
continuous on ``X_q`` by construction, and their seminorm is an exact finite
maximum over consecutive gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import PreconditionError
from .qcore import ZERO, QParam, QPoint, as_qparam, dq, rho

__all__ = [
    "QFunction",
    "SeminormReport",
    "TruncationReport",
    "brute_force_seminorm",
    "eval",
    "qfunction_from_json",
    "qfunction_to_json",
    "q2_difference",
    "seminorm",
    "truncation_seminorms",
]


@dataclass(frozen=True, init=False)
class QFunction:
    """Function on ``X_q`` given by values at finitely many indices plus ``f(0)``.

    Parameters
    ----------
    values : mapping or iterable of (index, value) pairs
        Stored values ``f(q^(2k))``; indices must be distinct and nonnegative.
    tail : complex
        The value ``f(0)``, also returned at every index that is not stored.
    """

    indices: tuple[int, ...]
    values: tuple[complex, ...]
    tail: complex = 0j

    def __init__(self, values=(), tail=0.0):
        items = values.items() if isinstance(values, Mapping) else values
        pairs = [(int(k), complex(v)) for k, v in items]
        ks = [k for k, _ in pairs]
        if any(k < 0 for k in ks):
            raise ValueError("indices must be nonnegative")
        if len(set(ks)) != len(ks):
            raise ValueError("indices must be distinct")
        pairs.sort()
        object.__setattr__(self, "indices", tuple(k for k, _ in pairs))
        object.__setattr__(self, "values", tuple(v for _, v in pairs))
        object.__setattr__(self, "tail", complex(tail))

    @classmethod
    def constant(cls, c) -> "QFunction":
        return cls((), c)

    @classmethod
    def indicator(cls, k: int) -> "QFunction":
        """Characteristic function of the single point ``q^(2k)``."""
        return cls({k: 1.0}, 0.0)

    @classmethod
    def from_array(cls, arr, tail=0.0) -> "QFunction":
        """Values ``arr[k]`` at ``k = 0..len(arr)-1``."""
        return cls(enumerate(np.asarray(arr).tolist()), tail)

    @property
    def support_bound(self) -> int:
        """Largest stored index, or -1 when nothing is stored."""
        return self.indices[-1] if self.indices else -1

    def __call__(self, x: QPoint) -> complex:
        if x.is_zero:
            return self.tail
        return self._lookup().get(x.index, self.tail)

    def _lookup(self) -> dict[int, complex]:
        return dict(zip(self.indices, self.values))

    def dense(self, depth: int) -> np.ndarray:
        """Complex array of ``f(q^(2k))`` for ``k = 0..depth``."""
        out = np.full(depth + 1, self.tail, dtype=complex)
        for k, v in zip(self.indices, self.values):
            if k <= depth:
                out[k] = v
        return out

    def is_real(self) -> bool:
        return self.tail.imag == 0 and all(v.imag == 0 for v in self.values)

    def _combine(self, other, op):
        if not isinstance(other, QFunction):
            other = QFunction.constant(other)
        a, b = self._lookup(), other._lookup()
        ks = sorted(set(a) | set(b))
        return QFunction(
            {k: op(a.get(k, self.tail), b.get(k, other.tail)) for k in ks},
            op(self.tail, other.tail),
        )

    def __add__(self, other):
        return self._combine(other, lambda u, v: u + v)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda u, v: u - v)

    def __mul__(self, other):
        return self._combine(other, lambda u, v: u * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def conj(self) -> "QFunction":
        return QFunction(zip(self.indices, (v.conjugate() for v in self.values)), self.tail.conjugate())

    def truncate(self, n: int) -> "QFunction":
        """``f * chi_{q^(2k) : k <= n}``; the result has tail 0."""
        lookup = self._lookup()
        return QFunction({k: lookup.get(k, self.tail) for k in range(n + 1)}, 0.0)


def eval(f: QFunction, x: QPoint) -> complex:  # noqa: A001 - mirrors the documented operation name
    """Value of ``f`` at ``x``."""
    return f(x)


@dataclass(frozen=True)
class SeminormReport:
    """Result of :func:`seminorm`.

    ``per_gap[k]`` is ``rho_q(k) * |f(q^(2k)) - f(q^(2(k+1)))|`` for
    ``k = 0..support_bound``; all later gaps vanish.
    """

    value: float
    argmax_k: int | None
    per_gap: tuple[float, ...] = field(default=())

    def __float__(self):
        return self.value


def _gap_differences(f: QFunction) -> np.ndarray:
    n = f.support_bound
    vals = f.dense(n + 1)
    return vals[:-1] - vals[1:]


def seminorm(q, f: QFunction) -> SeminormReport:
    """Lipschitz seminorm ``L_{d_q}(f) = max_k rho_q(k) |f(q^(2k)) - f(q^(2(k+1)))|``."""
    qp = as_qparam(q)
    diffs = _gap_differences(f)
    per_gap = []
    for k, d in enumerate(diffs.tolist()):
        mag = abs(d)
        per_gap.append(0.0 if mag == 0.0 else rho(qp, k) * mag)
    if not per_gap or max(per_gap) == 0.0:
        return SeminormReport(0.0, None, tuple(per_gap))
    k_star = int(np.argmax(per_gap))
    return SeminormReport(per_gap[k_star], k_star, tuple(per_gap))


def brute_force_seminorm(q, f: QFunction, depth: int | None = None, tol: float = 1e-13) -> float:
    """Sup of ``|f(x) - f(y)| / d_q(x, y)`` over all pairs of
    ``{q^(2k) : k <= depth} ∪ {0}``.

    Independent of :func:`seminorm`: every pair distance comes from
    :func:`qinterval.qcore.dq`, not from the consecutive-gap structure.
    ``depth`` defaults to ``support_bound + 8``.
    """
    qp = as_qparam(q)
    if depth is None:
        depth = f.support_bound + 8
    if depth < f.support_bound + 2:
        raise PreconditionError(f"depth {depth} must be at least support_bound + 2 = {f.support_bound + 2}")
    points = [QPoint(k) for k in range(depth + 1)] + [ZERO]
    vals = [f(x) for x in points]
    best = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            num = abs(vals[i] - vals[j])
            if num == 0.0:
                continue
            best = max(best, num / dq(qp, points[i], points[j], tol).value)
    return best


def q2_difference(q, f: QFunction) -> QFunction:
    """q^2-difference quotient ``(f(q^(2k)) - f(q^(2(k+1)))) / (q^(2k) (1 - q^2))``.

    Stored for ``k = 0..support_bound + 1`` with tail 0.
    """
    qp = as_qparam(q)
    n = f.support_bound
    vals = f.dense(n + 2)
    out = {}
    for k in range(n + 2):
        diff = vals[k] - vals[k + 1]
        out[k] = 0j if diff == 0 else diff / (math.exp(2.0 * k * qp.log_q) * qp.one_minus_q2)
    return QFunction(out, 0.0)


@dataclass(frozen=True)
class TruncationReport:
    """Seminorms of the truncations ``f_n = f * chi_{k <= n}``.

    ``bound`` is ``L(f) + C / (1 - q)`` with
    ``C = sup_n |f(q^(2n))| / d_q(q^(2n), 0)``; every entry of
    ``seminorms`` is at most ``bound``.
    """

    seminorms: tuple[float, ...]
    C: float
    bound: float


def truncation_seminorms(q, f: QFunction, n_max: int, tol: float = 1e-13) -> TruncationReport:
    """Seminorms ``L(f_0), ..., L(f_{n_max})`` for a function vanishing at 0."""
    qp = as_qparam(q)
    if f.tail != 0:
        raise PreconditionError("truncation sequence requires f(0) == 0")
    if n_max < 0:
        raise PreconditionError(f"n_max must be nonnegative, got {n_max}")
    seq = tuple(seminorm(qp, f.truncate(n)).value for n in range(n_max + 1))
    C = 0.0
    for k, v in zip(f.indices, f.values):
        if v != 0:
            C = max(C, abs(v) / dq(qp, QPoint(k), ZERO, tol).value)
    bound = seminorm(qp, f).value + C / (1.0 - qp.q)
    return TruncationReport(seq, C, bound)


def qfunction_to_json(q, f: QFunction) -> dict:
    """``{"q": q, "values": [[k, re, im], ...], "tail": [re, im]}``."""
    return {
        "q": float(as_qparam(q).q),
        "values": [[k, v.real, v.imag] for k, v in zip(f.indices, f.values)],
        "tail": [f.tail.real, f.tail.imag],
    }


def qfunction_from_json(obj: dict) -> tuple[QParam, QFunction]:
    try:
        raw_q = obj["q"]
        values = [(int(k), complex(re, im)) for k, re, im in obj["values"]]
        re, im = obj["tail"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed QFunction JSON: {exc!r}") from exc
    return QParam(raw_q), QFunction(values, complex(re, im))

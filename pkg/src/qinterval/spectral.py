"""Truncated matrix model of the Podles sphere acting on l^2(N_0).

The faithful representation sends ``A`` to the diagonal operator with entries
``q^(2k)`` and ``B`` to the weighted shift ``e_k -> q^k sqrt(1 - q^(2(k+1))) e_(k+1)``.
Compressing both to the span of ``e_0, ..., e_(N-1)`` gives dense ``N x N``
matrices on which the defining relations hold away from the last basis
vector.

The operator norm of the derivative of ``f(A)`` is obtained from the
diagonal operator ``d(f(A)) d(f(A))* = A (1 - q^2 A) |D_q2 f|^2``; the
derivative itself is never materialised.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .lipnorm import QFunction, q2_difference
from .qcore import as_qparam

__all__ = [
    "DerivativeGram",
    "TruncatedOperator",
    "derivative_gram",
    "derivative_norm",
    "haar_projection_mass",
    "relation_residuals",
    "rep_A",
    "rep_B",
    "shift_weights",
]


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Dense ``dim x dim`` complex matrix with a symbolic label."""

    dim: int
    entries: np.ndarray
    label: str

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"expected a {self.dim}x{self.dim} matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def H(self) -> "TruncatedOperator":
        label = self.label[:-4] if self.label.endswith("star") else self.label + "star"
        return TruncatedOperator(self.dim, self.entries.conj().T, label)

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator(self.dim, self.entries @ other.entries, f"({self.label})({other.label})")

    def norm(self) -> float:
        """Spectral (operator 2-) norm."""
        return float(np.linalg.norm(self.entries, 2))

    def to_csv(self, path=None, tol: float = 0.0) -> str:
        """Nonzero entries as CSV rows ``row,col,re,im``; written to ``path`` if given."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["row", "col", "re", "im"])
        rows, cols = np.nonzero(np.abs(self.entries) > tol)
        for i, j in zip(rows.tolist(), cols.tolist()):
            z = self.entries[i, j]
            writer.writerow([i, j, f"{z.real:.17g}", f"{z.imag:.17g}"])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, text: str, dim: int, label: str = "derived") -> "TruncatedOperator":
        m = np.zeros((dim, dim), dtype=complex)
        for row in csv.DictReader(io.StringIO(text)):
            m[int(row["row"]), int(row["col"])] = complex(float(row["re"]), float(row["im"]))
        return cls(dim, m, label)


def rep_A(q, N: int) -> TruncatedOperator:
    """``diag(q^(2k))`` for ``k = 0..N-1``."""
    qp = as_qparam(q)
    if N < 1:
        raise PreconditionError(f"N must be at least 1, got {N}")
    diag = np.exp(2.0 * np.arange(N) * qp.log_q)
    return TruncatedOperator(N, np.diag(diag), "A")


def shift_weights(q, n: int) -> np.ndarray:
    """Weights ``q^k sqrt(1 - q^(2(k+1)))`` for ``k = 0..n-1``."""
    qp = as_qparam(q)
    ks = np.arange(n, dtype=float)
    return np.exp(ks * qp.log_q) * np.sqrt(-np.expm1(2.0 * (ks + 1.0) * qp.log_q))


def rep_B(q, N: int) -> TruncatedOperator:
    """Compressed weighted shift; entry ``[k+1, k]`` is the ``k``-th weight."""
    if N < 2:
        raise PreconditionError(f"N must be at least 2, got {N}")
    m = np.zeros((N, N))
    idx = np.arange(N - 1)
    m[idx + 1, idx] = shift_weights(q, N - 1)
    return TruncatedOperator(N, m, "B")


def relation_residuals(q, N: int, block: str = "interior") -> dict[str, float]:
    """Entrywise max residuals of the Podles relations in the truncated model.

    ``block="interior"`` restricts to the leading ``(N-1) x (N-1)`` block,
    ``"boundary"`` reports the last row and column only, and ``"full"`` the
    whole matrix. Compression breaks ``B*B = A(1 - q^2 A)`` in the last
    diagonal entry, since the weight leaving ``e_(N-1)`` is cut off.
    """
    qp = as_qparam(q)
    if N < 3:
        raise PreconditionError(f"N must be at least 3, got {N}")
    A = rep_A(qp, N).entries
    B = rep_B(qp, N).entries
    Bs = B.conj().T
    eye = np.eye(N)
    q2 = qp.q2
    residuals = {
        "AB-q2BA": A @ B - q2 * (B @ A),
        "A-Astar": A - A.conj().T,
        "BstarB-A(1-q2A)": Bs @ B - A @ (eye - q2 * A),
        "BBstar-q-2A(1-A)": B @ Bs - (A @ (eye - A)) / q2,
    }
    if block == "interior":
        sl = lambda r: r[: N - 1, : N - 1]  # noqa: E731
    elif block == "boundary":
        sl = lambda r: np.concatenate([r[N - 1, :], r[:, N - 1]])  # noqa: E731
    elif block == "full":
        sl = lambda r: r  # noqa: E731
    else:
        raise ValueError(f"unknown block {block!r}")
    return {name: float(np.max(np.abs(sl(r)))) for name, r in residuals.items()}


@dataclass(frozen=True)
class DerivativeGram:
    """Diagonal of ``d(f(A)) d(f(A))*`` in the truncated model.

    ``diag[k] = rho_q(k)^2 |f(q^(2k)) - f(q^(2(k+1)))|^2``; the operator norm
    of the (diagonal) Gram operator is its largest entry.
    """

    diag: tuple[float, ...]

    def norm(self) -> float:
        return max(self.diag, default=0.0)


def derivative_gram(q, f: QFunction, N: int) -> DerivativeGram:
    """Build ``A (1 - q^2 A) |D_q2 f|^2`` on the first ``N`` basis vectors."""
    qp = as_qparam(q)
    if N < f.support_bound + 2:
        raise PreconditionError(
            f"truncation N={N} cannot hold support up to {f.support_bound}; need N >= {f.support_bound + 2}"
        )
    A = rep_A(qp, N).entries.real
    weight = np.diag(A @ (np.eye(N) - qp.q2 * A))
    coeffs = q2_difference(qp, f).dense(N - 1)
    diag = []
    for k in range(N):
        c = coeffs[k]
        # skip zero coefficients: q^(4k) may underflow far outside the support
        diag.append(0.0 if c == 0 else float(weight[k] * (c.real * c.real + c.imag * c.imag)))
    return DerivativeGram(tuple(diag))


def derivative_norm(q, f: QFunction, N: int | None = None) -> float:
    """``||d_1(f(A))||`` via the square root of the largest Gram entry.

    ``N`` defaults to ``support_bound + 2``.
    """
    if N is None:
        N = max(f.support_bound + 2, 1)
    return math.sqrt(derivative_gram(q, f, N).norm())


def haar_projection_mass(q, n: int) -> float:
    """Haar state of the projection onto the first ``n+1`` spectral points,
    ``(1 - q^2) sum_{k=0}^n q^(2k)``."""
    qp = as_qparam(q)
    if n < 0:
        raise PreconditionError(f"n must be nonnegative, got {n}")
    return qp.one_minus_q2 * math.fsum(np.exp(2.0 * np.arange(n + 1) * qp.log_q))

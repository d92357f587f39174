"""The classical endpoint q = 1.

Here the spectrum of ``A`` is all of ``[0, 1]``, where ``s = A(x) = (1 - x_3)/2``
labels the latitude circle ``x_3 = 1 - 2s`` of the round 2-sphere. The
distance between two latitude circles is attained along a meridian and
equals the difference of their polar angles ``arccos(1 - 2s)``. The map
``t -> 1/2 + sin(t)/2`` is then an isometry from ``[-pi/2, pi/2]`` because
``arccos(-sin t) = pi/2 + t``.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .ghdist import convergence_certificate

__all__ = ["d1", "endpoint_gap", "phi", "phi_inverse"]

HALF_PI = np.pi / 2.0


def _check_latitude(s):
    s = np.asarray(s, dtype=float)
    if np.any(~((s >= 0.0) & (s <= 1.0))):
        raise DomainError("latitude parameters must lie in [0, 1]")
    return s


def _polar_angle(s):
    # arccos(1 - 2s) in a form that stays well conditioned at the poles
    return 2.0 * np.arctan2(np.sqrt(s), np.sqrt(1.0 - s))


def d1(s, t):
    """Round-sphere distance between the latitude circles labelled ``s`` and ``t``.

    Accepts scalars or broadcastable arrays.
    """
    out = np.abs(_polar_angle(_check_latitude(s)) - _polar_angle(_check_latitude(t)))
    return float(out) if out.ndim == 0 else out


def phi(t):
    """Isometry ``[-pi/2, pi/2] -> ([0, 1], d1)``, ``t -> 1/2 + sin(t)/2``."""
    t = np.asarray(t, dtype=float)
    if np.any(~((t >= -HALF_PI) & (t <= HALF_PI))):
        raise DomainError("phi is defined on [-pi/2, pi/2]")
    out = 0.5 + 0.5 * np.sin(t)
    return float(out) if out.ndim == 0 else out


def phi_inverse(s):
    """``arcsin(2s - 1)``."""
    out = np.arcsin(np.clip(2.0 * _check_latitude(s) - 1.0, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out


def endpoint_gap(q, tol: float = 1e-10) -> float:
    """Hausdorff distance of the embedded ``X_q`` from ``[-pi/2, pi/2]``."""
    return convergence_certificate(q, tol).hdist.value

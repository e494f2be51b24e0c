"""Entropy and conditional mutual information of discrete joint tables.

A distribution is an ndarray whose axes are the random variables.  Groups of
axes are passed as tuples of axis indices.  All logarithms are base 2.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.special import xlogy

DIST_TOL = 1e-12


def check_distribution(p, tol: float = DIST_TOL) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and nonnegative")
    total = p.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    return p


def _h(p: np.ndarray) -> float:
    return float(-xlogy(p, p).sum() / np.log(2))


def entropy(p) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    return max(_h(check_distribution(p)), 0.0)


def marginal(joint: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Sum out every axis not in ``keep`` (kept axes stay in ascending order)."""
    drop = tuple(ax for ax in range(joint.ndim) if ax not in set(keep))
    return joint.sum(axis=drop) if drop else joint


def conditional_mi(joint, a: Sequence[int], b: Sequence[int], c: Sequence[int] = ()) -> float:
    """``I(A; B | C)`` in bits for axis groups ``a``, ``b``, ``c`` of ``joint``.

    Computed as ``H(A,C) + H(B,C) - H(A,B,C) - H(C)``.  Empty ``a`` or ``b``
    gives 0.
    """
    joint = check_distribution(joint)
    a, b, c = tuple(a), tuple(b), tuple(c)
    groups = a + b + c
    if len(set(groups)) != len(groups):
        raise ValueError("axis groups must be disjoint")
    if any(not 0 <= ax < joint.ndim for ax in groups):
        raise ValueError(f"axis out of range for a {joint.ndim}-dimensional table")
    if not a or not b:
        return 0.0
    value = (
        _h(marginal(joint, a + c))
        + _h(marginal(joint, b + c))
        - _h(marginal(joint, a + b + c))
        - _h(marginal(joint, c))
    )
    return max(value, 0.0)


def mutual_information(joint2d) -> float:
    """``I(X; Y)`` for a 2-D table ``p[x, y]``."""
    return conditional_mi(joint2d, (0,), (1,))


def binary_entropy(p: float) -> float:
    return entropy([p, 1.0 - p])

"""Blahut-Arimoto capacity of a single discrete memoryless channel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from ..errors import ConvergenceError
from ..network import ChannelModel

LN2 = np.log(2.0)


@dataclass(frozen=True)
class BlahutArimotoResult:
    capacity: float
    input_distribution: np.ndarray
    lower: float
    upper: float
    iterations: int
    history: tuple = ()

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def _divergences(W: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-input ``D(W(.|x) || pW)`` in nats, and the output marginal."""
    q = p @ W
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(W > 0, W / q[None, :], 1.0)
    return (xlogy(W, ratio)).sum(axis=1), q


def blahut_arimoto(channel, tol: float = 1e-9, max_iter: int = 100_000, record: bool = False):
    """Capacity in bits of a DMC given as a row-stochastic matrix or single-edge model.

    Each iteration reports ``lower = I(p; W)`` for the current input law and
    ``upper = max_x D(W(.|x) || pW)``.  ``lower <= C <= upper`` always holds, and
    the loop stops as soon as ``upper - lower < tol``.  The returned capacity is
    ``lower``, so it is within ``tol`` of the true value.
    """
    if isinstance(channel, ChannelModel):
        if channel.kind == "trivial":
            return BlahutArimotoResult(0.0, np.ones(int(np.prod(channel.input_sizes))), 0.0, 0.0, 0)
        if channel.kind != "dmc" or channel.n_edges != 1:
            raise ValueError("Blahut-Arimoto needs a single-edge DMC")
        W = channel.matrix
    else:
        W = np.asarray(channel, dtype=float)
    if W.ndim != 2 or np.any(W < 0) or np.max(np.abs(W.sum(axis=1) - 1)) > 1e-9:
        raise ValueError("channel must be a row-stochastic matrix")
    if tol <= 0:
        raise ValueError("tol must be positive")

    m = W.shape[0]
    p = np.full(m, 1.0 / m)
    history = []
    gap = np.inf
    for it in range(1, max_iter + 1):
        d, _ = _divergences(W, p)
        lower = float(p @ d) / LN2
        upper = float(d.max()) / LN2
        if record:
            history.append((lower, upper))
        gap = upper - lower
        if gap < tol:
            return BlahutArimotoResult(max(lower, 0.0), p, lower, upper, it, tuple(history))
        # multiplicative update p(x) <- p(x) exp(D_x) / sum
        w = p * np.exp(d - d.max())
        p = w / w.sum()
    raise ConvergenceError(f"Blahut-Arimoto did not converge in {max_iter} iterations", gap)


def channel_capacity(channel, tol: float = 1e-9, max_iter: int = 100_000) -> float:
    return blahut_arimoto(channel, tol, max_iter).capacity

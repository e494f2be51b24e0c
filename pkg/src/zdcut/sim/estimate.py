"""Plug-in mutual information estimate from paired discrete samples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..infocalc.measures import mutual_information


@dataclass(frozen=True)
class MIEstimate:
    bits: float
    bias_bound: float
    samples: int


def mi_from_counts(counts) -> MIEstimate:
    """Plug-in estimate from a joint count table.

    ``bias_bound`` is the leading-order bias of the plug-in estimator for
    independent variables, ``(|A||B| - 1) / (2 n ln 2)`` bits.
    """
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n <= 0:
        raise ValueError("no samples")
    bias = (counts.size - 1) / (2.0 * n * np.log(2.0))
    return MIEstimate(mutual_information(counts / n), bias, int(n))


def estimate_empirical_mi(x, y, sizes=None, min_samples: int = 1000) -> MIEstimate:
    """Estimate ``I(X; Y)`` in bits from paired symbol sequences.

    ``sizes`` gives the alphabet sizes ``(|A|, |B|)``; by default they are
    inferred from the largest symbols seen.
    """
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if x.size == 0:
        raise ValueError("empty input")
    if x.size != y.size:
        raise ValueError("sequences differ in length")
    if x.size < min_samples:
        raise ValueError(f"need at least {min_samples} samples, got {x.size}")
    if sizes is None:
        sizes = (int(x.max()) + 1, int(y.max()) + 1)
    counts = np.zeros(sizes)
    np.add.at(counts, (x.astype(np.intp), y.astype(np.intp)), 1)
    return mi_from_counts(counts)

"""Pyramid discrete wavelet transform with Daubechies filters.

The transform uses periodic (circular) boundary handling; at each level
an odd-length input drops its final approximation coefficient before
filtering.  Because circular wrapping mixes the two ends of the signal,
the trailing coefficients whose support wraps are tracked per level
(``clean_counts``): restricting to the clean prefix preserves the
filter's polynomial annihilation exactly, which is what makes the
wavelet Hurst estimator immune to additive polynomial trends.

Filters: 'order' p gives the 2p-tap orthonormal Daubechies pair with p
vanishing wavelet moments.  db1 (Haar) and db2 come from closed forms;
db3/db4 from the standard tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SeriesTooShort
from .series import TimeSeries

__all__ = ["DwtPyramid", "daubechies_filters", "dwt"]

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)

_SCALING_FILTERS: dict[int, tuple[float, ...]] = {
    1: (1.0 / _SQRT2, 1.0 / _SQRT2),
    2: (
        (1.0 + _SQRT3) / (4.0 * _SQRT2),
        (3.0 + _SQRT3) / (4.0 * _SQRT2),
        (3.0 - _SQRT3) / (4.0 * _SQRT2),
        (1.0 - _SQRT3) / (4.0 * _SQRT2),
    ),
    3: (
        0.3326705529509569,
        0.8068915093133388,
        0.4598775021193313,
        -0.1350110200102546,
        -0.0854412738822415,
        0.0352262918821007,
    ),
    4: (
        0.23037781330885523,
        0.7148465705525415,
        0.6308807679295904,
        -0.02798376941698385,
        -0.18703481171888114,
        0.030841381835986965,
        0.032883011666982945,
        -0.010597401784997278,
    ),
}


def daubechies_filters(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Scaling filter h and wavelet filter g[m] = (-1)^m h[L-1-m]."""
    if order not in _SCALING_FILTERS:
        raise ValueError(f"Daubechies order must be in {sorted(_SCALING_FILTERS)}, got {order}")
    h = np.asarray(_SCALING_FILTERS[order], dtype=np.float64)
    signs = np.where(np.arange(h.size) % 2 == 0, 1.0, -1.0)
    g = signs * h[::-1]
    return h, g


@dataclass(frozen=True)
class DwtPyramid:
    """Per-level detail coefficients, final approximations and bookkeeping.

    ``details[j-1]`` holds level j (level 1 is the finest scale);
    ``clean_counts[j-1]`` is the length of the prefix unaffected by the
    periodic wrap.
    """

    details: tuple[np.ndarray, ...]
    approx: np.ndarray
    clean_counts: tuple[int, ...]
    order: int

    @property
    def levels(self) -> int:
        return len(self.details)


def _analysis_step(approx: np.ndarray, h: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = approx.size
    taps = h.size
    half = n // 2
    idx = (2 * np.arange(half)[:, None] + np.arange(taps)[None, :]) % n
    windows = approx[idx]
    return windows @ h, windows @ g


def dwt(series: TimeSeries, order: int = 2, max_level: int | None = None) -> DwtPyramid:
    """Pyramid DWT with periodic boundaries; level j has ~N/2^j details."""
    h, g = daubechies_filters(order)
    n = len(series)
    if max_level is None:
        max_level = max(1, int(math.floor(math.log2(n))) - 2) if n >= 8 else 1
    if max_level < 1:
        raise ValueError(f"max_level must be >= 1, got {max_level}")
    if n < 2 ** (max_level + 2):
        raise SeriesTooShort(f"DWT to level {max_level} needs N >= {2 ** (max_level + 2)}, got {n}")

    taps = h.size
    approx = np.asarray(series.values, dtype=np.float64)
    contaminated = 0
    details: list[np.ndarray] = []
    clean_counts: list[int] = []
    for _ in range(max_level):
        if approx.size < taps:
            break
        if approx.size % 2:
            approx = approx[:-1]
            contaminated = max(0, contaminated - 1)
        next_approx, detail = _analysis_step(approx, h, g)
        # coefficient k reads inputs 2k..2k+taps-1; it is clean iff that
        # window avoids both the wrap and the contaminated tail
        clean = (approx.size - taps - contaminated) // 2 + 1
        clean = max(0, min(clean, detail.size))
        details.append(detail)
        clean_counts.append(clean)
        contaminated = detail.size - clean
        approx = next_approx
    if not details:
        raise SeriesTooShort(f"series of length {n} too short for a level-1 DWT with {taps} taps")
    return DwtPyramid(
        details=tuple(details),
        approx=approx,
        clean_counts=tuple(clean_counts),
        order=order,
    )

"""Core time-series value type, summary statistics, autocorrelation and
block aggregation.

A :class:`TimeSeries` is an immutable, equally spaced sequence of finite
real values; the array index is the time coordinate.  All statistics use
the population convention (denominator ``N``) and the autocorrelation
estimator is the biased one (denominator ``N`` at every lag), which keeps
``|rho(k)| <= 1`` and the estimated sequence positive semi-definite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Iterator

import numpy as np
from scipy.fft import next_fast_len

from .errors import BadBlock, DegenerateSeries, LagOutOfRange, MalformedLine, SeriesTooShort

__all__ = [
    "TimeSeries",
    "SummaryStats",
    "AcfCurve",
    "summary_stats",
    "acf",
    "aggregate",
    "read_series",
    "write_series",
]


@dataclass(frozen=True)
class SummaryStats:
    """Mean, population variance and standard deviation of a series."""

    mean: float
    variance: float
    std: float


class TimeSeries:
    """Immutable sequence of equally spaced, finite sample values.

    The empty series is allowed only as a degenerate container (a packet
    trace may bin to nothing); every statistical operation checks its own
    minimum-length precondition.
    """

    def __init__(self, values: Iterable[float]):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"expected a 1-d sequence, got shape {arr.shape}")
        if arr.size and not np.isfinite(arr).all():
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise ValueError(f"non-finite value at index {bad}")
        arr = arr.copy()
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        """Read-only view of the sample values."""
        return self._values

    def __len__(self) -> int:
        return self._values.size

    def __iter__(self) -> Iterator[float]:
        return iter(self._values)

    def __repr__(self) -> str:
        return f"TimeSeries(n={len(self)})"

    @cached_property
    def stats(self) -> SummaryStats:
        if len(self) < 1:
            raise SeriesTooShort("summary statistics need at least one value")
        v = self._values
        mean = float(v.mean())
        var = float(v.var())
        return SummaryStats(mean=mean, variance=var, std=float(np.sqrt(var)))


@dataclass(frozen=True)
class AcfCurve:
    """Autocorrelation rho(k) for lags 0..max_lag (biased estimator)."""

    lags: np.ndarray
    rho: np.ndarray


def summary_stats(series: TimeSeries) -> SummaryStats:
    """Mean, population variance (denominator N) and std of the values."""
    return series.stats


def acf(series: TimeSeries, max_lag: int) -> AcfCurve:
    """Biased sample autocorrelation up to ``max_lag``.

    rho(k) = [sum_{t=1}^{N-k} (x_t - mu)(x_{t+k} - mu) / N] / sigma^2,
    evaluated via FFT; rho(0) is exactly 1.
    """
    n = len(series)
    if n < 1:
        raise SeriesTooShort("autocorrelation needs a non-empty series")
    if max_lag < 1 or max_lag > n - 1:
        raise LagOutOfRange(f"max_lag must be in [1, {n - 1}], got {max_lag}")
    stats = series.stats
    if stats.variance == 0.0:
        raise DegenerateSeries("autocorrelation undefined for a constant series")

    centered = series.values - stats.mean
    nfft = next_fast_len(2 * n)
    spec = np.fft.rfft(centered, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[: max_lag + 1] / n
    rho = acov / acov[0] + 0.0  # +0.0 normalises -0.0
    return AcfCurve(lags=np.arange(max_lag + 1), rho=rho)


def aggregate(series: TimeSeries, block: int) -> TimeSeries:
    """Block means at size ``block``; the trailing partial block is dropped."""
    n = len(series)
    if block < 1 or block > n:
        raise BadBlock(f"block size must be in [1, {n}], got {block}")
    if block == 1:
        return TimeSeries(series.values)
    nblocks = n // block
    means = series.values[: nblocks * block].reshape(nblocks, block).mean(axis=1)
    return TimeSeries(means)


def write_series(series: TimeSeries, stream: IO[str]) -> None:
    """Write one value per line in plain decimal text (round-trip exact)."""
    for v in series.values:
        stream.write(f"{float(v)!r}\n")


def read_series(stream: Iterable[str]) -> TimeSeries:
    """Read the one-value-per-line format; '#' comments and blanks allowed."""
    values: list[float] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise MalformedLine(f"line {lineno}: not a decimal value: {line!r}") from None
    try:
        return TimeSeries(values)
    except ValueError as exc:
        raise MalformedLine(str(exc)) from None

"""Packet-trace parsing and the two derived series: bytes per time bin
and interarrival times.

Trace format: ASCII text, one packet per line as
``<timestamp-seconds> <size-bytes>``; '#' comments and blank lines are
allowed.  Timestamps must be non-decreasing (violations are an error,
never silently reordered).  Bins are anchored at the first packet's
timestamp; empty bins are legitimate zeros (they are what rules out the
log filter on binned traffic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .errors import (
    BadBinWidth,
    EmptyTrace,
    MalformedLine,
    NonMonotoneTimestamp,
    TooFewRecords,
)
from .series import TimeSeries

__all__ = [
    "PacketRecord",
    "PacketTrace",
    "parse_packet_trace",
    "serialize_packet_trace",
    "bin_bytes",
    "interarrival_series",
]


@dataclass(frozen=True)
class PacketRecord:
    """One packet: arrival time in seconds and size in bytes."""

    timestamp: float
    size: int


@dataclass(frozen=True)
class PacketTrace:
    """Ordered packet records plus a free-form source label."""

    records: tuple[PacketRecord, ...]
    source: str = ""

    def __post_init__(self) -> None:
        ts = self.timestamps
        if ts.size > 1:
            drops = np.flatnonzero(np.diff(ts) < 0)
            if drops.size:
                i = int(drops[0]) + 1
                raise NonMonotoneTimestamp(
                    f"record {i + 1}: timestamp {ts[i]} < {ts[i - 1]}"
                )

    def __len__(self) -> int:
        return len(self.records)

    @property
    def timestamps(self) -> np.ndarray:
        return np.fromiter(
            (rec.timestamp for rec in self.records), dtype=np.float64, count=len(self.records)
        )

    @property
    def sizes(self) -> np.ndarray:
        return np.fromiter(
            (rec.size for rec in self.records), dtype=np.float64, count=len(self.records)
        )


def parse_packet_trace(lines: Iterable[str], source: str = "") -> PacketTrace:
    """Parse the two-column text format, reporting the first bad entry."""
    records: list[PacketRecord] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise MalformedLine(f"line {lineno}: expected '<timestamp> <size>', got {line!r}")
        try:
            ts = float(fields[0])
        except ValueError:
            raise MalformedLine(f"line {lineno}, column 1: bad timestamp {fields[0]!r}") from None
        if not math.isfinite(ts):
            raise MalformedLine(f"line {lineno}, column 1: non-finite timestamp {fields[0]!r}")
        try:
            size = int(fields[1])
        except ValueError:
            raise MalformedLine(f"line {lineno}, column 2: bad size {fields[1]!r}") from None
        if size < 0:
            raise MalformedLine(f"line {lineno}, column 2: negative size {size}")
        if records and ts < records[-1].timestamp:
            raise NonMonotoneTimestamp(
                f"record {len(records) + 1} (line {lineno}): timestamp {ts} < {records[-1].timestamp}"
            )
        records.append(PacketRecord(timestamp=ts, size=size))
    return PacketTrace(records=tuple(records), source=source)


def serialize_packet_trace(trace: PacketTrace, stream: IO[str]) -> None:
    """Write the two-column format; parse -> serialize -> parse is identity."""
    for rec in trace.records:
        stream.write(f"{rec.timestamp!r} {rec.size}\n")


def bin_bytes(trace: PacketTrace, bin_width: float) -> TimeSeries:
    """Bytes per fixed-width bin, bin i covering [t0 + i*w, t0 + (i+1)*w).

    t0 is the first packet's timestamp.  Bins run up to the one holding
    the final packet; a trailing bin that would start at or beyond the
    final timestamp is treated as the discarded partial tail, so a
    lone packet (span shorter than one bin) yields an empty series.
    """
    if len(trace) == 0:
        raise EmptyTrace("cannot bin an empty trace")
    if not (isinstance(bin_width, (int, float)) and math.isfinite(bin_width) and bin_width > 0):
        raise BadBinWidth(f"bin width must be positive and finite, got {bin_width!r}")
    ts = trace.timestamps
    t0 = ts[0]
    span = ts[-1] - t0
    nbins = int(math.ceil(span / bin_width))
    if nbins == 0:
        return TimeSeries(np.empty(0))
    idx = ((ts - t0) // bin_width).astype(np.int64)
    keep = idx < nbins
    totals = np.bincount(idx[keep], weights=trace.sizes[keep], minlength=nbins)
    return TimeSeries(totals)


def interarrival_series(trace: PacketTrace) -> TimeSeries:
    """Successive timestamp differences; length N-1, zeros allowed."""
    if len(trace) == 0:
        raise EmptyTrace("cannot derive interarrivals from an empty trace")
    if len(trace) < 2:
        raise TooFewRecords("interarrival series needs at least two records")
    return TimeSeries(np.diff(trace.timestamps))

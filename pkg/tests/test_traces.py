import io

import numpy as np
import pytest

import hurstkit as hk
from hurstkit import (
    PacketRecord,
    PacketTrace,
    bin_bytes,
    interarrival_series,
    parse_packet_trace,
    serialize_packet_trace,
)


def trace_of(pairs, source="t"):
    return PacketTrace(records=tuple(PacketRecord(t, s) for t, s in pairs), source=source)


def test_parse_two_records():
    trace = parse_packet_trace(io.StringIO("0.0 64\n0.5 128\n"))
    assert len(trace) == 2
    assert trace.records[0] == PacketRecord(0.0, 64)
    assert trace.records[1] == PacketRecord(0.5, 128)


def test_parse_allows_comments_and_blanks():
    text = "# header\n\n0.0 10\n   \n0.25 20\n"
    trace = parse_packet_trace(io.StringIO(text))
    assert len(trace) == 2


def test_parse_malformed_timestamp():
    with pytest.raises(hk.MalformedLine, match="line 1"):
        parse_packet_trace(io.StringIO("abc 64\n"))


def test_parse_malformed_size():
    with pytest.raises(hk.MalformedLine, match="column 2"):
        parse_packet_trace(io.StringIO("0.0 sixty\n"))
    with pytest.raises(hk.MalformedLine):
        parse_packet_trace(io.StringIO("0.0 -4\n"))
    with pytest.raises(hk.MalformedLine):
        parse_packet_trace(io.StringIO("0.0 64 extra\n"))


def test_parse_non_monotone():
    with pytest.raises(hk.NonMonotoneTimestamp, match="record 2"):
        parse_packet_trace(io.StringIO("1.0 64\n0.5 64\n"))


def test_hand_built_trace_validates_monotonicity():
    with pytest.raises(hk.NonMonotoneTimestamp):
        trace_of([(1.0, 1), (0.5, 1)])


def test_round_trip_identity():
    trace = trace_of([(0.0, 10), (0.125, 0), (0.125, 7), (3.5, 1500)])
    buf = io.StringIO()
    serialize_packet_trace(trace, buf)
    back = parse_packet_trace(io.StringIO(buf.getvalue()))
    assert back.records == trace.records


def test_bin_bytes_hand_example():
    trace = trace_of([(0.1, 10), (0.2, 20), (1.5, 30)])
    series = bin_bytes(trace, 1.0)
    assert series.values.tolist() == [30.0, 30.0]


def test_bin_bytes_single_packet_is_empty():
    series = bin_bytes(trace_of([(5.0, 40)]), 1.0)
    assert len(series) == 0


def test_bin_bytes_zero_bins_are_kept():
    trace = trace_of([(0.0, 10), (3.5, 20)])
    series = bin_bytes(trace, 1.0)
    assert series.values.tolist() == [10.0, 0.0, 0.0, 20.0]


def test_bin_bytes_conservation_across_widths():
    rng = np.random.default_rng(8)
    times = np.sort(rng.uniform(0.0, 10.0, 500))
    sizes = rng.integers(40, 1500, 500)
    trace = trace_of(list(zip(times.tolist(), (int(s) for s in sizes))))
    coarse = bin_bytes(trace, 1.0)
    fine = bin_bytes(trace, 0.1)
    # for fully covered seconds, ten fine bins sum to one coarse bin
    full = fine.values[: 10 * len(coarse)].reshape(-1, 10).sum(axis=1)
    np.testing.assert_allclose(full[: len(coarse)], coarse.values[: len(full)])


def test_bin_bytes_totals_bounded_by_trace():
    trace = trace_of([(0.0, 10), (0.4, 20), (0.9, 30), (2.3, 40)])
    series = bin_bytes(trace, 1.0)
    assert series.values.sum() <= 10 + 20 + 30 + 40
    # last packet interior to the final kept bin: every byte counted
    assert series.values.sum() == 100


def test_bin_bytes_errors():
    with pytest.raises(hk.EmptyTrace):
        bin_bytes(PacketTrace(records=()), 1.0)
    with pytest.raises(hk.BadBinWidth):
        bin_bytes(trace_of([(0.0, 1)]), 0.0)
    with pytest.raises(hk.BadBinWidth):
        bin_bytes(trace_of([(0.0, 1)]), -2.0)


def test_interarrival_hand_example():
    series = interarrival_series(trace_of([(0.0, 1), (1.0, 1), (3.0, 1), (6.0, 1)]))
    assert series.values.tolist() == [1.0, 2.0, 3.0]


def test_interarrival_duplicates_allowed():
    series = interarrival_series(trace_of([(0.0, 1), (0.0, 1), (0.5, 1)]))
    assert series.values.tolist() == [0.0, 0.5]


def test_interarrival_invariants():
    rng = np.random.default_rng(9)
    times = np.cumsum(rng.exponential(1.0, 100))
    trace = trace_of([(float(t), 64) for t in times])
    series = interarrival_series(trace)
    assert len(series) == len(trace) - 1
    assert series.values.sum() == pytest.approx(times[-1] - times[0], abs=1e-9)
    assert np.all(series.values >= 0)


def test_interarrival_errors():
    with pytest.raises(hk.EmptyTrace):
        interarrival_series(PacketTrace(records=()))
    with pytest.raises(hk.TooFewRecords):
        interarrival_series(trace_of([(0.0, 1)]))

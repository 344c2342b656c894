"""Shared fixtures: the standard seed family and cached 100k-point paths."""

from __future__ import annotations

import pytest

import hurstkit as hk

SEEDS = (0, 1, 2)
DESK_N = 100_000


@pytest.fixture(scope="session")
def fgn07():
    return [hk.gen_fgn(hk.FgnSpec(hurst=0.7, n=DESK_N, seed=s)) for s in SEEDS]


@pytest.fixture(scope="session")
def fgn09():
    return [hk.gen_fgn(hk.FgnSpec(hurst=0.9, n=DESK_N, seed=s)) for s in SEEDS]


@pytest.fixture(scope="session")
def farima02():
    return [hk.gen_farima(hk.FarimaSpec(d=0.2, n=DESK_N, seed=s)) for s in SEEDS]


@pytest.fixture(scope="session")
def farima2d1():
    return [
        hk.gen_farima(hk.FarimaSpec(d=0.4, n=DESK_N, seed=s, ar=(0.5, 0.2), ma=(0.1,)))
        for s in SEEDS
    ]


@pytest.fixture(scope="session")
def iid_big():
    return [hk.gen_iid_gaussian(DESK_N, s) for s in SEEDS]


@pytest.fixture(scope="session")
def suite07(fgn07):
    """Full five-estimator results per seed on clean FGN H=0.7."""
    out = []
    for series in fgn07:
        out.append({m: hk.estimate(series, m) for m in hk.METHOD_ORDER})
    return out


def full_suite(series: hk.TimeSeries) -> dict[str, hk.EstimatorReport]:
    return {m: hk.estimate(series, m) for m in hk.METHOD_ORDER}

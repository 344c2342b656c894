"""Seeded synthesis of the test processes: iid Gaussian noise, fractional
Gaussian noise, FARIMA(p,d,q) and AR(1).

FGN is synthesised with Paxson's spectral method: the FGN spectral density
is evaluated on the Fourier grid, each value is multiplied by an
independent unit-mean exponential (the asymptotic periodogram law) and
given a uniform random phase, and the inverse transform's real part is
kept.  The alias sum in the density uses Paxson's three-term truncation
plus his integral tail correction.  Output is normalised post hoc to zero
mean and unit variance.

FARIMA paths come from the truncated MA(infinity) representation of
fractional integration (psi_0 = 1, psi_k = psi_{k-1} * (k-1+d)/k) applied
to the innovations, followed by the MA and AR filters; a warm-up prefix
of K = N samples is generated and discarded.

Every generator is a pure function of its spec: the random generator is
instantiated per call from the seed and no global state is touched.

References: Paxson (1997), "Fast, approximate synthesis of fractional
Gaussian noise"; Granger & Joyeux (1980) for fractional differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve, lfilter

from .errors import BadHurst, ExplosiveAR, NonStationaryAR, SeriesTooShort
from .series import TimeSeries

__all__ = [
    "FgnSpec",
    "FarimaSpec",
    "Ar1Spec",
    "gen_iid_gaussian",
    "gen_fgn",
    "gen_farima",
    "gen_ar1",
    "fgn_spectral_density",
    "fractional_ma_coefficients",
]


@dataclass(frozen=True)
class FgnSpec:
    """Fractional Gaussian noise sample: Hurst parameter, length, seed."""

    hurst: float
    n: int
    seed: int

    def __post_init__(self) -> None:
        if not (0.5 <= self.hurst < 1.0):
            raise BadHurst(f"FGN synthesis needs H in [0.5, 1), got {self.hurst}")
        if self.n < 16:
            raise SeriesTooShort(f"FGN synthesis needs N >= 16, got {self.n}")


@dataclass(frozen=True)
class FarimaSpec:
    """FARIMA(p,d,q) sample path specification.

    ``ar``/``ma`` follow the convention
    (1 - sum phi_j B^j)(1 - B)^d X = (1 - sum theta_j B^j) eps.
    Stationarity of the AR polynomial is checked with explicit
    inequalities for p <= 2; higher orders are rejected unless
    ``allow_unchecked_ar`` is set.
    """

    d: float
    n: int
    seed: int
    ar: tuple[float, ...] = ()
    ma: tuple[float, ...] = ()
    sigma: float = 1.0
    allow_unchecked_ar: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "ar", tuple(float(v) for v in self.ar))
        object.__setattr__(self, "ma", tuple(float(v) for v in self.ma))
        if not (0.0 <= self.d < 0.5):
            raise BadHurst(f"fractional differencing needs d in [0, 0.5), got {self.d}")
        if self.n < 16:
            raise SeriesTooShort(f"FARIMA synthesis needs N >= 16, got {self.n}")
        if not (self.sigma > 0):
            raise ValueError(f"innovation std must be positive, got {self.sigma}")
        self._check_ar_stationarity()

    def _check_ar_stationarity(self) -> None:
        p = len(self.ar)
        if p == 0:
            return
        if p == 1:
            if abs(self.ar[0]) >= 1.0:
                raise NonStationaryAR(f"AR(1) needs |phi_1| < 1, got {self.ar[0]}")
            return
        if p == 2:
            phi1, phi2 = self.ar
            if phi1 + phi2 >= 1.0 or phi2 - phi1 >= 1.0 or abs(phi2) >= 1.0:
                raise NonStationaryAR(
                    f"AR(2) stationarity triangle violated: phi=({phi1}, {phi2})"
                )
            return
        if not self.allow_unchecked_ar:
            raise NonStationaryAR(
                f"AR order {p} > 2 is not validated; pass allow_unchecked_ar=True to proceed"
            )

    @property
    def hurst(self) -> float:
        """Implied Hurst parameter H = d + 1/2."""
        return self.d + 0.5


@dataclass(frozen=True)
class Ar1Spec:
    """Stationary AR(1): X_t = phi * X_{t-1} + eps_t with X_0 stationary."""

    phi: float
    n: int
    seed: int
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if abs(self.phi) >= 1.0:
            raise ExplosiveAR(f"AR(1) needs |phi| < 1, got {self.phi}")
        if self.n < 1:
            raise SeriesTooShort(f"AR(1) needs N >= 1, got {self.n}")
        if not (self.sigma > 0):
            raise ValueError(f"innovation std must be positive, got {self.sigma}")


def gen_iid_gaussian(n: int, seed: int) -> TimeSeries:
    """N independent standard-normal values, deterministic given the seed."""
    if n < 1:
        raise SeriesTooShort(f"need N >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return TimeSeries(rng.standard_normal(n))


def fgn_spectral_density(frequencies: np.ndarray, hurst: float) -> np.ndarray:
    """Approximate FGN spectral density f(lambda; H) on (0, pi].

    f = 2 sin(pi H) Gamma(2H+1) (1 - cos lambda) * [|lambda|^(-2H-1) + B3]
    where B3 truncates the alias sum sum_{j>=1} (2*pi*j +/- lambda)^(-2H-1)
    at three terms and corrects the tail with its integral approximation.
    """
    lam = np.asarray(frequencies, dtype=np.float64)
    d = -(2.0 * hurst + 1.0)
    dprime = -2.0 * hurst
    two_pi = 2.0 * np.pi
    a3 = 3.0 * two_pi + lam
    b3 = 3.0 * two_pi - lam
    tail = (a3**dprime + b3**dprime + (4.0 * two_pi + lam) ** dprime + (4.0 * two_pi - lam) ** dprime) / (
        8.0 * hurst * np.pi
    )
    alias = (
        (two_pi + lam) ** d
        + (two_pi - lam) ** d
        + (2.0 * two_pi + lam) ** d
        + (2.0 * two_pi - lam) ** d
        + a3**d
        + b3**d
        + tail
    )
    scale = 2.0 * math.sin(math.pi * hurst) * math.gamma(2.0 * hurst + 1.0) * (1.0 - np.cos(lam))
    return scale * (np.abs(lam) ** d + alias)


def gen_fgn(spec: FgnSpec) -> TimeSeries:
    """Approximate FGN path: zero mean, unit variance, deterministic in seed.

    Draw order (fixed for reproducibility): exponential magnitudes for
    j = 1..floor(N/2), then uniform phases for the same bins.
    """
    n, hurst = spec.n, spec.hurst
    rng = np.random.default_rng(spec.seed)
    m = n // 2
    lam = 2.0 * np.pi * np.arange(1, m + 1) / n
    density = fgn_spectral_density(lam, hurst)
    mags = np.sqrt(density * rng.exponential(1.0, m))
    phases = rng.uniform(0.0, 2.0 * np.pi, m)
    z = mags * np.exp(1j * phases)

    coeffs = np.zeros(n, dtype=np.complex128)
    coeffs[n - m :] = np.conj(z[::-1])
    coeffs[1 : m + 1] = z  # for even n the Nyquist bin keeps z_m; real part below
    path = np.fft.ifft(coeffs).real
    path -= path.mean()
    path /= path.std()
    return TimeSeries(path)


def fractional_ma_coefficients(d: float, count: int) -> np.ndarray:
    """psi_0..psi_count of (1-B)^(-d): psi_k = psi_{k-1} * (k-1+d)/k."""
    k = np.arange(1, count + 1, dtype=np.float64)
    return np.concatenate(([1.0], np.cumprod((k - 1.0 + d) / k)))


def gen_farima(spec: FarimaSpec) -> TimeSeries:
    """FARIMA(p,d,q) sample path (variance model-determined, not rescaled)."""
    n = spec.n
    warmup = n  # full-history truncation: K = N
    total = n + warmup
    rng = np.random.default_rng(spec.seed)
    eps = rng.standard_normal(total) * spec.sigma

    if spec.d > 0.0:
        psi = fractional_ma_coefficients(spec.d, total - 1)
        x = fftconvolve(eps, psi)[:total]
    else:
        x = eps
    if spec.ma:
        x = lfilter(np.concatenate(([1.0], -np.asarray(spec.ma))), [1.0], x)
    if spec.ar:
        x = lfilter([1.0], np.concatenate(([1.0], -np.asarray(spec.ar))), x)
    return TimeSeries(x[warmup:])


def gen_ar1(spec: Ar1Spec) -> TimeSeries:
    """Zero-mean AR(1) path, stationary from t=0.

    X_0 ~ N(0, sigma^2 / (1 - phi^2)); X_t = phi X_{t-1} + eps_t.
    """
    rng = np.random.default_rng(spec.seed)
    x0 = rng.standard_normal() * spec.sigma / math.sqrt(1.0 - spec.phi**2)
    if spec.n == 1:
        return TimeSeries([x0])
    eps = rng.standard_normal(spec.n - 1) * spec.sigma
    rest, _ = lfilter([1.0], [1.0, -spec.phi], eps, zi=np.array([spec.phi * x0]))
    return TimeSeries(np.concatenate(([x0], rest)))

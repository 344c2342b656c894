"""Exception types shared across the package."""


class HurstkitError(Exception):
    """Base class for every error raised by hurstkit."""


class DegenerateSeries(HurstkitError):
    """Series has zero variance where variation is required."""


class LagOutOfRange(HurstkitError):
    """Requested autocorrelation lag is not in [1, N-1]."""


class BadBlock(HurstkitError):
    """Aggregation block size is outside [1, N]."""


class SeriesTooShort(HurstkitError):
    """Series is shorter than the operation's minimum length."""


class BadHurst(HurstkitError):
    """Hurst (or fractional differencing) parameter outside the valid range."""


class NonStationaryAR(HurstkitError):
    """AR coefficients fail the stationarity check."""


class ExplosiveAR(HurstkitError):
    """AR(1) coefficient has magnitude >= 1."""


class NonPositiveData(HurstkitError):
    """Data contains zero or negative values where positives are required."""


class InsufficientPoints(HurstkitError):
    """Fewer than three points available for a regression."""


class NonPositivePoint(HurstkitError):
    """A log-log fit was given a non-positive coordinate."""


class BandwidthOutOfRange(HurstkitError):
    """Local Whittle bandwidth outside [8, floor((N-1)/2)]."""


class MalformedLine(HurstkitError):
    """A trace or series file line could not be parsed."""


class NonMonotoneTimestamp(HurstkitError):
    """Packet timestamps decreased within a trace."""


class EmptyTrace(HurstkitError):
    """Operation requires a non-empty packet trace."""


class TooFewRecords(HurstkitError):
    """Operation requires at least two packet records."""


class BadBinWidth(HurstkitError):
    """Bin width must be a positive, finite number of seconds."""


class ConfigError(HurstkitError):
    """Experiment configuration is invalid."""

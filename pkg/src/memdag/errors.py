"""Exception types shared across the toolkit."""


class AnalysisError(Exception):
    """Base class for every failure the analyzer can raise on purpose."""


class MalformedLine(AnalysisError):
    """A trace line that does not follow the two-column grammar."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class UnknownMnemonic(AnalysisError):
    """Strict decoding hit a mnemonic outside the supported table."""

    def __init__(self, mnemonic: str, line_no: int | None = None):
        self.mnemonic = mnemonic
        self.line_no = line_no
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"unsupported mnemonic {mnemonic!r}{where}")


class NotAMemoryOp(AnalysisError):
    """Asked for the access size of an instruction that never touches memory."""


class CapExceeded(AnalysisError):
    """A materialized graph grew past the configured vertex cap."""


class InvalidSpec(AnalysisError):
    """A synthetic trace request with out-of-range or unknown parameters."""


class InconsistentSummary(AnalysisError):
    """Summary counters that contradict each other (layer counts vs work)."""


class DepthExceedsWork(AnalysisError):
    """Depth larger than total work; no DAG can produce this."""


class ZeroBaselineCost(AnalysisError):
    """Relative sensitivity is undefined when the baseline denominator is 0."""


class ZeroSpan(AnalysisError):
    """Bandwidth is undefined on an empty critical path."""


class TauMismatch(AnalysisError):
    """Movement bins were accumulated with a different sampling interval."""


class MixedParams(AnalysisError):
    """Ranking requires every report to share one model parameter set."""

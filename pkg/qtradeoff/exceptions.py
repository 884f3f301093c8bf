# qtradeoff/exceptions.py
from typing import Optional, Sequence


class QTradeoffError(Exception):
    """Base error carrying the CLI exit code and a human readable detail."""

    exit_code: int = 2

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class UsageError(QTradeoffError):
    exit_code = 2


class ChannelValidationError(QTradeoffError):
    """A Bloch matrix that is not completely positive."""

    exit_code = 2

    def __init__(self, detail: str, lambdas: Sequence[float]):
        super().__init__(detail)
        self.lambdas = tuple(float(x) for x in lambdas)


class TheoremHypothesisError(QTradeoffError):
    exit_code = 2


class VerificationFailure(QTradeoffError):
    exit_code = 1

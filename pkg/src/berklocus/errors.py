"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""

from __future__ import annotations


class BerkError(Exception):
    code = "ERROR"
    exit_code = 1


class PrecisionExhausted(BerkError):
    code = "PRECISION"
    exit_code = 3


class InsufficientTower(BerkError):
    code = "TOWER"
    exit_code = 3


class NegativeValuation(BerkError):
    code = "PRECISION"
    exit_code = 3


class ZeroPolynomial(BerkError):
    code = "PARSE"
    exit_code = 2


class ParseError(BerkError):
    code = "PARSE"
    exit_code = 2

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (at offset {offset})")
        self.offset = offset


class ZeroDenominator(ParseError):
    pass


class ConfigError(BerkError):
    code = "PARSE"
    exit_code = 2


class FactorizationUnsupported(BerkError):
    code = "UNSUPPORTED_FACTORIZATION"
    exit_code = 3


class NotPotentialGoodReduction(BerkError):
    code = "INCONCLUSIVE"
    exit_code = 4


class CandidateExhausted(BerkError):
    code = "INCONCLUSIVE"
    exit_code = 4


class SearchExhausted(BerkError):
    code = "INCONCLUSIVE"
    exit_code = 4


class NotFixed(BerkError):
    code = "PRECONDITION"
    exit_code = 2


class PreconditionError(BerkError):
    code = "PRECONDITION"
    exit_code = 2


class OracleMismatch(BerkError):
    code = "ORACLE_MISMATCH"
    exit_code = 5

    def __init__(self, message: str, sample=None):
        super().__init__(message)
        self.sample = sample

"""Error hierarchy shared by every fraudscope app.

Each class carries the process exit code the management commands use when
the error escapes to the command line: 1 for data or model failures, 2 for
usage or configuration failures.
"""


class FraudScopeError(Exception):
    """Base class for all fraudscope errors"""
    exit_code = 1


class UsageError(FraudScopeError):
    """Invalid arguments or parameters"""
    exit_code = 2


class ConfigError(UsageError):
    """Invalid configuration value or key"""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class ReadError(UsageError):
    """An input stream or file could not be read"""


class LengthMismatchError(UsageError):
    """Paired series of different lengths"""


class DataError(FraudScopeError):
    """The data cannot support the requested operation"""


class SchemaError(DataError):
    """An input file lacks a mandatory column"""


class EmptyResultError(DataError):
    """A filter matched nothing"""


class ConsistencyError(DataError):
    """Two inputs that must describe the same records disagree"""


class InsufficientDataError(DataError):
    """Too few usable rows for the requested statistic"""


class DomainError(DataError):
    """A value lies outside the domain of a computation"""


class ZeroVarianceError(DomainError):
    """A series that must vary is constant"""


class SingularDesignError(DomainError):
    """A regression predictor is constant"""


class LogDomainError(DomainError):
    """A logarithm was requested for a non-positive value"""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class EncodingError(DataError):
    """A record cannot be encoded under a feature schema"""


class TrainingError(DataError):
    """The training matrix is unusable"""


class DegenerateLabelsError(DataError):
    """Labels contain a single class where two are required"""


class RuleError(DataError):
    """A trigger rule failed to load; carries its source position"""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self):
        if self.line is None:
            return self.message
        return f'line {self.line}, column {self.column}: {self.message}'


class RuleSyntaxError(RuleError):
    """Rule text does not follow the grammar"""


class RuleTypeError(RuleError):
    """Rule expression does not type-check against the claim schema"""


class DuplicateRuleError(RuleError):
    """Two rules in one set share an id"""

"""Exception hierarchy for the star-expression pipeline"""


class StarExprError(Exception):
    """Base class for every error raised by the charts app"""


class ExprSyntaxError(StarExprError):
    """Malformed star-expression text; offset is 0-based, len(text) means end of input"""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class ChartFormatError(StarExprError):
    """Malformed chart file"""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.message = message
        self.line = line


class ChartInvariantError(StarExprError):
    """Well-formed input that violates a chart invariant"""


class PreconditionError(StarExprError):
    """An operation was called outside its precondition"""


class WitnessError(StarExprError):
    """A labeled chart is not a LLEE-witness where one is required"""

    def __init__(self, report):
        kinds = ', '.join(f"{v.kind}@{v.site}" for v in report.violations)
        super().__init__(f"not a LLEE-witness: {kinds}")
        self.report = report


class SubsetSearchLimitError(StarExprError):
    """Loop elimination would have to try more entry sets than configured"""


class CollapseError(StarExprError):
    """A collapse step cannot be carried out as requested"""


class CertificateFormatError(StarExprError):
    """Malformed certificate file"""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.message = message
        self.line = line


class ProofConstructionError(StarExprError):
    """A generated certificate did not pass the checker"""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result

# app/core/constants.py
from enum import IntEnum

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__


class TransformMethod(StrEnum):
    EXACT = "exact"
    EVIDENCE = "evidence"
    DEFAULT = "default"
    LIFTED = "lifted"


class BlockingMode(StrEnum):
    FULL = "full"
    SHORT = "short"


class RedundancyFilter(StrEnum):
    NONE = "none"
    CONSERVATIVE = "conservative"
    AGGRESSIVE = "aggressive"


class VerifySuite(StrEnum):
    PROP1 = "prop1"
    RANKING = "ranking"
    EQUIVALENCE = "equivalence"
    LIFTED = "lifted"


class LevelKind(StrEnum):
    BOTTOM = "bottom"
    FINITE = "finite"
    HARD = "hard"


class ReportStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"


# Process exit codes of the command-line surface
class ExitCode(IntEnum):
    SUCCESS = 0
    NOT_ENTAILED = 1
    USAGE_ERROR = 2
    INCONSISTENT_EVIDENCE = 3


# Display offsets: the exact encoding renders with K=0, the others with K=1
EXACT_DISPLAY_OFFSET = 0
DEFAULT_DISPLAY_OFFSET = 1

# Reserved predicate names of the formula grammar
ALLDIFF_PREDICATE = "alldiff"
EQUALITY_PREDICATE = "eq"


class TermKind(StrEnum):
    CONSTANT = "constant"
    VARIABLE = "variable"

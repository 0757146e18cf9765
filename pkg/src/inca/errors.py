"""Exception types raised across the package."""


class InCAError(Exception):
    """Base class for every domain error this package raises."""


class GroundednessError(InCAError):
    """A formula or literal contains variables, or atoms outside the atom universe."""


class CapacityError(InCAError):
    """An input exceeds a configured enumeration cap."""


class InconsistentKBError(InCAError):
    """The probabilistic knowledge base admits no satisfying distribution."""


class InconsistentEvidenceError(InconsistentKBError):
    """Adding evidence made the probabilistic knowledge base unsatisfiable.

    `conflict` names a minimal conflicting subset of the augmented formulas
    when one was computed, otherwise the full formula list.
    """

    def __init__(self, message: str, conflict=()):
        super().__init__(message)
        self.conflict = tuple(conflict)


class InternalInconsistencyError(InCAError):
    """A literal and its complement were both warranted. Indicates a bug."""


class DistributionError(InCAError):
    """A world distribution is malformed (negative mass, wrong total, bad support)."""


class SortError(InCAError):
    """A constant is used in a role it was not declared for."""


class AssemblyError(InCAError):
    """A parsed knowledge base cannot be assembled into a framework."""


class ParseError(InCAError):
    """Syntax or local semantic error in knowledge base text, with position."""

    def __init__(self, message: str, line: int, column: int, snippet: str = ""):
        self.line = line
        self.column = column
        self.snippet = snippet
        super().__init__(f"line {line}, column {column}: {message}")

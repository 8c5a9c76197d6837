"""Exception types shared across the package."""


class TagSelectError(Exception):
    """Base class for all tagselect errors."""


class EmptyInstance(TagSelectError):
    """No rules survived ingestion; there is nothing to select from."""


class AttributeOutOfRange(TagSelectError):
    """A rule references an attribute-value index outside [0, m)."""


class InfeasiblePolarity(TagSelectError):
    """The sentiment quotas cannot be met by the available tags.

    Carries the deficit per side so callers can report how many tags
    are missing.
    """

    def __init__(self, message: str, pos_deficit: int = 0, neg_deficit: int = 0):
        super().__init__(message)
        self.pos_deficit = pos_deficit
        self.neg_deficit = neg_deficit


class Infeasible(TagSelectError):
    """No selection satisfies the relevance bound at the given quotas."""


class InstanceTooLarge(TagSelectError):
    """Exhaustive solving was refused because the vocabulary exceeds the cap."""


class NoData(TagSelectError):
    """An estimation operation received an empty input."""


class RulesFileError(TagSelectError):
    """A rules file line failed to parse or validate.

    ``line_no`` is 1-based.
    """

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no

"""Exception types raised by the tagging engine."""


class RuletagError(Exception):
    """Base class for all engine errors."""


class ParseFormatError(RuletagError):
    """A morphological parse violates the canonical feature-map format."""


class RuleSyntaxError(RuletagError):
    """A rule file could not be parsed."""

    def __init__(self, message, line=None, column=None, ordinal=None):
        self.line = line
        self.column = column
        self.ordinal = ordinal
        where = []
        if ordinal is not None:
            where.append(f"rule {ordinal}")
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"col {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class LexiconError(RuletagError):
    """A lexicon file record is malformed."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ComposeError(RuletagError):
    """A compose action could not build its merged token."""


class AlignmentError(RuletagError):
    """Tagged output and gold standard token streams do not line up."""

    def __init__(self, message, position=None):
        self.position = position
        super().__init__(
            f"position {position}: {message}" if position is not None else message
        )

"""Exception types shared across the package."""


class ForcelabError(Exception):
    """Base class for every error raised deliberately by this package."""


class UnknownConditionError(ForcelabError):
    """A condition token does not occur in the preorder."""


class ValidationError(ForcelabError):
    """A structural invariant failed; carries the failing check and a witness."""

    def __init__(self, check, detail):
        self.check = check
        self.detail = detail
        super().__init__("%s: %s" % (check, detail))


class ModeError(ForcelabError):
    """A name outside the admissible class was passed to a strict engine."""


class ResourceLimitError(ForcelabError):
    """An enumeration or search exceeded its configured cap."""


class SystemFileError(ForcelabError):
    """Malformed system file; carries the 1-based line number."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        self.message = message
        super().__init__("line %d: %s" % (line_no, message))


class FormulaSyntaxError(ForcelabError):
    """Malformed formula text; carries the offset of the offending token."""

    def __init__(self, pos, message):
        self.pos = pos
        super().__init__("at %d: %s" % (pos, message))

class ModalcutError(Exception):
    """Base class of every error raised by the library."""


class ParseError(ModalcutError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class ModeError(ParseError):
    """A binder or variable from the wrong namespace."""


class ClassError(ModalcutError):
    """An expression is outside the grammar of its calculus."""


class TypingError(ModalcutError):
    def __init__(self, msg: str, subject=None, expected=None, actual=None):
        super().__init__(msg)
        self.subject = subject
        self.expected = expected
        self.actual = actual


class NotARedex(ModalcutError):
    pass


class CalculusError(ModalcutError):
    """An operation was applied to an expression of the wrong calculus."""

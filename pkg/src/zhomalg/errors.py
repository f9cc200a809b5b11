"""Exception hierarchy shared by every module."""


class ZHomalgError(Exception):
    """Base class for all errors raised by zhomalg."""


class InputError(ZHomalgError, ValueError):
    """A caller violated an operation's contract (shapes, ranges, finiteness)."""


class IllDefinedHomError(InputError):
    """A matrix does not induce a homomorphism between the given presentations."""


class ContractError(ZHomalgError, AssertionError):
    """An internal invariant failed; indicates a bug or a violated precondition."""


class LiteralError(InputError):
    """A group or matrix literal could not be parsed.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")

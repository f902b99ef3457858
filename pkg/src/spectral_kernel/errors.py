"""Exception hierarchy shared by the kernel and the command line front-end."""


class KernelError(Exception):
    """Base class for every error raised by the kernel."""

    exit_code = 3


class MathDomainError(KernelError):
    """A mathematical precondition does not hold for the given data."""


class DivisionByZero(MathDomainError, ZeroDivisionError):
    pass


class FieldMismatch(MathDomainError):
    pass


class NotNormalForm(MathDomainError):
    pass


class NotCommuting(MathDomainError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"[L, G{index}] != 0")


class DuplicateOrderClass(MathDomainError):
    def __init__(self, i: int, j: int, residue: int):
        self.i, self.j, self.residue = i, j, residue
        super().__init__(f"G{i} and G{j} share the order class {residue}")


class NotSubgroup(MathDomainError):
    pass


class NotInCentralizerSpan(MathDomainError):
    """Raised by module reduction; carries the offending order and class."""

    def __init__(self, message: str, order=None, residue=None):
        self.order, self.residue = order, residue
        super().__init__(message)


class ArityMismatch(MathDomainError):
    pass


class InputNotReduced(MathDomainError):
    pass


class NonConstantResultant(MathDomainError):
    pass


class ZeroInput(MathDomainError):
    pass


class SessionError(KernelError):
    """Problems with the text of a session; reported with exit code 2."""

    exit_code = 2


class SessionSyntaxError(SessionError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"line {line}, col {col}: {message}")


class UnknownSymbol(SessionError):
    pass


class SugarOutsideField(SessionError):
    pass


class NonIntegerExponent(SessionError):
    pass

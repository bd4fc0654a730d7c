class QRadialError(Exception):
    pass


class DivisionByZero(QRadialError, ZeroDivisionError):
    pass


class NotSymmetrizable(QRadialError, ValueError):
    pass


class IndexOutOfRange(QRadialError, IndexError):
    pass


class ContextMismatch(QRadialError, ValueError):
    pass


class SymbolicTorusUnsupported(QRadialError, ValueError):
    pass


class IdenticallySingular(QRadialError, ArithmeticError):
    """A cycle denominator vanished identically for the chosen parameters."""

    def __init__(self, word, detail=""):
        self.word = tuple(word)
        msg = f"identically singular denominator for F-word {self.word}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class MissingGeneratorImage(QRadialError, KeyError):
    pass


class InvalidConfig(QRadialError, ValueError):
    pass


class ParseError(QRadialError, ValueError):
    def __init__(self, msg, pos=None):
        self.pos = pos
        if pos is not None:
            msg = f"{msg} (at offset {pos})"
        super().__init__(msg)

"""Exception hierarchy shared by every module of the package."""


class NormalBasisError(Exception):
    """Base class for all errors raised by normbasis."""


class NotPrime(NormalBasisError, ValueError):
    pass


class SearchExhausted(NormalBasisError, RuntimeError):
    pass


class TowerTooDeep(NormalBasisError, ValueError):
    pass


class DivisionByZero(NormalBasisError, ZeroDivisionError):
    pass


class CtxMismatch(NormalBasisError, TypeError):
    pass


class NotADivisor(NormalBasisError, ValueError):
    pass


class NotInSubfield(NormalBasisError, ValueError):
    pass


class NotMonic(NormalBasisError, ValueError):
    pass


class NotCoprime(NormalBasisError, ValueError):
    pass


class IndexOutOfRange(NormalBasisError, IndexError):
    pass


class Singular(NormalBasisError, ArithmeticError):
    pass


class NoGenerator(NormalBasisError, RuntimeError):
    pass


class EpsilonCollision(NormalBasisError, ArithmeticError):
    """The two Gauss periods of the n = p1*p2 criterion coincide (odd q)."""


class NotApplicable(NormalBasisError, ValueError):
    pass


class BoundExceeded(NormalBasisError, ValueError):
    pass


class Disagreement(NormalBasisError, AssertionError):
    """Two criteria returned different verdicts for the same element.

    ``element`` is the offending element and ``verdicts`` maps criterion id
    to its boolean verdict.
    """

    def __init__(self, message, element=None, verdicts=None, q=None, n=None):
        super().__init__(message)
        self.element = element
        self.verdicts = dict(verdicts or {})
        self.q = q
        self.n = n

    def to_json(self):
        elem = self.element
        if elem is not None and hasattr(elem, "to_list"):
            elem = elem.to_list()
        return {
            "error": "Disagreement",
            "message": str(self),
            "q": self.q,
            "n": self.n,
            "element": elem,
            "verdicts": self.verdicts,
        }

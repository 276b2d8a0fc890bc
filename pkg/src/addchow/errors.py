"""Exception hierarchy shared by all modules."""


class AddchowError(Exception):
    """Base class for all library errors."""


class DivisionByZero(AddchowError):
    pass


class TowerMismatch(AddchowError):
    pass


class NoExtension(AddchowError):
    pass


class UnknownVariable(AddchowError):
    pass


class UnsupportedDegree(AddchowError):
    pass


class CharacteristicObstruction(AddchowError):
    pass


class ZeroArgument(AddchowError):
    pass


class HigherOrderPole(AddchowError):
    pass


class BadPosition(AddchowError):
    pass


class IndexOutOfRange(AddchowError):
    pass


class ZeroProduct(AddchowError):
    pass


class DegenerateModulus(AddchowError):
    pass


class DegenerateData(AddchowError):
    pass


class Singular(AddchowError):
    pass


class NegativeLimitValuation(AddchowError):
    pass


class ParseError(AddchowError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position

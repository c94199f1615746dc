"""Exception hierarchy.

Everything raised on purpose by relforge derives from :class:`RelforgeError`,
so callers (the CLI in particular) can separate bad input from bugs.
"""


class RelforgeError(Exception):
    pass


# -- monoids -----------------------------------------------------------------

class MonoidError(RelforgeError):
    pass


class NotAssociative(MonoidError):
    def __init__(self, triple):
        self.triple = triple
        a, b, c = triple
        super().__init__(f"table is not associative at (a, b, c) = ({a}, {b}, {c})")


class NoIdentityAtZero(MonoidError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"element 0 is not an identity: fails against element {element}")


class NotCommutative(MonoidError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"table is not commutative at (a, b) = {pair}")


class CarrierTooLarge(MonoidError):
    pass


class NotClosed(MonoidError):
    def __init__(self, pair, result):
        self.pair = pair
        self.result = result
        super().__init__(f"subset is not closed: {pair[0]} + {pair[1]} = {result} lies outside")


class MissingIdentity(MonoidError):
    pass


# -- relations ---------------------------------------------------------------

class RelationError(RelforgeError):
    pass


class ArityMismatch(RelationError):
    pass


class OrderMismatch(RelationError):
    pass


class NotAPermutation(RelationError):
    pass


class BadIndex(RelationError):
    pass


class BadPositions(RelationError):
    pass


# -- decomposition -----------------------------------------------------------

class DecompositionError(RelforgeError):
    pass


class OrderTooSmall(DecompositionError):
    pass


class FaithfulnessTooLow(DecompositionError):
    pass


class NoSolutionWithinBudget(DecompositionError):
    pass


class UnsupportedArity(DecompositionError):
    pass


class DecompositionMismatch(DecompositionError):
    pass


# -- text formats ------------------------------------------------------------

class FormatError(RelforgeError):
    pass


class ParseError(FormatError):
    """Malformed text; ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class RangeError(FormatError):
    pass


class ShapeError(FormatError):
    pass

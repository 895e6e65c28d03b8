"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto its stable exit-code contract without a lookup table.
"""


class CatDBError(Exception):
    exit_code = 1


# -- validation failures (exit 1) -------------------------------------------

class ValidationError(CatDBError):
    exit_code = 1


class NotASubset(ValidationError):
    pass


class MalformedProduct(ValidationError):
    pass


class MiddleMismatch(ValidationError):
    pass


class UnknownVertex(ValidationError):
    pass


class NotComposable(ValidationError):
    pass


class EndpointMismatch(ValidationError):
    pass


class PEDNotPreserved(ValidationError):
    def __init__(self, ped, message=None):
        self.ped = ped
        super().__init__(message or f"PED not preserved: {ped[0]} = {ped[1]}")


class SchemaMismatch(ValidationError):
    pass


class MissingCell(ValidationError):
    def __init__(self, row, arrow):
        self.row, self.arrow = row, arrow
        super().__init__(f"missing cell: row {row!r}, column {arrow!r}")


class ForeignKeyViolation(ValidationError):
    def __init__(self, row, arrow, value):
        self.row, self.arrow, self.value = row, arrow, value
        super().__init__(
            f"foreign key violation: row {row!r}, column {arrow!r} -> {value!r}")


class PEDViolation(ValidationError):
    def __init__(self, ped, row, left, right):
        self.ped, self.row, self.left, self.right = ped, row, left, right
        super().__init__(
            f"PED violation {ped[0]} = {ped[1]} at row {row!r}: {left!r} != {right!r}")


class BadPath(ValidationError):
    pass


class NaturalityViolation(ValidationError):
    def __init__(self, arrow, row, left, right):
        self.arrow, self.row, self.left, self.right = arrow, row, left, right
        super().__init__(
            f"naturality fails for arrow {arrow!r} at row {row!r}: {left!r} != {right!r}")


class ColimitPEDFailure(ValidationError):
    pass


class PEDRecheckFailure(ValidationError):
    pass


class SkolemCollision(ValidationError):
    pass


class BadCell(ValidationError):
    def __init__(self, row, arrow, value, reason):
        self.row, self.arrow, self.value = row, arrow, value
        super().__init__(f"bad cell at row {row!r}, column {arrow!r}: {value!r} ({reason})")


class TypeMismatch(ValidationError):
    pass


class MonadLawViolation(ValidationError):
    pass


class AdjunctionFailure(ValidationError):
    pass


class YonedaFailure(ValidationError):
    pass


# -- bounded search gave up (exit 2) ----------------------------------------

class BoundError(CatDBError):
    exit_code = 2


class PossiblyInfinite(BoundError):
    def __init__(self, vertex, detail=""):
        self.vertex = vertex
        msg = f"hom-set enumeration not stable at vertex {vertex!r}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class BudgetExhausted(BoundError):
    pass


# -- input could not be read (exit 3) ---------------------------------------

class ParseError(CatDBError):
    exit_code = 3

    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class DuplicateName(ParseError):
    pass


class UnknownArrowInPath(ParseError):
    pass

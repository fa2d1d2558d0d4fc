"""Exception hierarchy shared by every module."""


class PmAlgError(Exception):
    """Base class for all errors raised by pmalg."""


class StructureError(PmAlgError):
    """Raw input is malformed (dangling indices, wrong lengths, bad types)."""


class InvalidAlgebra(PmAlgError):
    """Input is well formed but violates one or more algebra axioms."""

    def __init__(self, report):
        self.report = report
        first = report.violations[0] if report.violations else ("?", ())
        super().__init__(f"not a pm-algebra: {first[0]} fails at {first[1]}")


class NotALattice(PmAlgError):
    """An order has a pair without meet or join, or no bounds."""


class NotPseudocomplemented(PmAlgError):
    """Some element has no largest annihilator."""


class InvalidSpace(PmAlgError):
    """phi is not an order-reversing involution on the given poset."""


class DomainError(PmAlgError):
    """An operation was called outside its precondition."""


class CapExceeded(PmAlgError):
    """A configured resource cap would be exceeded."""


class CountingError(PmAlgError):
    """An exact-division check in the counting formulas failed."""


class TermSyntaxError(PmAlgError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")

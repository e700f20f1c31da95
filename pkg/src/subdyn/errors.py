"""Exception hierarchy shared by every subdyn module."""


class SubdynError(Exception):
    """Base class for all errors raised by subdyn."""


class MotorIsGraph(SubdynError):
    """A checker needing composition was handed a graph-motored dynamics."""


class NotSubfunctorial(SubdynError):
    pass


class InvalidPartition(SubdynError):
    pass


class IllTypedDelta(SubdynError):
    """The functor part of a dynamorphism is not a well-typed functor."""


class UnknownParam(SubdynError):
    pass


class LimitExceeded(SubdynError):
    """Enumeration would produce more objects than the configured limit."""


class InefficientComponent(SubdynError):
    """A dynamics without any nonempty realization was asked to interact."""


class Inefficient(InefficientComponent):
    pass


class NotAnInteraction(SubdynError):
    """A relation expected to be a coherent, nonempty interaction is not."""


class CapExceeded(SubdynError):
    pass


class IllTypedDisposition(SubdynError):
    pass


class IncompatibleDispositions(SubdynError):
    pass


class MissingArrowMap(SubdynError):
    pass


class FamilyInvalid(SubdynError):
    def __init__(self, report):
        super().__init__("invalid interactive family:\n" + str(report))
        self.report = report


class DocumentError(SubdynError):
    """Malformed or referentially inconsistent family-spec document."""

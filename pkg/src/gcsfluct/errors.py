"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a mathematical precondition (not a usage error)."""


class DimensionError(DomainError):
    pass


class SingularFormError(DomainError):
    pass


class AmbiguousRankError(DomainError):
    pass


class CutoffError(DomainError):
    pass

"""Exception hierarchy shared by every module."""


class DomainError(ValueError):
    """Argument outside the set where a formula or bound is defined."""


class RegionError(DomainError):
    """Point outside the region where an auxiliary expansion's bound is proven."""


class OrderTooHighError(DomainError):
    """Requested truncation order exceeds the supported cap."""


class ConvergenceError(ArithmeticError):
    """An iterative or adaptive routine failed to reach its tolerance."""

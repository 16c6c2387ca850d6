"""Exception types shared across the package."""


class SymspreadError(Exception):
    pass


class FieldError(SymspreadError):
    """Bad field construction or an arithmetic domain error (e.g. inverse of 0)."""


class GeometryError(SymspreadError):
    """Invalid projective input: zero vectors, ambient mismatch, wrong kind of subspace."""


class BudgetExceeded(SymspreadError):
    """An exhaustive computation would exceed its configured size cap."""


class CheckpointError(SymspreadError):
    pass

"""Exception types shared across the package."""


class SsmdsError(Exception):
    """Base class for all library errors."""


# -- field construction / arithmetic -----------------------------------------

class NotPrimePower(SsmdsError):
    pass


class DivisionByZero(SsmdsError):
    pass


class FieldMismatch(SsmdsError):
    pass


class OrderNotDivisible(SsmdsError):
    pass


# -- linear algebra -----------------------------------------------------------

class DimensionMismatch(SsmdsError):
    pass


class Singular(SsmdsError):
    pass


class Inconsistent(SsmdsError):
    pass


# -- index partitions ----------------------------------------------------------

class OutOfRange(SsmdsError):
    pass


class SameAxis(SsmdsError):
    pass


# -- code construction ----------------------------------------------------------

class BadLambdas(SsmdsError):
    pass


class BadField(SsmdsError):
    pass


class CoefficientZero(SsmdsError):
    pass


class CoverageGap(SsmdsError):
    pass


class FieldTooSmall(SsmdsError):
    pass


class UnsupportedR(SsmdsError):
    pass


class SearchExhausted(SsmdsError):
    def __init__(self, trials):
        super().__init__(f"coefficient search exhausted after {trials} trials")
        self.trials = trials


# -- encode / reconstruct / repair ---------------------------------------------

class SingularParityBlock(SsmdsError):
    pass


class SingularSubBlock(SsmdsError):
    def __init__(self, subset):
        super().__init__(f"singular sub-block matrix for node subset {sorted(subset)}")
        self.subset = tuple(sorted(subset))


class RepairInfeasible(SsmdsError):
    def __init__(self, node, detail, at=None):
        where = f" at {at}" if at is not None else ""
        super().__init__(f"repair of node {node} infeasible: {detail}{where}")
        self.node = node
        self.detail = detail
        self.at = at


class InterferenceNotResolvable(SsmdsError):
    pass


class SystemSingular(SsmdsError):
    pass


# -- verification ----------------------------------------------------------------

class TooLarge(SsmdsError):
    pass


# -- shard I/O --------------------------------------------------------------------

class MissingShards(SsmdsError):
    pass


class SpecHashMismatch(SsmdsError):
    pass

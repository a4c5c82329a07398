"""Exception hierarchy shared by the tree, oracles and workload drivers."""


class CategoricalError(Exception):
    pass


class InvalidWeightError(CategoricalError, ValueError):
    """Weight is zero, negative, NaN or infinite."""


class DuplicateKeyError(CategoricalError, KeyError):
    pass


class KeyNotFoundError(CategoricalError, KeyError):
    pass


class EmptyDistributionError(CategoricalError, ValueError):
    pass


class EmptyWeightsError(CategoricalError, ValueError):
    pass


class OutOfRangeError(CategoricalError, ValueError):
    """Uniform draw outside ``[0, total_weight)``."""


class ConfigError(CategoricalError, ValueError):
    pass


class InvariantError(CategoricalError, RuntimeError):
    """Raised by drivers when a tree fails validation mid-run."""

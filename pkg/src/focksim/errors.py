"""Exception types raised across the package."""


class FockSimError(Exception):
    """Base class for all focksim errors."""


class DomainError(FockSimError, ValueError):
    """A numeric argument is outside its allowed range."""


class ZeroStateError(FockSimError):
    """An operation produced or received a state with no support."""


class OverlappingModesError(FockSimError):
    """Tensor factors occupy intersecting mode subsets."""


class NotNormalizedError(FockSimError):
    """A state required to be normalized is not."""


class MissingModeError(FockSimError, KeyError):
    """A mode label is not present in the registry."""


class DuplicateModeError(FockSimError):
    """The same mode label appears more than once."""


class DimensionMismatchError(FockSimError):
    """Matrix or registry dimensions do not agree."""


class NonSquareError(FockSimError):
    """The permanent is defined for square matrices only."""


class PhotonCapError(FockSimError):
    """A state component exceeds the supported photon number."""


class HeraldSpecError(FockSimError):
    """A herald specification is inconsistent with the registry."""


class EmptySweepError(FockSimError):
    """A sweep or table has no rows."""


class DegenerateFitError(FockSimError):
    """The fringe-fit design matrix is rank deficient or under-sampled."""


class ConfigError(FockSimError):
    """Base class for command-line configuration problems."""


class ConfigParseError(ConfigError):
    """The configuration file is not valid JSON."""


class ConfigValidationError(ConfigError):
    """A configuration key is missing, unknown, or out of range."""

    def __init__(self, key: str, message: str):
        super().__init__(message)
        self.key = key

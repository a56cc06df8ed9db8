"""Exception hierarchy shared across the package."""


class RotsymError(Exception):
    """Base class for all rotsym errors."""


class DimensionError(RotsymError):
    """Ambient dimension too small or inconsistent between inputs."""


class PoleError(RotsymError):
    """Observation numerically at +/- the symmetry axis: tangent sign undefined."""

    def __init__(self, message, indices=None):
        super().__init__(message)
        self.indices = indices if indices is not None else []


class UndefinedMeanError(RotsymError):
    """Resultant vector too short to define a spherical mean."""


class AmbiguousAxisError(RotsymError):
    """Leading eigenvalue of the covariance matrix is not simple."""


class DegenerateCosinesError(RotsymError):
    """All cosines numerically zero; cosine-weighted statistic undefined."""


class SingularInformationError(RotsymError):
    """Estimated information scalar is not positive."""


class InvalidShapeError(RotsymError):
    """Shape matrix is not symmetric positive-definite."""


class NormalizationError(RotsymError):
    """Angular function cannot be normalized into a density."""


class UnsupportedAngularFunctionError(RotsymError):
    """Angular function not usable by the requested sampler (e.g. unbounded)."""


class ConfigError(RotsymError):
    """Invalid experiment or mixture configuration."""


class ExperimentError(RotsymError):
    """Monte Carlo experiment failed (e.g. too many failed replicates)."""

"""Exception types shared across the package.

Two families matter for callers.  Problems with inputs (bad field values,
malformed config files, geometry outside the model's validity) raise
``ValueError`` subclasses; failures that occur during an otherwise valid
computation (degenerate posteriors, unresolved grids, incompatible supports)
raise ``NumericsError`` subclasses.  The command-line driver maps the first
family to exit code 2 and the second to exit code 3.
"""


class ConfigError(ValueError):
    """A configuration file is malformed or has missing/unknown/bad keys."""


class ParaxialError(ValueError):
    """Scene geometry violates the small-angle assumption of the phase model."""


class NumericsError(RuntimeError):
    """A computation could not be completed at the requested settings."""


class FlatPosteriorError(NumericsError):
    """The posterior carries no phase information, so no peak can be located."""


class SupportError(NumericsError):
    """Hypothesis distributions are not mutually absolutely continuous."""


class GridError(NumericsError):
    """A numerical grid or step size is too coarse for the requested accuracy."""

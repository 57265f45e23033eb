"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: ParameterError -> 2, DataError -> 3,
NumericalError -> 4.
"""


class IncGraphError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(IncGraphError):
    """Invalid argument or self-contradictory configuration."""


class DataError(IncGraphError):
    """Input data could not be read, parsed, or validated."""


class FormatError(DataError):
    """A file did not conform to its declared on-disk format."""


class ValidationError(DataError):
    """Data parsed fine but violates a semantic requirement."""


class DisconnectedAffinityError(DataError):
    """Affinity support has more than one connected component.

    Spectral embedding is ill-posed in this case; the component count is
    attached so callers can decide how to proceed.
    """

    def __init__(self, num_components: int, message: str | None = None):
        self.num_components = num_components
        if message is None:
            message = (
                f"affinity matrix has {num_components} connected components; "
                "Laplacian eigenmaps require a connected graph"
            )
        super().__init__(message)


class NumericalError(IncGraphError):
    """A numerical routine failed to converge or produced unusable output."""

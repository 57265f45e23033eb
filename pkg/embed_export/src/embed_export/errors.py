"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: ParameterError -> 2, FetchError and
FormatError -> 3, DimensionMismatchError -> 4.
"""


class ExportError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ExportError):
    """Invalid argument or self-contradictory job configuration."""


class FetchError(ExportError):
    """A dataset or model could not be obtained.

    ``resource`` is ``"dataset"`` or ``"model"`` and ``name`` identifies
    which one, so callers can react without parsing the message.
    """

    def __init__(self, resource: str, name: str, reason: str):
        self.resource = resource
        self.name = name
        self.reason = reason
        super().__init__(f"could not fetch {resource} {name!r}: {reason}")


class FormatError(ExportError):
    """Output data cannot be represented in its on-disk format."""


class DimensionMismatchError(ExportError):
    """The encoder produced vectors of an unexpected width.

    Either the width disagrees with the model card or it changed between
    batches; both mean the export must not be written.
    """

class PlotKitError(Exception):
    """Base class for all plotkit failures."""


class SchemaError(PlotKitError):
    """A CSV or sidecar file does not match its documented schema."""

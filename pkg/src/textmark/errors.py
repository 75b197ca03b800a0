"""Exception types shared across the pipeline."""


class TextmarkError(Exception):
    """Base class for all library-specific errors."""


class ConfigError(TextmarkError):
    """Bad configuration: unknown handles, unreadable files, invalid values."""


class ProviderError(TextmarkError):
    """A synonym provider failed to produce an answer (timeout, crash, error record)."""


class ProtocolError(TextmarkError):
    """A wire-protocol peer violated the record contract (malformed record, unknown id)."""


class UndecidableError(TextmarkError):
    """Detection had no testable content (N = 0); never a silent verdict."""


class AttackAborted(TextmarkError):
    """An external attack client was entirely unavailable."""

"""Masked-language-model synonym provider for the textmark wire protocol."""

from .session import LoadedSession, ProviderSession

__version__ = "0.1.0"

"""Exceptions; the CLI maps them onto exit codes."""


class ExtractError(Exception):
    """Base class for extraction failures."""


class CorpusFormatError(ExtractError):
    """Malformed corpus JSONL input."""


class MissingTranslation(ExtractError):
    """An English-side group was requested for untranslated articles."""


class EncoderUnavailable(ExtractError):
    """A requested encoder backend cannot be loaded."""


class TranslationServiceError(ExtractError):
    """The translation backend failed."""

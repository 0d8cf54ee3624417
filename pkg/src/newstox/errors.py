"""Exception hierarchy; the CLI maps these onto exit codes."""


class NewstoxError(Exception):
    """Base class for all package errors."""


class CorpusError(NewstoxError):
    """Malformed or inconsistent corpus input."""


class FeatureError(NewstoxError):
    """Bad feature file, unknown group, dimension or alignment problem."""


class ModelError(NewstoxError):
    """Invalid model inputs (dimension mismatch, degenerate targets)."""


class ConfigError(NewstoxError):
    """Invalid run configuration."""


class PipelineError(NewstoxError):
    """Failure while executing an experimental setup."""


class LeakError(PipelineError):
    """A prediction was produced by a model whose training set saw the article."""

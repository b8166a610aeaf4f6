"""Exception types shared across the toolkit."""


class ReactionMinerError(Exception):
    """Base class for all toolkit errors."""


class CorpusFormatError(ReactionMinerError):
    """Input file is unreadable or mostly malformed."""


class ConfigError(ReactionMinerError):
    """Invalid configuration value."""


class ModelError(ReactionMinerError):
    """Operation requires a usable (non-empty) emotion model."""


class NoSignalError(ReactionMinerError):
    """Operation requires scores with at least one matched pattern."""


class TrainingError(ReactionMinerError):
    """Learner cannot be trained on the given dataset."""

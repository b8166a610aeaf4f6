"""Reaction-labeled emotion pattern mining and sarcasm detection toolkit."""

from reaction_miner.emotions import Emotion, CANONICAL_ORDER

__version__ = "0.1.0"

__all__ = ["Emotion", "CANONICAL_ORDER", "__version__"]

"""claimcred: harvest fact-checked internet claims and compare sentiment with credibility."""

__version__ = "0.1.0"

"""Classifier ensembles as DQN-style agents, benchmarked against the plain classifiers."""

__version__ = "0.1.0"

"""Random matrix models for free infinitely divisible laws."""

__version__ = "0.1.0"

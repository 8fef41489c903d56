"""Single-qubit data re-uploading circuits for fitting real and complex functions."""

__version__ = "0.1.0"

"""Liouvillian exceptional points and dynamics of a driven-dissipative Kerr-cat qubit."""

__version__ = "0.1.0"

"""Replica-symmetric / 1RSB phase structure of the Ising pure p-spin glass."""

__version__ = "1.0.0"

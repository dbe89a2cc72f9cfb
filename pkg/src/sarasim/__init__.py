"""Sensor activation and radius adaptation on power diagrams."""

__version__ = "0.1.0"

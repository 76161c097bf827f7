"""Gaussian-state workbench for SU(1,1) and Mach-Zehnder phase estimation."""

__version__ = "0.1.0"

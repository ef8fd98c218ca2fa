"""Checks of synthetic timelike curvature bounds on finite Lorentzian pre-length spaces."""

__version__ = "0.1.0"

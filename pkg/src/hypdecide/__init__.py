"""Deciding hyperbolicity of closed 3-manifolds from group presentations."""

__version__ = "0.1.0"

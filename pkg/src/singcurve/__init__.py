"""Plane curve singularities over Q: Puiseux branches, blow-ups, Enriques diagrams."""

__version__ = "0.1.0"
